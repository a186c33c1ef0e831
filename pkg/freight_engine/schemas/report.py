"""报表模型"""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class TonMileConfig(BaseModel):
    """吨英里折算参数（外生给定）"""
    tons_per_truck: float = Field(default=16.0, gt=0.0)
    tons_per_train: float = Field(default=3500.0, gt=0.0)
    tons_per_intermodal_unit: float = Field(default=16.0, gt=0.0)
    annualization_factor: float = Field(default=365.0, gt=0.0, description="天/年")

    model_config = {"frozen": True}


class CostStats(BaseModel):
    """总成本统计（归一化目标值，小时/天）"""
    mean: float
    std_dev: float = Field(ge=0.0)
    min: float
    max: float
    gap: Optional[float] = None
    gap_sigma: Optional[float] = None


class TonMileTable(BaseModel):
    """按方式 × 大区的吨英里

    daily/annual 的键为方式（truck/rail），值为 大区 -> 吨英里，
    其中 contiguous_us 为全部路段合计（含 unassigned）。
    """
    daily: Dict[str, Dict[str, float]]
    annual: Dict[str, Dict[str, float]]
    annualization_factor: float
    unassigned_links: List[int] = Field(default_factory=list)

    def cell(self, mode: str, region: str, annual: bool = False) -> float:
        table = self.annual if annual else self.daily
        return table[mode][region]
