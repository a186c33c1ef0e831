"""灾害场景设定模型"""
from typing import FrozenSet

from pydantic import BaseModel, Field

from freight_engine.schemas.network import RiskTag


class DisasterSpec(BaseModel):
    """灾害设定

    风险区内（risk_tags 有交集）的路段中随机选取 hit_fraction 比例，
    容量再乘以 (1 - reduction)。
    """
    name: str
    risk_tags: FrozenSet[RiskTag] = frozenset()
    hit_fraction: float = Field(default=0.5, ge=0.0, le=1.0)
    reduction: float = Field(default=0.8, ge=0.0, lt=1.0)

    model_config = {"frozen": True}
