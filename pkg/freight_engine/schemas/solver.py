"""GP 求解参数"""
from typing import Optional

from pydantic import BaseModel, Field

from freight_engine.config import config


class UnitFactors(BaseModel):
    """多式联运单位折算系数

    多式联运需求按自身单位存储，加载到道路/铁路路段时分别乘以对应系数。
    """
    im_truck_equiv: float = Field(default=1.0, gt=0.0)
    im_rail_equiv: float = Field(default=1.0, gt=0.0)

    model_config = {"frozen": True}


class SolverParams(BaseModel):
    """梯度投影求解参数"""
    step_size: float = Field(default=1.0, gt=0.0, description="步长 α(p)")
    gap_tol: float = Field(default=1e-4, gt=0.0, description="相对间隙收敛阈值")
    path_cost_tol: Optional[float] = Field(
        default=1e-3, gt=0.0, description="已用路径相对最短路的最大超出比例；None 时只看相对间隙"
    )
    max_iters: int = Field(default=config.FREIGHT_MAX_ITERS, ge=1)
    backtracking: bool = Field(default=False, description="目标值上升时回退步长")
    intermodal_k: int = Field(default=1, ge=1, description="每次迭代为多式联运生成的最短路条数")
    raise_on_max_iters: bool = False

    model_config = {"frozen": True}
