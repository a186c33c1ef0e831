"""SAA 配置与报告模型"""
from typing import List, Optional

from pydantic import BaseModel, Field

from freight_engine.schemas.scenario import DisasterSpec
from freight_engine.schemas.solver import SolverParams, UnitFactors


class SaaConfig(BaseModel):
    """SAA 参数，默认值取 M=100, N=1, N'=1000"""
    M: int = Field(default=100, ge=1, description="候选样本数")
    N: int = Field(default=1, ge=1, description="每个 SAA 问题的场景数")
    N_prime: int = Field(default=1000, ge=2, description="评估场景数")
    base_seed: int = 0
    solver: SolverParams = Field(default_factory=SolverParams)
    disaster: DisasterSpec
    unit_factors: UnitFactors = Field(default_factory=UnitFactors)


class CandidateReport(BaseModel):
    """单个候选流量模式的评估结果"""
    index: int
    z: float = Field(description="该 SAA 问题的最优目标值 z_N^m")
    iterations: int
    converged: bool
    eval_mean: float
    eval_var: float
    gap: float
    gap_var: Optional[float] = None
    duplicate_of: Optional[int] = None
    objectives: List[float] = Field(default_factory=list, description="N' 个评估场景下的目标值")


class SaaReport(BaseModel):
    """SAA 报告"""
    config: SaaConfig
    train_seeds: List[List[int]]
    eval_seeds: List[int]
    z_values: List[float]
    lower_bound_mean: float
    lower_bound_var: Optional[float] = None
    candidates: List[CandidateReport]
    chosen: int
    # 运行时长单独写入 run_meta.json，报告本身保持逐字节可复现
    runtime_sec: float = Field(default=0.0, exclude=True)

    @property
    def candidate_evals(self) -> List[tuple]:
        return [(c.eval_mean, c.eval_var) for c in self.candidates]

    @property
    def gaps(self) -> List[float]:
        return [c.gap for c in self.candidates]

    @property
    def gap_vars(self) -> List[Optional[float]]:
        return [c.gap_var for c in self.candidates]

    @property
    def chosen_candidate(self) -> CandidateReport:
        return self.candidates[self.chosen]
