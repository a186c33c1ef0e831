"""总成本统计"""
import math
from typing import Optional, Sequence

from freight_engine.errors import InsufficientSamples
from freight_engine.schemas.report import CostStats
from freight_engine.schemas.saa import SaaReport


def cost_stats(
    objective_samples: Sequence[float],
    gap: Optional[float] = None,
    gap_sigma: Optional[float] = None,
) -> CostStats:
    """样本均值、均值的标准差、最小值与最大值

    标准差取 sqrt(Σ(q - q̄)² / ((n - 1)·n))，与候选评估方差同一口径。

    :param objective_samples: 各评估场景下的目标值
    :param gap: 最优性间隙，原样透传
    :param gap_sigma: 间隙标准差，原样透传
    :return:
    :raises InsufficientSamples: 样本数小于 2
    """
    n = len(objective_samples)
    if n < 2:
        raise InsufficientSamples(f"need >= 2 samples, got {n}")
    low, high = min(objective_samples), max(objective_samples)
    mean = math.fsum(objective_samples) / n
    variance = math.fsum((q - mean) ** 2 for q in objective_samples) / ((n - 1) * n)
    return CostStats(
        mean=min(max(mean, low), high),
        std_dev=math.sqrt(variance),
        min=low,
        max=high,
        gap=gap,
        gap_sigma=gap_sigma,
    )


def report_cost_stats(report: SaaReport) -> CostStats:
    """选定候选的成本统计"""
    chosen = report.chosen_candidate
    sigma = None if chosen.gap_var is None else math.sqrt(max(chosen.gap_var, 0.0))
    return cost_stats(chosen.objectives, chosen.gap, sigma)
