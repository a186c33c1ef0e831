"""SAA 下界、候选评估与间隙统计"""
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from freight_engine.demand.table import Denominators
from freight_engine.errors import InsufficientSamples
from freight_engine.network.model import Network
from freight_engine.solver.objective import objective_values


def mean_and_variance(values: Sequence[float]) -> Tuple[float, float]:
    """样本均值及均值估计量的方差 Σ(v - v̄)² / ((n - 1)·n)

    :param values: 样本
    :return:
    :raises InsufficientSamples: 样本数小于 2
    """
    n = len(values)
    if n < 2:
        raise InsufficientSamples(f"need >= 2 samples, got {n}")
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / ((n - 1) * n)
    return mean, variance


def lower_bound_stats(z_values: Sequence[float], with_variance: bool = True) -> Tuple[float, Optional[float]]:
    """M 个 SAA 最优值的均值（下界估计）及其方差

    :param z_values: z_N^m, m = 1..M
    :param with_variance: 是否要求方差
    :return: (mean, variance)；with_variance=False 且 M=1 时方差为 None
    :raises InsufficientSamples: 需要方差但 M < 2
    """
    if not z_values:
        raise InsufficientSamples("no SAA objective values")
    if len(z_values) < 2:
        if with_variance:
            raise InsufficientSamples(f"need >= 2 samples, got {len(z_values)}")
        return float(z_values[0]), None
    return mean_and_variance(list(z_values))


def candidate_objectives(
    net: Network,
    link_flows: np.ndarray,
    eval_capacities: np.ndarray,
    denoms: Denominators,
) -> np.ndarray:
    """固定流量在每个评估场景下的目标值 Q(ỹ, ξⁿ)，不重新求解"""
    return objective_values(net, eval_capacities, link_flows, denoms)


def gap_stats(eval_mean: float, eval_var: float, lb_mean: float,
              lb_var: Optional[float]) -> Tuple[float, Optional[float]]:
    """最优性间隙及其方差；下界方差缺失时间隙方差为 None"""
    gap = eval_mean - lb_mean
    return gap, None if lb_var is None else eval_var + lb_var
