"""路段流量聚合与归一化 Beckmann 目标函数"""
import math
from typing import Dict, Optional, Union

import numpy as np

from freight_engine.demand.table import Denominators
from freight_engine.errors import ZeroDenominator
from freight_engine.network.model import Network
from freight_engine.performance.link_performance import LinkCostModel
from freight_engine.scenarios.engine import ScenarioSample
from freight_engine.schemas.network import Mode
from freight_engine.schemas.solver import UnitFactors
from freight_engine.solver.paths import PathSet


CapacityInput = Union[ScenarioSample, np.ndarray]


def mode_coefficients(net: Network, factors: UnitFactors = UnitFactors()) -> Dict[Mode, np.ndarray]:
    """每种方式一单位路径流量在各路段上产生的负载

    卡车、铁路为 1；多式联运在道路上乘 im_truck_equiv，在铁路上乘 im_rail_equiv，
    场站转运与连接线为 1。

    :param net: 路网
    :param factors: 折算系数
    :return:
    """
    ones = np.ones(net.n_links)
    intermodal = np.where(
        net.is_road, factors.im_truck_equiv, np.where(net.is_rail, factors.im_rail_equiv, 1.0)
    )
    return {Mode.TRUCK: ones, Mode.RAIL: ones, Mode.INTERMODAL: intermodal}


def class_link_flows(path_sets: PathSet, n_links: int) -> Dict[Mode, np.ndarray]:
    """按方式累加路径流量（各自单位，未折算）"""
    flows = {mode: np.zeros(n_links) for mode in Mode}
    for (_, _, mode), path_flows in path_sets.items():
        for pf in path_flows:
            if pf.flow != 0.0:
                np.add.at(flows[mode], pf.path.index, pf.flow)
    return flows


def aggregate_link_flows(
    path_sets: PathSet,
    net: Network,
    factors: UnitFactors = UnitFactors(),
) -> np.ndarray:
    """x_a = Σ_k f_k·δ_a^k，多式联运按折算系数计入道路/铁路

    :param path_sets: 路径集合
    :param net: 路网
    :param factors: 折算系数
    :return: (L,) 路段流量
    """
    coefficients = mode_coefficients(net, factors)
    per_class = class_link_flows(path_sets, net.n_links)
    total = np.zeros(net.n_links)
    for mode in Mode:
        total += coefficients[mode] * per_class[mode]
    return total


def capacity_matrix(scenario: CapacityInput) -> np.ndarray:
    """统一为 (N, L) 容量矩阵"""
    capacities = scenario.capacities if isinstance(scenario, ScenarioSample) else scenario
    return np.atleast_2d(np.asarray(capacities, dtype=np.float64))


def objective_values(
    net: Network,
    capacities: np.ndarray,
    link_flows: np.ndarray,
    denoms: Denominators,
    cost_model: Optional[LinkCostModel] = None,
) -> np.ndarray:
    """固定流量下逐场景计算归一化目标值

    道路积分项除以道路分母；铁路积分项（双向流量 X）除以铁路分母；
    场站转运与连接线的 t0·x 项除以道路分母，道路分母为 0 时改用铁路分母。

    :param net: 路网
    :param capacities: (N, L) 容量矩阵
    :param link_flows: (L,) 路段流量
    :param denoms: 归一化分母
    :param cost_model: 可复用的阻抗模型
    :return: (N,) 目标值
    :raises ZeroDenominator: 非零项对应的分母为 0
    """
    model = cost_model or LinkCostModel.for_network(net)
    integrals = model.integrals(link_flows, capacity_matrix(capacities))
    road = integrals[:, net.is_road].sum(axis=1)
    rail = integrals[:, net.is_rail].sum(axis=1)
    fixed = integrals[:, net.is_fixed].sum(axis=1)

    fixed_denom = denoms.road if denoms.road > 0 else denoms.rail
    value = np.zeros(integrals.shape[0])
    for name, term, denom in (("road", road, denoms.road), ("rail", rail, denoms.rail), ("fixed", fixed, fixed_denom)):
        if denom > 0:
            value += term / denom
        elif np.any(term != 0.0):
            raise ZeroDenominator(term=name)
    return value


def objective_value(
    net: Network,
    scenario: CapacityInput,
    link_flows: np.ndarray,
    denoms: Denominators,
) -> float:
    """归一化目标值；多场景容量时取样本平均

    :param net: 路网
    :param scenario: 场景或 (L,)/(N, L) 容量
    :param link_flows: 路段流量
    :param denoms: 归一化分母
    :return:
    """
    return float(objective_values(net, capacity_matrix(scenario), link_flows, denoms).mean())


def relative_gap(previous: float, current: float) -> float:
    """相邻两次迭代目标值的相对变化 |z_prev - z| / |z_prev|"""
    if previous == 0.0:
        return 0.0 if current == 0.0 else math.inf
    return abs(previous - current) / abs(previous)
