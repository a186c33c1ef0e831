"""路段阻抗函数、导数与 Beckmann 积分

道路采用 BPR 函数 t0·(1 + 0.15·(x/C)^4)；铁路为双向共用轨道，
t0·(1 + ((x + x')/C)^4)；场站转运与连接线取常数自由流时间。
所有核函数对标量和 numpy 数组通用，容量可为 (N, L) 的多场景矩阵。
"""
from dataclasses import dataclass

import numpy as np

from freight_engine.schemas.network import Link, LinkKind


BPR_ALPHA = 0.15
BPR_BETA = 4


@dataclass(frozen=True)
class LinkState:
    """单条路段的状态"""
    flow: float
    capacity: float
    opposing_flow: float = 0.0


def _road_time(fftime, flow, capacity):
    return fftime * (1.0 + BPR_ALPHA * (flow / capacity) ** BPR_BETA)


def _rail_time(fftime, shared_flow, capacity):
    return fftime * (1.0 + (shared_flow / capacity) ** 4)


def _road_derivative(fftime, flow, capacity):
    return fftime * BPR_ALPHA * BPR_BETA * flow ** 3 / capacity ** 4


def _rail_derivative(fftime, shared_flow, capacity):
    return fftime * 4.0 * shared_flow ** 3 / capacity ** 4


def _road_integral(fftime, flow, capacity):
    return fftime * (flow + BPR_ALPHA / (BPR_BETA + 1) * flow ** 5 / capacity ** 4)


def _rail_integral(fftime, shared_flow, capacity):
    return fftime * (shared_flow + shared_flow ** 5 / (5.0 * capacity ** 4))


def road_time(fftime: float, s: LinkState) -> float:
    """道路 BPR 时间（小时），忽略 opposing_flow"""
    return float(_road_time(fftime, s.flow, s.capacity))


def rail_time(fftime: float, s: LinkState) -> float:
    """铁路时间（小时），双向流量共用容量"""
    return float(_rail_time(fftime, s.flow + s.opposing_flow, s.capacity))


def link_time(link: Link, s: LinkState) -> float:
    """按路段类型分派阻抗函数

    :param link: 路段
    :param s: 路段状态
    :return: 小时
    """
    if link.kind == LinkKind.ROAD:
        return road_time(link.free_flow_time_hr, s)
    if link.kind == LinkKind.RAIL:
        return rail_time(link.free_flow_time_hr, s)
    return link.free_flow_time_hr


def link_time_derivative(link: Link, s: LinkState) -> float:
    """阻抗对本方向流量的偏导

    :param link: 路段
    :param s: 路段状态
    :return: 小时 / (车·天⁻¹)
    """
    if link.kind == LinkKind.ROAD:
        return float(_road_derivative(link.free_flow_time_hr, s.flow, s.capacity))
    if link.kind == LinkKind.RAIL:
        return float(_rail_derivative(link.free_flow_time_hr, s.flow + s.opposing_flow, s.capacity))
    return 0.0


def beckmann_term(link: Link, s: LinkState) -> float:
    """阻抗函数从 0 到流量的闭式积分

    铁路按 X = flow + opposing_flow 积分。

    :param link: 路段
    :param s: 路段状态
    :return:
    """
    if link.kind == LinkKind.ROAD:
        return float(_road_integral(link.free_flow_time_hr, s.flow, s.capacity))
    if link.kind == LinkKind.RAIL:
        return float(_rail_integral(link.free_flow_time_hr, s.flow + s.opposing_flow, s.capacity))
    return link.free_flow_time_hr * s.flow


class LinkCostModel:
    """整网向量化的阻抗计算

    :param fftime: 自由流时间 (L,)
    :param is_road: 道路掩码 (L,)
    :param is_rail: 铁路掩码 (L,)
    :param reverse: 反向路段下标，无则 -1 (L,)
    """

    def __init__(self, fftime: np.ndarray, is_road: np.ndarray, is_rail: np.ndarray, reverse: np.ndarray) -> None:
        self.fftime = fftime
        self.is_road = is_road
        self.is_rail = is_rail
        own = np.arange(len(fftime))
        self._opposite = np.where(is_rail & (reverse >= 0), reverse, own)

    @classmethod
    def for_network(cls, net) -> "LinkCostModel":
        return cls(net.fftime, net.is_road, net.is_rail, net.reverse)

    def opposing(self, flows: np.ndarray) -> np.ndarray:
        return np.where(self.is_rail, flows[self._opposite], 0.0)

    def shared(self, flows: np.ndarray) -> np.ndarray:
        """铁路取双向之和，其余取本身流量"""
        return flows + self.opposing(flows)

    def times(self, flows: np.ndarray, capacities: np.ndarray) -> np.ndarray:
        road = _road_time(self.fftime, flows, capacities)
        rail = _rail_time(self.fftime, self.shared(flows), capacities)
        return np.where(self.is_road, road, np.where(self.is_rail, rail, self.fftime))

    def derivatives(self, flows: np.ndarray, capacities: np.ndarray) -> np.ndarray:
        road = _road_derivative(self.fftime, flows, capacities)
        rail = _rail_derivative(self.fftime, self.shared(flows), capacities)
        return np.where(self.is_road, road, np.where(self.is_rail, rail, 0.0))

    def integrals(self, flows: np.ndarray, capacities: np.ndarray) -> np.ndarray:
        road = _road_integral(self.fftime, flows, capacities)
        rail = _rail_integral(self.fftime, self.shared(flows), capacities)
        return np.where(self.is_road, road, np.where(self.is_rail, rail, self.fftime * flows))
