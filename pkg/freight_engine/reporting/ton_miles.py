"""按大区与方式统计吨英里

方式按承载路段归属：道路路段计入 truck（含多式联运的道路段），
铁路路段计入 rail（含多式联运的铁路段）；场站转运与连接线不计。
"""
import math
from typing import Dict, List, Mapping, Optional

import numpy as np

from freight_engine.logging_utils import get_logger, summarize_ids
from freight_engine.network.model import Network
from freight_engine.schemas.network import Mode, Region
from freight_engine.schemas.report import TonMileConfig, TonMileTable
from freight_engine.solver.paths import EquilibriumSolution


CONTIGUOUS_US = "contiguous_us"
REPORT_MODES = (Mode.TRUCK.value, Mode.RAIL.value)
REGION_ROWS = tuple(r.value for r in Region if r != Region.UNASSIGNED)


def _empty_rows() -> Dict[str, float]:
    rows = {region: 0.0 for region in REGION_ROWS}
    rows[Region.UNASSIGNED.value] = 0.0
    rows[CONTIGUOUS_US] = 0.0
    return rows


def ton_miles_from_class_flows(
    class_flows: Mapping[Mode, np.ndarray],
    net: Network,
    cfg: TonMileConfig = TonMileConfig(),
    run_id: Optional[str] = None,
) -> TonMileTable:
    """由各方式路段流量计算吨英里表

    :param class_flows: 方式 -> (L,) 路段流量（各自单位）
    :param net: 路网
    :param cfg: 吨位折算参数
    :param run_id: 运行标识
    :return:
    """
    intermodal = class_flows[Mode.INTERMODAL] * cfg.tons_per_intermodal_unit
    per_link = {
        Mode.TRUCK.value: np.where(
            net.is_road, (class_flows[Mode.TRUCK] * cfg.tons_per_truck + intermodal) * net.length, 0.0
        ),
        Mode.RAIL.value: np.where(
            net.is_rail, (class_flows[Mode.RAIL] * cfg.tons_per_train + intermodal) * net.length, 0.0
        ),
    }

    regions = [net.link_region(i).value for i in range(net.n_links)]
    daily: Dict[str, Dict[str, float]] = {}
    for mode in REPORT_MODES:
        values = per_link[mode]
        buckets: Dict[str, List[float]] = {region: [] for region in _empty_rows()}
        for link_id, value in enumerate(values.tolist()):
            if value != 0.0:
                buckets[regions[link_id]].append(value)
        rows = _empty_rows()
        for region in REGION_ROWS + (Region.UNASSIGNED.value,):
            rows[region] = math.fsum(buckets[region])
        rows[CONTIGUOUS_US] = math.fsum(values.tolist())
        daily[mode] = rows

    unassigned = [
        i for i in range(net.n_links)
        if regions[i] == Region.UNASSIGNED.value and (net.is_road[i] or net.is_rail[i])
        and (per_link[Mode.TRUCK.value][i] != 0.0 or per_link[Mode.RAIL.value][i] != 0.0)
    ]
    if unassigned:
        get_logger(run_id).warning(
            f"UnassignedRegion: {len(unassigned)} 条有流量路段未归属大区，仅计入合计: {summarize_ids(unassigned)}"
        )

    factor = cfg.annualization_factor
    annual = {mode: {region: value * factor for region, value in rows.items()} for mode, rows in daily.items()}
    return TonMileTable(daily=daily, annual=annual, annualization_factor=factor, unassigned_links=unassigned)


def ton_miles(
    solution: EquilibriumSolution,
    net: Network,
    cfg: TonMileConfig = TonMileConfig(),
    run_id: Optional[str] = None,
) -> TonMileTable:
    """均衡解的吨英里表（每日与全年）"""
    return ton_miles_from_class_flows(solution.class_flows, net, cfg, run_id)


def compare_ton_miles(
    base: TonMileTable,
    scenario: TonMileTable,
    annual: bool = True,
) -> Dict[str, Dict[str, Optional[float]]]:
    """相对基准情形的百分比变化，基准为 0 时为 None

    :param base: 基准情形
    :param scenario: 灾害情形
    :param annual: 使用全年还是每日数据
    :return: 方式 -> 大区 -> 百分比
    """
    left = base.annual if annual else base.daily
    right = scenario.annual if annual else scenario.daily
    change: Dict[str, Dict[str, Optional[float]]] = {}
    for mode, rows in left.items():
        change[mode] = {}
        for region, value in rows.items():
            other = right[mode][region]
            change[mode][region] = None if value == 0.0 else 100.0 * (other - value) / value
    return change
