"""需求 CSV 读取: origin,destination,mode,units_per_day"""
from pathlib import Path
from typing import Dict, Optional

from freight_engine.demand.table import DemandKey, DemandTable
from freight_engine.errors import InvalidFieldValue, NegativeDemand, SelfLoopDemand, UnknownCentroid
from freight_engine.logging_utils import get_logger
from freight_engine.network.loader import read_csv_table
from freight_engine.network.model import Network
from freight_engine.schemas.network import Mode, NodeKind


DEMAND_COLUMNS = ("origin", "destination", "mode", "units_per_day")


def load_demand(file: Path, net: Network, run_id: Optional[str] = None) -> DemandTable:
    """读取需求表并对照路网质心校验

    :param file: 需求 CSV
    :param net: 已载入的路网
    :param run_id: 运行标识
    :return:
    :raises UnknownCentroid: 引用了不存在或非质心节点
    :raises NegativeDemand: 需求为负
    :raises SelfLoopDemand: 起讫点相同
    """
    logger = get_logger(run_id)
    frame = read_csv_table(Path(file), DEMAND_COLUMNS)

    entries: Dict[DemandKey, float] = {}
    for row, rec in enumerate(frame.to_dict("records"), start=2):
        try:
            origin = int(rec["origin"].strip())
            destination = int(rec["destination"].strip())
            mode = Mode(rec["mode"].strip().lower())
            units = float(rec["units_per_day"].strip())
        except ValueError:
            raise InvalidFieldValue(f"unparsable demand row {rec}", row=row) from None

        if units < 0:
            raise NegativeDemand(f"units={units}", row=row)
        if origin == destination:
            raise SelfLoopDemand(origin=origin, row=row)
        for node_id in (origin, destination):
            if not 0 <= node_id < net.n_nodes or net.nodes[node_id].kind != NodeKind.CENTROID:
                raise UnknownCentroid(node=node_id, row=row)
        key = (origin, destination, mode)
        entries[key] = entries.get(key, 0.0) + units

    table = DemandTable(entries)
    logger.info(
        "需求载入完成: "
        + ", ".join(f"{mode.value}={table.totals[mode]:.6g}" for mode in Mode)
        + f" ({len(table)} 个 O-D-方式条目)"
    )
    return table
