"""路网 CSV 读写

节点文件: id,kind,state,region,lon,lat
路段文件: id,tail,head,kind,mode_access,length_miles,fftime_hr,cap_lo,cap_hi,reverse_id,risk_tags,state
"""
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Type, TypeVar

import pandas as pd
from pydantic import BaseModel, ValidationError

from freight_engine.errors import ConfigError, InvalidFieldValue
from freight_engine.logging_utils import get_logger
from freight_engine.network.model import Network, build_network, network_summary
from freight_engine.schemas.network import Link, LinkKind, Mode, Node, NodeKind, Region, RiskTag


NODE_COLUMNS: Sequence[str] = ("id", "kind", "state", "region", "lon", "lat")
LINK_COLUMNS: Sequence[str] = (
    "id", "tail", "head", "kind", "mode_access", "length_miles", "fftime_hr",
    "cap_lo", "cap_hi", "reverse_id", "risk_tags", "state",
)

# 兼容常见写法
_NODE_KIND_ALIASES: Dict[str, NodeKind] = {
    "centroid": NodeKind.CENTROID,
    "road": NodeKind.ROAD_INTERSECTION,
    "road_intersection": NodeKind.ROAD_INTERSECTION,
    "roadintersection": NodeKind.ROAD_INTERSECTION,
    "rail": NodeKind.RAIL_JUNCTION,
    "rail_junction": NodeKind.RAIL_JUNCTION,
    "railjunction": NodeKind.RAIL_JUNCTION,
}

E = TypeVar("E", bound=Enum)
M = TypeVar("M", bound=BaseModel)


def read_csv_table(path: Path, columns: Sequence[str]) -> pd.DataFrame:
    """按字符串读取 CSV 并检查表头

    :param path: 文件路径
    :param columns: 必需列
    :return:
    :raises ConfigError: 文件不存在或缺列
    """
    if not path.exists():
        raise ConfigError(f"file not found: {path}")
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ConfigError(f"{path.name} missing columns: {', '.join(missing)}")
    return frame


def _parse_enum(enum_cls: Type[E], raw: str, row: int, field: str) -> E:
    try:
        return enum_cls(raw.strip().lower())
    except ValueError:
        raise InvalidFieldValue(f"{field}={raw!r}", row=row) from None


def _parse_enum_set(enum_cls: Type[E], raw: str, row: int, field: str) -> FrozenSet[E]:
    parts = [p for p in raw.split("|") if p.strip()]
    return frozenset(_parse_enum(enum_cls, p, row, field) for p in parts)


def _parse_number(cast: Callable, raw: str, row: int, field: str):
    try:
        return cast(raw.strip())
    except ValueError:
        raise InvalidFieldValue(f"{field}={raw!r}", row=row) from None


def _build(model_cls: Type[M], row: int, **fields) -> M:
    """构造模型，字段约束不满足时按数据校验错误报告行号"""
    try:
        return model_cls(**fields)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(p) for p in error["loc"])
        raise InvalidFieldValue(f"{field}={fields.get(field)!r}: {error['msg']}", row=row) from None


def _parse_node(rec: Dict[str, str], row: int) -> Node:
    kind = _NODE_KIND_ALIASES.get(rec["kind"].strip().lower())
    if kind is None:
        raise InvalidFieldValue(f"kind={rec['kind']!r}", row=row)
    region = _parse_enum(Region, rec["region"], row, "region") if rec["region"].strip() else Region.UNASSIGNED
    lon_lat = None
    if rec["lon"].strip() and rec["lat"].strip():
        lon_lat = (_parse_number(float, rec["lon"], row, "lon"), _parse_number(float, rec["lat"], row, "lat"))
    return _build(
        Node,
        row,
        id=_parse_number(int, rec["id"], row, "id"),
        kind=kind,
        state_code=rec["state"].strip(),
        region=region,
        lon_lat=lon_lat,
    )


def _parse_link(rec: Dict[str, str], row: int) -> Link:
    reverse_raw = rec["reverse_id"].strip()
    return _build(
        Link,
        row,
        id=_parse_number(int, rec["id"], row, "id"),
        tail=_parse_number(int, rec["tail"], row, "tail"),
        head=_parse_number(int, rec["head"], row, "head"),
        kind=_parse_enum(LinkKind, rec["kind"], row, "kind"),
        mode_access=_parse_enum_set(Mode, rec["mode_access"], row, "mode_access"),
        length_miles=_parse_number(float, rec["length_miles"] or "0", row, "length_miles"),
        free_flow_time_hr=_parse_number(float, rec["fftime_hr"], row, "fftime_hr"),
        cap_lo=_parse_number(float, rec["cap_lo"], row, "cap_lo"),
        cap_hi=_parse_number(float, rec["cap_hi"], row, "cap_hi"),
        reverse_link=_parse_number(int, reverse_raw, row, "reverse_id") if reverse_raw else None,
        risk_tags=_parse_enum_set(RiskTag, rec["risk_tags"], row, "risk_tags"),
        state_code=rec["state"].strip(),
    )


def load_network(node_file: Path, link_file: Path, run_id: Optional[str] = None) -> Network:
    """读取并校验路网

    :param node_file: 节点 CSV
    :param link_file: 路段 CSV
    :param run_id: 运行标识
    :return:
    :raises DataValidationError: 数据违反路网不变式
    """
    logger = get_logger(run_id)
    node_frame = read_csv_table(Path(node_file), NODE_COLUMNS)
    link_frame = read_csv_table(Path(link_file), LINK_COLUMNS)

    nodes = [_parse_node(rec, row) for row, rec in enumerate(node_frame.to_dict("records"), start=2)]
    links = [_parse_link(rec, row) for row, rec in enumerate(link_frame.to_dict("records"), start=2)]

    net = build_network(nodes, links)
    summary = network_summary(net)
    logger.info(
        f"路网载入完成: {net.n_nodes} 个节点, {net.n_links} 条路段 "
        f"(节点 {summary['nodes']}, 路段 {summary['links']})"
    )
    return net


def _fmt_float(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def _fmt_set(values: FrozenSet[Enum]) -> str:
    return "|".join(sorted(v.value for v in values))


def export_network(net: Network, node_file: Path, link_file: Path) -> None:
    """按载入格式导出路网，包括物化后的反向场站路段

    :param net: 路网
    :param node_file: 节点 CSV 输出路径
    :param link_file: 路段 CSV 输出路径
    :return:
    """
    node_rows: List[Dict[str, str]] = []
    for node in net.nodes:
        lon, lat = node.lon_lat if node.lon_lat is not None else (None, None)
        node_rows.append({
            "id": str(node.id),
            "kind": node.kind.value,
            "state": node.state_code,
            "region": "" if node.region == Region.UNASSIGNED else node.region.value,
            "lon": _fmt_float(lon),
            "lat": _fmt_float(lat),
        })

    link_rows: List[Dict[str, str]] = []
    for link in net.links:
        link_rows.append({
            "id": str(link.id),
            "tail": str(link.tail),
            "head": str(link.head),
            "kind": link.kind.value,
            "mode_access": _fmt_set(link.mode_access),
            "length_miles": _fmt_float(link.length_miles),
            "fftime_hr": _fmt_float(link.free_flow_time_hr),
            "cap_lo": _fmt_float(link.cap_lo),
            "cap_hi": _fmt_float(link.cap_hi),
            "reverse_id": "" if link.reverse_link is None else str(link.reverse_link),
            "risk_tags": _fmt_set(link.risk_tags),
            "state": link.state_code,
        })

    for path, rows, columns in ((node_file, node_rows, NODE_COLUMNS), (link_file, link_rows, LINK_COLUMNS)):
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(rows, columns=list(columns)).to_csv(path, index=False, lineterminator="\n")
