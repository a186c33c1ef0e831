"""运行产物读写：路段流量 CSV、分方式流量 CSV、JSON 报告"""
from pathlib import Path
from typing import Any, Dict, List, Type, TypeVar

import numpy as np
import orjson
import pandas as pd
from pydantic import BaseModel, ValidationError

from freight_engine.errors import CorruptArtifact, MissingArtifact
from freight_engine.network.model import Network
from freight_engine.performance.link_performance import LinkCostModel
from freight_engine.schemas.network import Mode
from freight_engine.solver.paths import EquilibriumSolution


LINK_FLOW_COLUMNS = (
    "link_id", "kind", "tail", "head", "state", "region", "flow", "capacity", "time_hr", "vc_ratio",
)
CLASS_FLOW_COLUMNS = ("link_id", "truck", "rail", "intermodal")

M = TypeVar("M", bound=BaseModel)


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_frame(rows: List[Dict[str, str]], columns, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=list(columns)).to_csv(path, index=False, lineterminator="\n")


def export_link_flows(solution: EquilibriumSolution, net: Network, path: Path) -> None:
    """导出路段流量，按 link_id 升序

    capacity 与 time_hr 取求解所用场景的平均值。

    :param solution: 均衡解
    :param net: 路网
    :param path: 输出路径
    :return:
    """
    capacities = np.atleast_2d(solution.capacities)
    times = LinkCostModel.for_network(net).times(solution.link_flows, capacities).mean(axis=0)
    mean_capacity = capacities.mean(axis=0)

    rows = []
    for link in net.links:
        flow = float(solution.link_flows[link.id])
        capacity = float(mean_capacity[link.id])
        rows.append({
            "link_id": str(link.id),
            "kind": link.kind.value,
            "tail": str(link.tail),
            "head": str(link.head),
            "state": link.state_code,
            "region": net.link_region(link.id).value,
            "flow": _fmt(flow),
            "capacity": _fmt(capacity),
            "time_hr": _fmt(times[link.id]),
            "vc_ratio": _fmt(flow / capacity),
        })
    _write_frame(rows, LINK_FLOW_COLUMNS, path)


def export_class_flows(solution: EquilibriumSolution, path: Path) -> None:
    """导出分方式路段流量，供报表在不重新求解的情况下重算吨英里"""
    flows = solution.class_flows
    rows = [
        {
            "link_id": str(i),
            "truck": _fmt(flows[Mode.TRUCK][i]),
            "rail": _fmt(flows[Mode.RAIL][i]),
            "intermodal": _fmt(flows[Mode.INTERMODAL][i]),
        }
        for i in range(len(solution.link_flows))
    ]
    _write_frame(rows, CLASS_FLOW_COLUMNS, path)


def load_class_flows(path: Path, net: Network) -> Dict[Mode, np.ndarray]:
    """读取分方式路段流量

    :param path: class_flows.csv
    :param net: 路网
    :return:
    :raises MissingArtifact: 文件不存在
    :raises CorruptArtifact: 文件无法解析或与路网不一致
    """
    path = Path(path)
    if not path.exists():
        raise MissingArtifact(f"file not found: {path}")
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
        ids = frame["link_id"].to_numpy(dtype=np.int64)
        flows = {mode: frame[mode.value].to_numpy(dtype=np.float64) for mode in Mode}
    except (ValueError, KeyError, pd.errors.ParserError) as exc:
        raise CorruptArtifact(f"{path.name}: {exc}") from None
    if len(ids) != net.n_links or not np.array_equal(ids, np.arange(net.n_links)):
        raise CorruptArtifact(f"{path.name}: link ids do not match the network ({net.n_links} links)")
    return flows


def dump_json(payload: Any) -> bytes:
    return orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY)


def write_json(payload: Any, path: Path) -> None:
    """原子写入 JSON（先写临时文件再替换）"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_suffix(".tmp")
    temp_file.write_bytes(dump_json(payload))
    temp_file.replace(path)


def write_model(model: BaseModel, path: Path) -> None:
    write_json(model.model_dump(mode="json"), path)


def read_json(path: Path) -> Any:
    path = Path(path)
    if not path.exists():
        raise MissingArtifact(f"file not found: {path}")
    try:
        return orjson.loads(path.read_bytes())
    except orjson.JSONDecodeError:
        raise CorruptArtifact(f"{path.name}: invalid JSON") from None


def read_model(model_cls: Type[M], path: Path) -> M:
    """读取 JSON 产物并校验

    :param model_cls: 模型类
    :param path: 文件路径
    :return:
    :raises MissingArtifact: 文件不存在
    :raises CorruptArtifact: JSON 解析失败或字段不符
    """
    path = Path(path)
    if not path.exists():
        raise MissingArtifact(f"file not found: {path}")
    try:
        return model_cls.model_validate(orjson.loads(path.read_bytes()))
    except (orjson.JSONDecodeError, ValidationError) as exc:
        raise CorruptArtifact(f"{path.name}: {exc.__class__.__name__}") from None
