"""灾害设定文件读取与场景导出"""
from pathlib import Path
from typing import Optional, Tuple

import pandas as pd
from dotenv import dotenv_values
from pydantic import ValidationError

from freight_engine.errors import ConfigError
from freight_engine.network.model import Network
from freight_engine.scenarios.engine import ScenarioSample
from freight_engine.schemas.scenario import DisasterSpec


def load_disaster_spec(path: Path) -> Tuple[DisasterSpec, Optional[int]]:
    """读取 key=value 格式的灾害设定文件

    支持键: NAME, RISK_TAGS (| 分隔), HIT_FRACTION, REDUCTION, SEED

    :param path: 文件路径
    :return: (设定, 种子或 None)
    :raises ConfigError: 文件缺失或字段非法
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"disaster spec not found: {path}")
    values = {k.upper(): (v or "").strip() for k, v in dotenv_values(path).items()}

    fields = {
        "name": values.get("NAME") or path.stem,
        "risk_tags": [t.strip().lower() for t in values.get("RISK_TAGS", "").split("|") if t.strip()],
    }
    if values.get("HIT_FRACTION"):
        fields["hit_fraction"] = values["HIT_FRACTION"]
    if values.get("REDUCTION"):
        fields["reduction"] = values["REDUCTION"]

    try:
        spec = DisasterSpec.model_validate(fields)
        seed = int(values["SEED"]) if values.get("SEED") else None
    except (ValidationError, ValueError) as exc:
        raise ConfigError(f"{path.name}: {exc}") from exc
    return spec, seed


def export_scenario(sample: ScenarioSample, net: Network, path: Path) -> None:
    """导出场景容量 CSV: link_id,kind,cap_lo,cap_hi,capacity,degraded

    :param sample: 场景
    :param net: 路网
    :param path: 输出路径
    :return:
    """
    frame = pd.DataFrame({
        "link_id": [l.id for l in net.links],
        "kind": [l.kind.value for l in net.links],
        "cap_lo": [repr(float(v)) for v in net.cap_lo],
        "cap_hi": [repr(float(v)) for v in net.cap_hi],
        "capacity": [repr(float(v)) for v in sample.capacities],
        "degraded": [int(v) for v in sample.degraded],
    })
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
