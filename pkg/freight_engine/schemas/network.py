"""路网节点/路段的 Pydantic 模型"""
from enum import Enum
from typing import FrozenSet, Optional, Tuple

from pydantic import BaseModel, Field


class Mode(str, Enum):
    """货运方式"""
    TRUCK = "truck"
    RAIL = "rail"
    INTERMODAL = "intermodal"


class NodeKind(str, Enum):
    """节点类型"""
    CENTROID = "centroid"
    ROAD_INTERSECTION = "road"
    RAIL_JUNCTION = "rail"


class Region(str, Enum):
    """人口普查大区"""
    MIDWEST = "midwest"
    NORTHEAST = "northeast"
    SOUTH = "south"
    WEST = "west"
    UNASSIGNED = "unassigned"


class LinkKind(str, Enum):
    """路段类型"""
    ROAD = "road"
    RAIL = "rail"
    TERMINAL = "terminal"
    CONNECTOR = "connector"


class RiskTag(str, Enum):
    """灾害风险区标签"""
    EARTHQUAKE_HIGH = "earthquake_high"
    EARTHQUAKE_MODERATE = "earthquake_moderate"
    HURRICANE = "hurricane"
    TORNADO = "tornado"
    FLOOD = "flood"


# 连接线的可通行方式只有卡车和铁路两种
ACCESS_MODES: Tuple[Mode, ...] = (Mode.TRUCK, Mode.RAIL)


class Node(BaseModel):
    """路网节点"""
    id: int = Field(ge=0)
    kind: NodeKind
    state_code: str = ""
    region: Region = Region.UNASSIGNED
    lon_lat: Optional[Tuple[float, float]] = None

    model_config = {"frozen": True}


class Link(BaseModel):
    """有向路段

    场站转运路段在载入时成对物化为互逆的两条；铁路线必须带 reverse_link。
    """
    id: int = Field(ge=0)
    tail: int = Field(ge=0)
    head: int = Field(ge=0)
    kind: LinkKind
    mode_access: FrozenSet[Mode] = frozenset()
    length_miles: float = Field(default=0.0, ge=0.0)
    free_flow_time_hr: float
    cap_lo: float
    cap_hi: float
    reverse_link: Optional[int] = None
    risk_tags: FrozenSet[RiskTag] = frozenset()
    state_code: str = ""

    model_config = {"frozen": True}
