"""三种方式的 O-D 需求表"""
import math
from typing import Dict, Iterator, List, Mapping, NamedTuple, Tuple

from freight_engine.errors import NegativeDemand, SelfLoopDemand, ZeroDenominator
from freight_engine.schemas.network import Mode
from freight_engine.schemas.solver import UnitFactors


DemandKey = Tuple[int, int, Mode]

# 固定遍历顺序：按 (origin, destination, mode) 升序
_MODE_ORDER: Dict[Mode, int] = {Mode.TRUCK: 0, Mode.RAIL: 1, Mode.INTERMODAL: 2}


def demand_sort_key(key: DemandKey) -> Tuple[int, int, int]:
    origin, destination, mode = key
    return origin, destination, _MODE_ORDER[mode]


class Denominators(NamedTuple):
    """目标函数归一化分母"""
    road: float
    rail: float


class DemandTable:
    """(origin, destination, mode) -> 每日需求量

    载入后不可变；零需求条目被丢弃。
    """

    def __init__(self, entries: Mapping[DemandKey, float]) -> None:
        cleaned: Dict[DemandKey, float] = {}
        for (origin, destination, mode), units in entries.items():
            if units < 0 or math.isnan(units):
                raise NegativeDemand(f"units={units}", origin=origin, destination=destination)
            if origin == destination:
                raise SelfLoopDemand(origin=origin, mode=Mode(mode).value)
            if units > 0:
                key = (int(origin), int(destination), Mode(mode))
                cleaned[key] = cleaned.get(key, 0.0) + float(units)
        self._entries: Dict[DemandKey, float] = {
            key: cleaned[key] for key in sorted(cleaned, key=demand_sort_key)
        }
        self.totals: Dict[Mode, float] = {
            mode: math.fsum(v for (_, _, m), v in self._entries.items() if m == mode) for mode in Mode
        }

    def __iter__(self) -> Iterator[Tuple[DemandKey, float]]:
        return iter(self._entries.items())

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, origin: int, destination: int, mode: Mode) -> float:
        return self._entries.get((origin, destination, mode), 0.0)

    def keys(self) -> List[DemandKey]:
        return list(self._entries)

    def origins(self) -> List[int]:
        return sorted({o for o, _, _ in self._entries})

    def centroids_for(self, mode: Mode) -> List[int]:
        """有该方式需求的质心（起点或终点）"""
        ids = set()
        for origin, destination, m in self._entries:
            if m == mode:
                ids.update((origin, destination))
        return sorted(ids)


def normalization_denominators(
    demand: DemandTable,
    factors: UnitFactors = UnitFactors(),
    strict: bool = True,
) -> Denominators:
    """目标函数两项的归一化分母

    道路项除以 卡车需求 + 多式联运卡车当量；铁路项除以 铁路需求 + 多式联运铁路当量。

    :param demand: 需求表
    :param factors: 多式联运折算系数
    :param strict: 为 True 时任一分母为 0 抛出 ZeroDenominator
    :return:
    :raises ZeroDenominator: strict 且某项无需求
    """
    intermodal = demand.totals[Mode.INTERMODAL]
    road = demand.totals[Mode.TRUCK] + factors.im_truck_equiv * intermodal
    rail = demand.totals[Mode.RAIL] + factors.im_rail_equiv * intermodal
    if strict:
        if road <= 0:
            raise ZeroDenominator(term="road")
        if rail <= 0:
            raise ZeroDenominator(term="rail")
    return Denominators(road=road, rail=rail)
