"""路径、路径集合与均衡解"""
import copy
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from freight_engine.demand.table import DemandKey, demand_sort_key
from freight_engine.schemas.network import Mode


@dataclass(frozen=True)
class Path:
    """有序路段序列，路段 id 即 δ 关联关系"""
    links: Tuple[int, ...]
    mode: Mode
    index: np.ndarray = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        index = np.asarray(self.links, dtype=np.int64)
        index.setflags(write=False)
        object.__setattr__(self, "index", index)

    def cost(self, link_times: np.ndarray) -> float:
        return float(link_times[self.index].sum())


@dataclass
class PathFlow:
    """路径及其流量"""
    path: Path
    flow: float


class PathSet:
    """按 (origin, destination, mode) 分组的工作路径集合 K 与路径流量 f"""

    def __init__(self) -> None:
        self._sets: Dict[DemandKey, List[PathFlow]] = {}

    def __getitem__(self, key: DemandKey) -> List[PathFlow]:
        return self._sets[key]

    def __setitem__(self, key: DemandKey, value: List[PathFlow]) -> None:
        self._sets[key] = value

    def __contains__(self, key: DemandKey) -> bool:
        return key in self._sets

    def __len__(self) -> int:
        return len(self._sets)

    def keys(self) -> List[DemandKey]:
        return sorted(self._sets, key=demand_sort_key)

    def items(self) -> Iterator[Tuple[DemandKey, List[PathFlow]]]:
        for key in self.keys():
            yield key, self._sets[key]

    def total(self, key: DemandKey) -> float:
        return math.fsum(pf.flow for pf in self._sets[key])

    def n_paths(self) -> int:
        return sum(len(v) for v in self._sets.values())

    def copy(self) -> "PathSet":
        clone = PathSet()
        for key, flows in self._sets.items():
            clone[key] = [PathFlow(pf.path, pf.flow) for pf in flows]
        return clone


@dataclass
class EquilibriumSolution:
    """单个（或样本平均）场景下的均衡解"""
    path_sets: PathSet
    link_flows: np.ndarray
    class_flows: Dict[Mode, np.ndarray]
    objective: float
    relative_gap: float
    iterations: int
    scenario_seeds: Tuple[int, ...]
    capacities: np.ndarray
    converged: bool = True
    history: List[Tuple[float, float]] = field(default_factory=list)
    path_cost_gap: float = math.nan

    @property
    def scenario_seed(self) -> Optional[int]:
        return self.scenario_seeds[0] if self.scenario_seeds else None

    @property
    def mean_capacities(self) -> np.ndarray:
        return np.atleast_2d(self.capacities).mean(axis=0)


def copy_solution(solution: EquilibriumSolution) -> EquilibriumSolution:
    """深拷贝均衡解（数组与路径集合）"""
    clone = copy.copy(solution)
    clone.path_sets = solution.path_sets.copy()
    clone.link_flows = solution.link_flows.copy()
    clone.class_flows = {m: v.copy() for m, v in solution.class_flows.items()}
    clone.history = list(solution.history)
    return clone


def unique_paths(paths: Sequence[Path]) -> List[Path]:
    seen = set()
    out: List[Path] = []
    for path in paths:
        if path.links not in seen:
            seen.add(path.links)
            out.append(path)
    return out
