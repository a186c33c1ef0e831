"""基于路径的梯度投影 (GP) 求解多方式用户均衡

每个 (origin, destination, mode) 维护工作路径集合 K。每次迭代按
(origin, destination, mode) 升序逐个处理：加入当前最短路 k̄，对其余路径做
对角牛顿步 f_k ← max(0, f_k − α/s_k·(d_k − d_k̄))，剩余需求归 k̄，
随即更新路段流量（Gauss-Seidel）。迭代末流量为 0 的路径被移除。
相对间隙达标后还要检查已用路径与最短路的费用差，两者都满足才算收敛。

容量为 (N, L) 矩阵时，路段时间与导数取 N 个场景的平均，
即求解样本平均问题。
"""
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from freight_engine.config import config
from freight_engine.demand.table import DemandKey, DemandTable, normalization_denominators
from freight_engine.errors import MaxItersExceeded, NonFiniteCost
from freight_engine.logging_utils import get_logger
from freight_engine.network.model import Network
from freight_engine.performance.link_performance import LinkCostModel
from freight_engine.scenarios.engine import ScenarioSample
from freight_engine.schemas.network import Mode
from freight_engine.schemas.solver import SolverParams, UnitFactors
from freight_engine.solver.objective import (
    aggregate_link_flows,
    class_link_flows,
    mode_coefficients,
    objective_values,
    relative_gap,
)
from freight_engine.solver.paths import EquilibriumSolution, Path, PathFlow, PathSet, unique_paths
from freight_engine.solver.shortest_path import ShortestPathTree, k_shortest_paths, shortest_path_tree


# s_k 低于该值视为路径与最短路无差异
MIN_CURVATURE = 1e-12
MAX_BACKTRACKS = 20
# 流量不超过该值的路径不计入已用路径
USED_PATH_FLOW = 1e-8

ScenarioInput = Union[ScenarioSample, Sequence[ScenarioSample], np.ndarray]


def max_path_cost_excess(net: Network, link_times: np.ndarray, path_sets: PathSet,
                         min_flow: float = USED_PATH_FLOW) -> float:
    """已用路径相对同一 (origin, destination, mode) 最短路的最大超出比例

    :param net: 路网
    :param link_times: 路段时间
    :param path_sets: 路径集合
    :param min_flow: 流量高于该值才视为已用
    :return: 0 表示满足 Wardrop 条件
    """
    trees: Dict[Tuple[int, Mode], ShortestPathTree] = {}
    worst = 0.0
    for (origin, destination, mode), path_flows in path_sets.items():
        tree = trees.get((origin, mode))
        if tree is None:
            tree = trees[(origin, mode)] = shortest_path_tree(net, link_times, mode, origin)
        best = tree.cost_to(destination)
        for pf in path_flows:
            if pf.flow > min_flow:
                excess = pf.path.cost(link_times) - best
                worst = max(worst, excess / best if best > 0.0 else excess)
    return worst


def _scenario_inputs(scenarios: ScenarioInput) -> Tuple[np.ndarray, Tuple[int, ...]]:
    if isinstance(scenarios, ScenarioSample):
        return np.atleast_2d(scenarios.capacities), (scenarios.seed,)
    if isinstance(scenarios, np.ndarray):
        return np.atleast_2d(np.asarray(scenarios, dtype=np.float64)), ()
    scenarios = list(scenarios)
    if not scenarios:
        raise ValueError("at least one scenario is required")
    return np.vstack([s.capacities for s in scenarios]), tuple(s.seed for s in scenarios)


class GradientProjectionSolver:
    """GP 求解器，一次 solve 对应一个 (样本平均) 场景

    :param net: 路网
    :param scenarios: 单个场景、场景列表或 (N, L) 容量矩阵
    :param demand: 需求表
    :param params: 求解参数
    :param factors: 多式联运折算系数
    :param run_id: 运行标识
    """

    def __init__(
        self,
        net: Network,
        scenarios: ScenarioInput,
        demand: DemandTable,
        params: SolverParams = SolverParams(),
        factors: UnitFactors = UnitFactors(),
        run_id: Optional[str] = None,
    ) -> None:
        self.net = net
        self.demand = demand
        self.params = params
        self.factors = factors
        self.logger = get_logger(run_id)

        self.capacities, self.seeds = _scenario_inputs(scenarios)
        if self.capacities.shape[1] != net.n_links:
            raise ValueError(f"capacity vector length {self.capacities.shape[1]} != {net.n_links} links")
        self.cost_model = LinkCostModel.for_network(net)
        self.coefficients = mode_coefficients(net, factors)
        self.denoms = normalization_denominators(demand, factors, strict=False)

        self.path_sets = PathSet()
        self.flows = np.zeros(net.n_links)
        self._times: Optional[np.ndarray] = None
        self._derivatives: Optional[np.ndarray] = None

    # ---- 路段量 ----

    def _invalidate(self) -> None:
        self._times = None
        self._derivatives = None

    def link_times(self) -> np.ndarray:
        if self._times is None:
            times = self.cost_model.times(self.flows, self.capacities).mean(axis=0)
            if not np.all(np.isfinite(times)):
                bad = int(np.flatnonzero(~np.isfinite(times))[0])
                raise NonFiniteCost(link=bad)
            self._times = times
        return self._times

    def link_derivatives(self) -> np.ndarray:
        if self._derivatives is None:
            self._derivatives = self.cost_model.derivatives(self.flows, self.capacities).mean(axis=0)
        return self._derivatives

    def objective(self, flows: Optional[np.ndarray] = None) -> float:
        values = objective_values(
            self.net, self.capacities, self.flows if flows is None else flows, self.denoms, self.cost_model
        )
        return float(values.mean())

    # ---- 主流程 ----

    def _initialize(self) -> None:
        """自由流时间下的全有全无加载"""
        times = self.link_times()
        trees: Dict[Tuple[int, Mode], ShortestPathTree] = {}
        for key, units in self.demand:
            origin, destination, mode = key
            tree = trees.get((origin, mode))
            if tree is None:
                tree = trees[(origin, mode)] = shortest_path_tree(self.net, times, mode, origin)
            self.path_sets[key] = [PathFlow(tree.path_to(destination), units)]
        self.flows = aggregate_link_flows(self.path_sets, self.net, self.factors)
        self._invalidate()

    def _candidate_paths(self, key: DemandKey, trees: Dict[Tuple[int, Mode], ShortestPathTree]) -> List[Path]:
        origin, destination, mode = key
        tree = trees.get((origin, mode))
        if tree is None:
            tree = trees[(origin, mode)] = shortest_path_tree(self.net, self.link_times(), mode, origin)
        if mode == Mode.INTERMODAL and self.params.intermodal_k > 1:
            return k_shortest_paths(self.net, self.link_times(), mode, origin, destination, self.params.intermodal_k)
        return [tree.path_to(destination)]

    def _apply(self, path_flows: List[PathFlow], new_flows: List[float], mode: Mode) -> None:
        coefficient = self.coefficients[mode]
        for pf, value in zip(path_flows, new_flows):
            delta = value - pf.flow
            if delta != 0.0:
                np.add.at(self.flows, pf.path.index, coefficient[pf.path.index] * delta)
            pf.flow = value
        self._invalidate()

    def _trial_flows(self, path_flows: List[PathFlow], new_flows: List[float], mode: Mode) -> np.ndarray:
        coefficient = self.coefficients[mode]
        trial = self.flows.copy()
        for pf, value in zip(path_flows, new_flows):
            delta = value - pf.flow
            if delta != 0.0:
                np.add.at(trial, pf.path.index, coefficient[pf.path.index] * delta)
        return trial

    def _newton_flows(self, path_flows: List[PathFlow], units: float, mode: Mode, alpha: float) -> List[float]:
        times = self.link_times()
        derivatives = self.link_derivatives()
        coefficient = self.coefficients[mode]
        costs = [pf.path.cost(times) for pf in path_flows]
        best = int(np.argmin(costs))
        best_links = set(path_flows[best].path.links)

        new_flows = [0.0] * len(path_flows)
        moved = 0.0
        for i, pf in enumerate(path_flows):
            if i == best:
                continue
            differing = np.fromiter(set(pf.path.links) ^ best_links, dtype=np.int64)
            curvature = float((coefficient[differing] * derivatives[differing]).sum()) if differing.size else 0.0
            if curvature < MIN_CURVATURE:
                value = 0.0
            else:
                value = max(0.0, pf.flow - alpha / curvature * (costs[i] - costs[best]))
            new_flows[i] = value
            moved += value
        new_flows[best] = max(0.0, units - moved)
        return new_flows

    def _equilibrate(self, key: DemandKey, units: float, trees: Dict[Tuple[int, Mode], ShortestPathTree]) -> None:
        path_flows = self.path_sets[key]
        known = {pf.path.links for pf in path_flows}
        for path in unique_paths(self._candidate_paths(key, trees)):
            if path.links not in known:
                path_flows.append(PathFlow(path, 0.0))
                known.add(path.links)
        if len(path_flows) < 2:
            return

        mode = key[2]
        alpha = self.params.step_size
        new_flows = self._newton_flows(path_flows, units, mode, alpha)
        if self.params.backtracking:
            current = self.objective()
            for _ in range(MAX_BACKTRACKS):
                if self.objective(self._trial_flows(path_flows, new_flows, mode)) <= current:
                    break
                alpha *= 0.5
                new_flows = self._newton_flows(path_flows, units, mode, alpha)
            else:
                return
        self._apply(path_flows, new_flows, mode)

    def _iterate(self) -> None:
        trees: Dict[Tuple[int, Mode], ShortestPathTree] = {}
        current_origin = None
        for key, units in self.demand:
            if key[0] != current_origin:
                # 最短路树在每个起点块开始时按当时的路段时间重建
                trees.clear()
                current_origin = key[0]
            self._equilibrate(key, units, trees)

    def _prune(self) -> None:
        for key, path_flows in self.path_sets.items():
            kept = [pf for pf in path_flows if pf.flow > 0.0]
            self.path_sets[key] = kept or path_flows[:1]

    def _solution(self, objective: float, gap: float, iterations: int, converged: bool,
                  history: List[Tuple[float, float]], path_gap: float = math.nan) -> EquilibriumSolution:
        return EquilibriumSolution(
            path_sets=self.path_sets.copy(),
            link_flows=aggregate_link_flows(self.path_sets, self.net, self.factors),
            class_flows=class_link_flows(self.path_sets, self.net.n_links),
            objective=objective,
            relative_gap=gap,
            iterations=iterations,
            scenario_seeds=self.seeds,
            capacities=self.capacities.copy(),
            converged=converged,
            history=list(history),
            path_cost_gap=path_gap,
        )

    def solve(self) -> EquilibriumSolution:
        """迭代至相对间隙不超过 gap_tol 且已用路径费用超出不超过 path_cost_tol，或达到 max_iters

        :return: 收敛解；未收敛时返回目标值最低的迭代解（converged=False）
        :raises MaxItersExceeded: raise_on_max_iters 且未收敛
        :raises NonFiniteCost: 路段时间非有限
        :raises Unreachable: 某需求在其方式子网中不可达
        """
        self._initialize()
        objective = self.objective()
        gap = math.inf
        history: List[Tuple[float, float]] = []
        best: Optional[EquilibriumSolution] = None

        for iteration in range(1, self.params.max_iters + 1):
            self._iterate()
            self._prune()
            self.flows = aggregate_link_flows(self.path_sets, self.net, self.factors)
            self._invalidate()

            previous, objective = objective, self.objective()
            gap = relative_gap(previous, objective)
            history.append((objective, gap))
            if config.LOG_TRACE_ENABLED:
                self.logger.debug(
                    f"GP 迭代 {iteration}: 目标值 {objective:.10g}, 相对间隙 {gap:.3e}, "
                    f"路径数 {self.path_sets.n_paths()}"
                )

            if gap <= self.params.gap_tol:
                path_gap = max_path_cost_excess(self.net, self.link_times(), self.path_sets)
                tol = self.params.path_cost_tol
                if tol is None or path_gap <= tol:
                    self.logger.info(
                        f"GP 收敛: 迭代 {iteration} 次, 目标值 {objective:.10g}, 相对间隙 {gap:.3e}, "
                        f"路径费用超出 {path_gap:.3e}"
                    )
                    return self._solution(objective, gap, iteration, True, history, path_gap)
            if best is None or objective < best.objective:
                best = self._solution(objective, gap, iteration, False, history)

        best.history = history
        best.iterations = self.params.max_iters
        best_times = self.cost_model.times(best.link_flows, self.capacities).mean(axis=0)
        best.path_cost_gap = max_path_cost_excess(self.net, best_times, best.path_sets)
        self.logger.warning(
            f"GP 达到最大迭代次数 {self.params.max_iters} 仍未收敛: 最后相对间隙 {gap:.3e}, "
            f"返回目标值最低的迭代解 {best.objective:.10g} (路径费用超出 {best.path_cost_gap:.3e})"
        )
        if self.params.raise_on_max_iters:
            raise MaxItersExceeded(f"gap={gap:.3e}", solution=best, iters=self.params.max_iters)
        return best


def gp_solve(
    net: Network,
    scenario: ScenarioInput,
    demand: DemandTable,
    params: SolverParams = SolverParams(),
    factors: UnitFactors = UnitFactors(),
    run_id: Optional[str] = None,
) -> EquilibriumSolution:
    """求解给定场景（或样本平均场景）下的多方式用户均衡

    :param net: 路网
    :param scenario: 场景、场景列表或容量矩阵
    :param demand: 需求表
    :param params: 求解参数
    :param factors: 多式联运折算系数
    :param run_id: 运行标识
    :return:
    """
    return GradientProjectionSolver(net, scenario, demand, params, factors, run_id).solve()
