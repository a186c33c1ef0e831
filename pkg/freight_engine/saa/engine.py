"""SAA 主流程

1. 由训练种子流生成 M 组、每组 N 个场景，逐组求解样本平均均衡得到 z_N^m 与候选流量
2. 计算下界均值与方差
3. 由评估种子流生成 N' 个场景，固定流量逐个评估候选
4. 计算各候选的间隙与间隙方差，取间隙最小者（并列取下标最小）
"""
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from freight_engine.config import config
from freight_engine.demand.table import Denominators, DemandTable, normalization_denominators
from freight_engine.logging_utils import get_logger
from freight_engine.network.model import Network
from freight_engine.saa.statistics import candidate_objectives, gap_stats, lower_bound_stats, mean_and_variance
from freight_engine.scenarios.engine import EVAL_STREAM, TRAIN_STREAM, ScenarioSample, sample_batch
from freight_engine.schemas.saa import CandidateReport, SaaConfig, SaaReport
from freight_engine.schemas.solver import SolverParams, UnitFactors
from freight_engine.solver.gradient_projection import gp_solve
from freight_engine.solver.objective import capacity_matrix
from freight_engine.solver.paths import EquilibriumSolution


# 候选流量向量差异（无穷范数）低于该值视为同一候选
DUPLICATE_TOL = 1e-9


@dataclass
class CandidateFlow:
    """第 index 个 SAA 问题的解 ŷ_N^m"""
    index: int
    solution: EquilibriumSolution


def solve_saa_problem(
    net: Network,
    demand: DemandTable,
    scenarios: Sequence[ScenarioSample],
    solver: SolverParams = SolverParams(),
    factors: UnitFactors = UnitFactors(),
    index: int = 0,
    run_id: Optional[str] = None,
) -> Tuple[float, CandidateFlow]:
    """求解一个 N 场景的 SAA 问题

    N=1 即确定性均衡；N>1 时路段时间与导数取 N 个场景的平均。

    :param net: 路网
    :param demand: 需求表
    :param scenarios: N 个场景
    :param solver: 求解参数
    :param factors: 折算系数
    :param index: 候选序号
    :param run_id: 运行标识
    :return: (z, 候选流量)
    """
    if not scenarios:
        raise ValueError("an SAA problem needs at least one scenario")
    solution = gp_solve(net, list(scenarios), demand, solver, factors, run_id)
    return solution.objective, CandidateFlow(index=index, solution=solution)


def evaluate_candidate(
    net: Network,
    demand: DemandTable,
    flow: CandidateFlow,
    eval_scenarios: Sequence[ScenarioSample],
    denoms: Optional[Denominators] = None,
    factors: UnitFactors = UnitFactors(),
) -> Tuple[float, float]:
    """固定候选流量，在 N' 个评估场景上估计真实目标值及其方差

    :param net: 路网
    :param demand: 需求表
    :param flow: 候选流量
    :param eval_scenarios: N' 个评估场景
    :param denoms: 归一化分母，默认由需求表计算
    :param factors: 多式联运折算系数，仅在 denoms 缺省时用于计算分母
    :return: (mean, variance)
    :raises InsufficientSamples: N' < 2
    """
    denoms = denoms or normalization_denominators(demand, factors, strict=False)
    capacities = np.vstack([capacity_matrix(s) for s in eval_scenarios])
    values = candidate_objectives(net, flow.solution.link_flows, capacities, denoms)
    return mean_and_variance(values.tolist())


def duplicate_indices(candidates: Sequence[CandidateFlow], tol: float = DUPLICATE_TOL) -> List[Optional[int]]:
    """每个候选与之重复的最早候选下标，无重复为 None"""
    result: List[Optional[int]] = []
    for i, candidate in enumerate(candidates):
        match = None
        for j in range(i):
            if result[j] is not None:
                continue
            diff = np.abs(candidate.solution.link_flows - candidates[j].solution.link_flows)
            if diff.size == 0 or float(diff.max()) < tol:
                match = j
                break
        result.append(match)
    return result


def choose_candidate(gaps: Sequence[float]) -> int:
    """间隙最小的候选，并列取下标最小"""
    return min(range(len(gaps)), key=lambda i: (gaps[i], i))


def run_saa_detailed(
    net: Network,
    demand: DemandTable,
    cfg: SaaConfig,
    threads: Optional[int] = None,
    run_id: Optional[str] = None,
) -> Tuple[SaaReport, List[CandidateFlow]]:
    """执行完整 SAA，返回报告与全部候选解

    :param net: 路网
    :param demand: 需求表
    :param cfg: SAA 参数
    :param threads: 并行求解线程数，默认取 config.FREIGHT_THREADS
    :param run_id: 运行标识
    :return:
    """
    logger = get_logger(run_id)
    started = time.perf_counter()
    workers = max(1, threads or config.FREIGHT_THREADS)

    train = sample_batch(net, cfg.disaster, cfg.base_seed, cfg.M * cfg.N, stream=TRAIN_STREAM)
    groups = [train[m * cfg.N:(m + 1) * cfg.N] for m in range(cfg.M)]
    logger.info(
        f"SAA 开始: 灾害 {cfg.disaster.name}, M={cfg.M}, N={cfg.N}, N'={cfg.N_prime}, 线程 {workers}"
    )

    def _solve(m: int) -> Tuple[float, CandidateFlow]:
        z, candidate = solve_saa_problem(net, demand, groups[m], cfg.solver, cfg.unit_factors, m, run_id)
        logger.info(
            f"SAA 问题 {m + 1}/{cfg.M} 完成: z={z:.10g}, 迭代 {candidate.solution.iterations} 次"
            f"{'' if candidate.solution.converged else ' (未收敛)'}"
        )
        return z, candidate

    if workers == 1:
        solved = [_solve(m) for m in range(cfg.M)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(_solve, range(cfg.M)))
    z_values = [z for z, _ in solved]
    candidates = [c for _, c in solved]

    lb_mean, lb_var = lower_bound_stats(z_values, with_variance=cfg.M >= 2)

    evaluation = sample_batch(net, cfg.disaster, cfg.base_seed, cfg.N_prime, stream=EVAL_STREAM)
    eval_capacities = np.vstack([s.capacities for s in evaluation])
    denoms = normalization_denominators(demand, cfg.unit_factors, strict=False)

    duplicates = duplicate_indices(candidates)
    reports: List[CandidateReport] = []
    for candidate, duplicate_of in zip(candidates, duplicates):
        solution = candidate.solution
        if duplicate_of is not None:
            source = reports[duplicate_of]
            objectives = list(source.objectives)
            eval_mean, eval_var = source.eval_mean, source.eval_var
        else:
            values = candidate_objectives(net, solution.link_flows, eval_capacities, denoms)
            objectives = values.tolist()
            eval_mean, eval_var = mean_and_variance(objectives)
        gap, gap_var = gap_stats(eval_mean, eval_var, lb_mean, lb_var)
        reports.append(CandidateReport(
            index=candidate.index,
            z=z_values[candidate.index],
            iterations=solution.iterations,
            converged=solution.converged,
            eval_mean=eval_mean,
            eval_var=eval_var,
            gap=gap,
            gap_var=gap_var,
            duplicate_of=duplicate_of,
            objectives=objectives,
        ))

    chosen = choose_candidate([r.gap for r in reports])
    runtime = time.perf_counter() - started
    unique = sum(1 for d in duplicates if d is None)
    logger.info(
        f"SAA 完成: 下界 {lb_mean:.10g}, 候选 {cfg.M} 个 (去重后 {unique} 个), "
        f"选定候选 {chosen} (间隙 {reports[chosen].gap:.6g}), 耗时 {runtime:.1f} 秒"
    )

    report = SaaReport(
        config=cfg,
        train_seeds=[[s.seed for s in group] for group in groups],
        eval_seeds=[s.seed for s in evaluation],
        z_values=z_values,
        lower_bound_mean=lb_mean,
        lower_bound_var=lb_var,
        candidates=reports,
        chosen=chosen,
        runtime_sec=runtime,
    )
    return report, candidates


def run_saa(
    net: Network,
    demand: DemandTable,
    cfg: SaaConfig,
    threads: Optional[int] = None,
    run_id: Optional[str] = None,
) -> SaaReport:
    """执行完整 SAA 并返回报告"""
    report, _ = run_saa_detailed(net, demand, cfg, threads, run_id)
    return report
