"""CLI 子命令实现

每个命令返回退出码；异常由 main 统一映射为退出码。
产物全部写入 output_dir，相同配置与种子得到逐字节相同的文件（run_meta.json 除外）。
"""
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from tabulate import tabulate

from freight_engine.demand.loader import load_demand
from freight_engine.demand.table import DemandTable
from freight_engine.errors import ConfigError, MissingArtifact
from freight_engine.logging_utils import get_logger
from freight_engine.network.loader import load_network
from freight_engine.network.model import Network, network_summary
from freight_engine.network.validation import validate_demand_support
from freight_engine.reporting.cost import report_cost_stats
from freight_engine.reporting.exports import (
    export_class_flows,
    export_link_flows,
    load_class_flows,
    read_json,
    read_model,
    write_json,
    write_model,
)
from freight_engine.reporting.tables import render_cost_table, render_ton_mile_table
from freight_engine.reporting.ton_miles import ton_miles, ton_miles_from_class_flows
from freight_engine.saa.engine import run_saa_detailed
from freight_engine.scenarios.engine import ASSIGN_STREAM, base_case_sample, child_seed, sample_scenario
from freight_engine.scenarios.io import export_scenario
from freight_engine.schemas.network import Mode
from freight_engine.schemas.report import CostStats, TonMileTable
from freight_engine.schemas.run_config import RunConfig
from freight_engine.schemas.saa import SaaReport
from freight_engine.solver.gradient_projection import gp_solve
from freight_engine.solver.paths import EquilibriumSolution


SAA_REPORT_FILE = "saa_report.json"
RUN_META_FILE = "run_meta.json"
SOLUTION_FILE = "solution.json"
LINK_FLOWS_FILE = "link_flows.csv"
CLASS_FLOWS_FILE = "class_flows.csv"
TON_MILES_JSON = "ton_miles.json"
TON_MILES_TEXT = "ton_miles.txt"
COST_TABLE_TEXT = "cost_table.txt"


def _load_inputs(cfg: RunConfig, run_id: str) -> Tuple[Network, DemandTable]:
    net = load_network(cfg.inputs.nodes, cfg.inputs.links, run_id)
    demand = load_demand(cfg.inputs.demand, net, run_id)
    validate_demand_support(net, demand, run_id)
    return net, demand


def _write_text(text: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")


def _solution_summary(solution: EquilibriumSolution, label: str) -> Dict:
    return {
        "label": label,
        "objective": solution.objective,
        "relative_gap": solution.relative_gap,
        "iterations": solution.iterations,
        "converged": solution.converged,
        "scenario_seeds": list(solution.scenario_seeds),
        "n_paths": solution.path_sets.n_paths(),
        "history": [[obj, gap] for obj, gap in solution.history],
        "path_cost_gap": solution.path_cost_gap,
    }


def _write_solution(solution: EquilibriumSolution, net: Network, cfg: RunConfig, out: Path,
                    run_id: str, label: str) -> TonMileTable:
    export_link_flows(solution, net, out / LINK_FLOWS_FILE)
    export_class_flows(solution, out / CLASS_FLOWS_FILE)
    table = ton_miles(solution, net, cfg.ton_miles, run_id)
    write_model(table, out / TON_MILES_JSON)
    _write_text(render_ton_mile_table({label: table}), out / TON_MILES_TEXT)
    return table


def cmd_validate(cfg: RunConfig, run_id: str) -> int:
    """校验路网与需求，打印计数"""
    net, demand = _load_inputs(cfg, run_id)
    summary = network_summary(net)
    rows: List[List] = []
    for group in ("nodes", "links", "risk_tags"):
        rows.extend([group, key, value] for key, value in summary[group].items())
    rows.extend(["demand", mode.value, demand.totals[mode]] for mode in Mode)
    print(tabulate(rows, headers=["group", "item", "count"]))
    print(f"nodes={net.n_nodes} links={net.n_links}")
    get_logger(run_id).info("校验通过")
    return 0


def _assign(cfg: RunConfig, net: Network, demand: DemandTable, run_id: str,
            seed: Optional[int], base_case: bool) -> EquilibriumSolution:
    if base_case:
        scenario = base_case_sample(net)
    else:
        spec, file_seed = cfg.resolve_disaster()
        if seed is None:
            seed = file_seed if file_seed is not None else child_seed(cfg.seed, 0, ASSIGN_STREAM)
        scenario = sample_scenario(net, spec, seed)
    return gp_solve(net, scenario, demand, cfg.solver, cfg.unit_factors, run_id)


def cmd_assign(cfg: RunConfig, run_id: str, seed: Optional[int] = None, base_case: bool = False) -> int:
    """单场景配流；--base-case 时容量取区间中点且无灾害"""
    logger = get_logger(run_id)
    net, demand = _load_inputs(cfg, run_id)
    solution = _assign(cfg, net, demand, run_id, seed, base_case)

    out = cfg.output_dir
    label = "base" if base_case else "scenario"
    write_json(_solution_summary(solution, label), out / SOLUTION_FILE)
    table = _write_solution(solution, net, cfg, out, run_id, label)
    print(render_ton_mile_table({label: table}))
    logger.info(
        f"配流完成: 目标值 {solution.objective:.10g}, 相对间隙 {solution.relative_gap:.3e}, "
        f"迭代 {solution.iterations} 次, 输出目录 {out}"
    )
    return 0


def _run_saa(cfg: RunConfig, net: Network, demand: DemandTable, out: Path, run_id: str,
             threads: Optional[int], disaster=None) -> Tuple[SaaReport, TonMileTable]:
    spec, _ = cfg.resolve_disaster(disaster)
    report, candidates = run_saa_detailed(net, demand, cfg.saa_config(spec), threads or cfg.threads, run_id)
    chosen = candidates[report.chosen].solution

    write_model(report, out / SAA_REPORT_FILE)
    write_json({"run_id": run_id, "runtime_sec": report.runtime_sec, "threads": threads or cfg.threads},
               out / RUN_META_FILE)
    stats = report_cost_stats(report)
    _write_text(render_cost_table({spec.name: stats}), out / COST_TABLE_TEXT)
    table = _write_solution(chosen, net, cfg, out, run_id, spec.name)
    return report, table


def cmd_saa(cfg: RunConfig, run_id: str, threads: Optional[int] = None) -> int:
    """完整 SAA，输出报告、成本表与选定候选的流量"""
    net, demand = _load_inputs(cfg, run_id)
    report, _ = _run_saa(cfg, net, demand, cfg.output_dir, run_id, threads)
    print((cfg.output_dir / COST_TABLE_TEXT).read_text(encoding="utf-8"), end="")
    get_logger(run_id).info(f"SAA 运行耗时 {report.runtime_sec:.2f} 秒，输出目录 {cfg.output_dir}")
    return 0


def cmd_report(cfg: RunConfig, run_id: str) -> int:
    """由已有产物重算成本表与吨英里表，不重新求解"""
    out = cfg.output_dir
    report_file, flows_file = out / SAA_REPORT_FILE, out / CLASS_FLOWS_FILE
    if not report_file.exists() and not flows_file.exists():
        raise MissingArtifact(f"neither {SAA_REPORT_FILE} nor {CLASS_FLOWS_FILE} in {out}")

    label = "scenario"
    if (out / SOLUTION_FILE).exists():
        label = str(read_json(out / SOLUTION_FILE).get("label", label))
    if report_file.exists():
        report = read_model(SaaReport, report_file)
        label = report.config.disaster.name
        cost_text = render_cost_table({label: report_cost_stats(report)})
        _write_text(cost_text, out / COST_TABLE_TEXT)
        print(cost_text)

    if flows_file.exists():
        net = load_network(cfg.inputs.nodes, cfg.inputs.links, run_id)
        table = ton_miles_from_class_flows(load_class_flows(flows_file, net), net, cfg.ton_miles, run_id)
        write_model(table, out / TON_MILES_JSON)
        ton_text = render_ton_mile_table({label: table})
        _write_text(ton_text, out / TON_MILES_TEXT)
        print(ton_text)
    return 0


def cmd_sample(cfg: RunConfig, run_id: str, seed: Optional[int] = None) -> int:
    """导出单个扰动场景的容量"""
    net = load_network(cfg.inputs.nodes, cfg.inputs.links, run_id)
    spec, file_seed = cfg.resolve_disaster()
    if seed is None:
        seed = file_seed if file_seed is not None else child_seed(cfg.seed, 0, ASSIGN_STREAM)
    sample = sample_scenario(net, spec, seed)
    path = cfg.output_dir / f"scenario_{spec.name}_{seed}.csv"
    export_scenario(sample, net, path)
    get_logger(run_id).info(f"场景已导出: {path} (受损路段 {int(sample.degraded.sum())} 条)")
    return 0


def cmd_compare(cfg: RunConfig, run_id: str, threads: Optional[int] = None) -> int:
    """基准情形与多个灾害情形的对比：成本表与吨英里变化表"""
    logger = get_logger(run_id)
    net, demand = _load_inputs(cfg, run_id)
    disasters = cfg.compare or ([cfg.disaster] if cfg.disaster is not None else [])
    if not disasters:
        raise ConfigError("compare needs at least one disaster")
    root = cfg.output_dir / "compare"

    base = _assign(cfg, net, demand, run_id, None, base_case=True)
    tables: Dict[str, TonMileTable] = {
        "base": _write_solution(base, net, cfg, root / "base", run_id, "base")
    }
    costs: Dict[str, CostStats] = {}
    summary: Dict[str, Dict] = {"base": {"objective": base.objective}}
    for ref in disasters:
        spec, _ = cfg.resolve_disaster(ref)
        report, table = _run_saa(cfg, net, demand, root / spec.name, run_id, threads, ref)
        tables[spec.name] = table
        costs[spec.name] = report_cost_stats(report)
        summary[spec.name] = {
            "chosen": report.chosen,
            "lower_bound_mean": report.lower_bound_mean,
            "cost": costs[spec.name].model_dump(mode="json"),
        }

    cost_text = render_cost_table(costs)
    ton_text = render_ton_mile_table(tables, base="base")
    _write_text(cost_text, root / COST_TABLE_TEXT)
    _write_text(ton_text, root / TON_MILES_TEXT)
    write_json(summary, root / "compare.json")
    print(cost_text)
    print()
    print(ton_text)

    increased = [
        name for name, table in tables.items()
        if name != "base" and table.annual["truck"]["contiguous_us"] + table.annual["rail"]["contiguous_us"]
        > tables["base"].annual["truck"]["contiguous_us"] + tables["base"].annual["rail"]["contiguous_us"]
    ]
    logger.info(f"对比完成: {len(disasters)} 个灾害情形, 吨英里高于基准的情形 {increased}")
    return 0

