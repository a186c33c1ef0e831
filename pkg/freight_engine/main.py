"""命令行入口

子命令: validate / assign / saa / report / sample / compare
退出码: 0 成功，1 数据校验失败，2 求解失败，3 IO/配置失败
"""
import sys
import argparse
import traceback
from pathlib import Path
from typing import Callable, Dict, List, Optional

# 添加项目根目录到 Python 路径，支持直接运行此文件
_project_root = Path(__file__).parent.parent
if str(_project_root) not in sys.path:
    sys.path.insert(0, str(_project_root))

from pydantic import ValidationError

from freight_engine import __version__
from freight_engine.commands import cmd_assign, cmd_compare, cmd_report, cmd_saa, cmd_sample, cmd_validate
from freight_engine.config import config
from freight_engine.errors import FreightEngineError
from freight_engine.logging_utils import add_run_log, get_logger, remove_run_log
from freight_engine.schemas.run_config import RunConfig, load_run_config


EXIT_SOLVER = 2
EXIT_IO = 3


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freight_engine",
        description="随机公铁联运货运网络用户均衡配流 (GP + SAA)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def _add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, type=Path, help="JSON 运行配置")
        p.add_argument("--out", type=Path, default=None, help="输出目录，覆盖配置中的 output_dir")
        return p

    _add("validate", "校验路网与需求")

    assign = _add("assign", "单场景配流")
    assign.add_argument("--seed", type=int, default=None, help="场景种子")
    assign.add_argument("--base-case", action="store_true", help="容量取区间中点、无灾害")

    saa = _add("saa", "完整 SAA")
    saa.add_argument("--seed", type=int, default=None, help="覆盖配置中的基础种子")
    saa.add_argument("--threads", type=_positive_int, default=None, help="并行求解线程数")

    _add("report", "由已有产物重算报表")

    sample = _add("sample", "导出一个扰动场景")
    sample.add_argument("--seed", type=int, default=None, help="场景种子")

    compare = _add("compare", "基准情形与多个灾害情形对比")
    compare.add_argument("--seed", type=int, default=None, help="覆盖配置中的基础种子")
    compare.add_argument("--threads", type=_positive_int, default=None, help="并行求解线程数")
    return parser


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    updates: Dict = {}
    if args.out is not None:
        updates["output_dir"] = args.out
    if args.command in ("saa", "compare") and args.seed is not None:
        updates["seed"] = args.seed
    if getattr(args, "threads", None) is not None:
        updates["threads"] = args.threads
    return cfg.model_copy(update=updates) if updates else cfg


def _dispatch(cfg: RunConfig, args: argparse.Namespace, run_id: str) -> int:
    commands: Dict[str, Callable[[], int]] = {
        "validate": lambda: cmd_validate(cfg, run_id),
        "assign": lambda: cmd_assign(cfg, run_id, args.seed, args.base_case),
        "saa": lambda: cmd_saa(cfg, run_id, args.threads),
        "report": lambda: cmd_report(cfg, run_id),
        "sample": lambda: cmd_sample(cfg, run_id, args.seed),
        "compare": lambda: cmd_compare(cfg, run_id, args.threads),
    }
    return commands[args.command]()


def main(argv: Optional[List[str]] = None) -> int:
    """解析参数、执行子命令并把异常映射为退出码

    :param argv: 参数列表，默认取 sys.argv[1:]
    :return: 退出码
    """
    args = build_parser().parse_args(argv)
    logger = get_logger()
    sink_id = None
    try:
        cfg = _apply_overrides(load_run_config(args.config), args)
        run_id = cfg.run_id()
        logger = get_logger(run_id)
        if config.FREIGHT_RUN_LOG:
            sink_id = add_run_log(cfg.output_dir, run_id)
        logger.info(f"开始执行 {args.command}: 配置 {args.config}")
        return _dispatch(cfg, args, run_id)
    except FreightEngineError as exc:
        logger.error(str(exc))
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    except (ValidationError, OSError) as exc:
        logger.error(f"IO/配置错误: {exc}")
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001
        logger.error(f"执行失败: {exc}")
        logger.error(traceback.format_exc())
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    finally:
        remove_run_log(sink_id)


if __name__ == "__main__":
    sys.exit(main())
