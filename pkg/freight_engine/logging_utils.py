"""日志配置

loguru 输出到 stderr，每条日志带 run_id；FREIGHT_RUN_LOG=true 时同一次运行的日志另存到 output_dir/run.log。
"""
import sys
from pathlib import Path
from typing import Optional, Sequence

from loguru import logger

from .config import config


LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[run_id]}</cyan> | <level>{message}</level>"
)
RUN_LOG_FILE = "run.log"


def configure_logging(level: Optional[str] = None) -> None:
    """重置 stderr 输出

    :param level: 日志级别，默认取 LOG_LEVEL
    :return:
    """
    logger.remove()
    logger.add(sys.stderr, format=LOG_FORMAT, level=(level or config.LOG_LEVEL).upper())


configure_logging()


def get_logger(run_id: Optional[str] = None):
    """获取带 run_id 的 logger

    :param run_id: 运行标识，同一次 CLI 运行内的日志共享
    :return:
    """
    return logger.bind(run_id=run_id or "N/A")


def add_run_log(output_dir: Path, run_id: str) -> int:
    """把指定 run_id 的日志追加写入 output_dir/run.log

    :param output_dir: 输出目录
    :param run_id: 只收集该运行的日志
    :return: sink id，结束时交给 remove_run_log
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    return logger.add(
        output_dir / RUN_LOG_FILE,
        format=LOG_FORMAT,
        level="DEBUG",
        encoding="utf-8",
        filter=lambda record: record["extra"].get("run_id") == run_id,
    )


def remove_run_log(sink_id: Optional[int]) -> None:
    if sink_id is not None:
        logger.remove(sink_id)


def summarize_ids(ids: Sequence[int], limit: int = 10) -> str:
    """把较长的 id 列表压缩成便于阅读的形式

    :param ids: id 列表
    :param limit: 最多列出的个数
    :return: 例如 ``3, 5, 9, ... (共 42 个)``
    """
    shown = ", ".join(str(i) for i in ids[:limit])
    if len(ids) > limit:
        return f"{shown}, ... (共 {len(ids)} 个)"
    return shown
