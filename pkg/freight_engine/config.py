"""全局配置模块"""
import os

from dotenv import load_dotenv


load_dotenv()


class Config:
    """全局配置类"""

    # 日志级别
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # 是否在日志中输出逐次迭代的 trace 信息
    LOG_TRACE_ENABLED: bool = os.getenv("LOG_TRACE_ENABLED", "true").lower() == "true"

    # 并行求解的线程数（--threads 优先）
    FREIGHT_THREADS: int = int(os.getenv("FREIGHT_THREADS", "1"))

    # 是否把每次运行的日志另存到输出目录下的 run.log
    FREIGHT_RUN_LOG: bool = os.getenv("FREIGHT_RUN_LOG", "false").lower() == "true"

    # 默认输出目录
    FREIGHT_OUTPUT_DIR: str = os.getenv("FREIGHT_OUTPUT_DIR", "./out")

    # GP 求解默认最大迭代次数
    FREIGHT_MAX_ITERS: int = int(os.getenv("FREIGHT_MAX_ITERS", "500"))


config = Config()
