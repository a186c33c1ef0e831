"""引擎异常定义

每个异常带有 CLI 退出码：1 数据校验失败，2 求解失败，3 IO/配置失败。
异常消息以异常名开头，并指明出错的 id，例如 ``MissingReverseRail link=17``。
"""
from typing import Any, Optional


class FreightEngineError(Exception):
    """引擎异常基类"""

    exit_code: int = 2

    def __init__(self, detail: str = "", **ids: Any) -> None:
        self.detail = detail
        self.ids = ids
        parts = [type(self).__name__]
        parts.extend(f"{key}={value}" for key, value in ids.items())
        if detail:
            parts.append(detail)
        super().__init__(" ".join(parts))


class DataValidationError(FreightEngineError):
    """输入数据违反不变式"""

    exit_code = 1


class MissingReverseRail(DataValidationError):
    """铁路线缺少互逆配对"""


class DanglingEndpoint(DataValidationError):
    """路段端点不存在"""


class NonPositiveCapacity(DataValidationError):
    """容量非正或 cap_lo > cap_hi"""


class TerminalEndpointsSameSide(DataValidationError):
    """场站转运路段两端不在道路侧/铁路侧各一端"""


class DuplicateId(DataValidationError):
    """重复的节点或路段 id"""


class NonDenseId(DataValidationError):
    """id 未从 0 开始连续编号"""


class InvalidFieldValue(DataValidationError):
    """字段取值无法解析"""


class UnknownCentroid(DataValidationError):
    """需求引用了不存在或非质心的节点"""


class NegativeDemand(DataValidationError):
    """需求为负"""


class SelfLoopDemand(DataValidationError):
    """起讫点相同"""


class MissingConnector(DataValidationError):
    """有需求的质心缺少对应方式的连接线"""


class DisconnectedDemand(DataValidationError):
    """有需求的 O-D 在该方式子网中不连通"""


class ZeroDenominator(DataValidationError):
    """目标函数某一项没有对应需求，无法归一化"""


class SolverError(FreightEngineError):
    """求解失败"""

    exit_code = 2


class Unreachable(SolverError):
    """最短路不可达"""


class NonFiniteCost(SolverError):
    """路段时间出现非有限值，通常说明容量数据损坏"""


class InsufficientSamples(SolverError):
    """样本数不足以估计方差"""


class MaxItersExceeded(SolverError):
    """达到最大迭代次数仍未收敛，携带目标值最低的解"""

    def __init__(self, detail: str = "", solution: Optional[Any] = None, **ids: Any) -> None:
        super().__init__(detail, **ids)
        self.solution = solution


class ArtifactError(FreightEngineError):
    """IO 或配置失败"""

    exit_code = 3


class ConfigError(ArtifactError):
    """配置文件无法解析或引用的文件不存在"""


class MissingArtifact(ArtifactError):
    """报表所需的运行产物缺失"""


class CorruptArtifact(ArtifactError):
    """运行产物无法解析"""
