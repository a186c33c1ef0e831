"""扰动场景采样

每条路段容量先在 [cap_lo, cap_hi] 上均匀抽样，再在风险区路段中无放回随机选取
⌊hit_fraction·n⌋ 条乘以 (1 - reduction)。同一 (路网, 设定, 种子) 结果逐位相同。
"""
import hashlib
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from freight_engine.network.model import Network
from freight_engine.schemas.scenario import DisasterSpec


# 容量下限系数，保证容量削减 100% 时阻抗仍有限
CAPACITY_FLOOR = 1e-6

TRAIN_STREAM = "train"
EVAL_STREAM = "eval"
ASSIGN_STREAM = "assign"


@dataclass(frozen=True, eq=False)
class ScenarioSample:
    """一次扰动场景实现 ξ"""
    capacities: np.ndarray
    seed: int
    disaster: str
    degraded: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.capacities.setflags(write=False)
        self.degraded.setflags(write=False)


def child_seed(base_seed: int, index: int, stream: str = TRAIN_STREAM) -> int:
    """由 (base_seed, index, stream) 派生 64 位子种子

    :param base_seed: 基础种子
    :param index: 样本序号
    :param stream: 流名称，训练/评估/单次配流互不重叠
    :return:
    """
    digest = hashlib.blake2b(f"{stream}:{base_seed}:{index}".encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def degraded_count(hit_fraction: float, n_risk: int) -> int:
    """受损路段数 ⌊hit_fraction·n⌋，容忍浮点误差"""
    return min(n_risk, math.floor(hit_fraction * n_risk + 1e-9))


def sample_scenario(net: Network, spec: DisasterSpec, seed: int) -> ScenarioSample:
    """生成单个扰动场景

    :param net: 路网
    :param spec: 灾害设定
    :param seed: 64 位种子
    :return:
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    capacities = rng.uniform(net.cap_lo, net.cap_hi)

    degraded = np.zeros(net.n_links, dtype=bool)
    risk_links = np.flatnonzero(net.risk_mask(spec.risk_tags))
    count = degraded_count(spec.hit_fraction, len(risk_links))
    if count > 0:
        chosen = rng.choice(risk_links, size=count, replace=False)
        degraded[chosen] = True
        capacities[chosen] *= 1.0 - spec.reduction

    capacities = np.maximum(capacities, CAPACITY_FLOOR * net.cap_lo)
    return ScenarioSample(capacities=capacities, seed=seed, disaster=spec.name, degraded=degraded)


def sample_batch(
    net: Network,
    spec: DisasterSpec,
    base_seed: int,
    count: int,
    stream: str = TRAIN_STREAM,
    start: int = 0,
) -> List[ScenarioSample]:
    """批量生成相互独立的场景，第 i 个使用 child_seed(base_seed, start + i, stream)

    :param net: 路网
    :param spec: 灾害设定
    :param base_seed: 基础种子
    :param count: 样本数
    :param stream: 种子流
    :param start: 起始序号
    :return:
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    return [
        sample_scenario(net, spec, child_seed(base_seed, start + i, stream))
        for i in range(count)
    ]


def base_case_sample(net: Network) -> ScenarioSample:
    """无灾害基准场景：容量取区间中点"""
    capacities = 0.5 * (net.cap_lo + net.cap_hi)
    return ScenarioSample(
        capacities=np.array(capacities, dtype=np.float64),
        seed=0,
        disaster="base",
        degraded=np.zeros(net.n_links, dtype=bool),
    )
