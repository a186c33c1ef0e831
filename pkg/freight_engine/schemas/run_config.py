"""运行配置：单个 JSON 文件描述一次可复现的运行"""
import hashlib
from pathlib import Path
from typing import List, Optional, Tuple, Union

import orjson
from pydantic import BaseModel, Field, ValidationError

from freight_engine.config import config
from freight_engine.errors import ConfigError
from freight_engine.scenarios.io import load_disaster_spec
from freight_engine.scenarios.presets import get_disaster_preset
from freight_engine.schemas.report import TonMileConfig
from freight_engine.schemas.saa import SaaConfig
from freight_engine.schemas.scenario import DisasterSpec
from freight_engine.schemas.solver import SolverParams, UnitFactors


# 预设名称、key=value 文件路径或内联对象
DisasterRef = Union[str, DisasterSpec]


class InputFiles(BaseModel):
    """输入文件，相对路径以配置文件所在目录为基准"""
    nodes: Path
    links: Path
    demand: Path


class SaaSettings(BaseModel):
    """SAA 样本规模"""
    M: int = Field(default=100, ge=1)
    N: int = Field(default=1, ge=1)
    N_prime: int = Field(default=1000, ge=2)


class RunConfig(BaseModel):
    """一次运行的全部参数，种子全部写在配置中"""
    inputs: InputFiles
    disaster: Optional[DisasterRef] = None
    seed: int = 0
    saa: SaaSettings = Field(default_factory=SaaSettings)
    solver: SolverParams = Field(default_factory=SolverParams)
    unit_factors: UnitFactors = Field(default_factory=UnitFactors)
    ton_miles: TonMileConfig = Field(default_factory=TonMileConfig)
    output_dir: Path = Path(config.FREIGHT_OUTPUT_DIR)
    threads: Optional[int] = Field(default=None, ge=1)
    compare: List[DisasterRef] = Field(default_factory=list, description="compare 子命令依次运行的灾害")

    # 配置文件所在目录，由 load_run_config 填充
    base_dir: Path = Field(default=Path("."), exclude=True)

    def resolve(self, path: Path) -> Path:
        return path if path.is_absolute() else self.base_dir / path

    def resolve_disaster(self, ref: Optional[DisasterRef] = None) -> Tuple[DisasterSpec, Optional[int]]:
        """把灾害引用解析为 DisasterSpec 与可选种子

        :param ref: 引用，默认取 self.disaster
        :return:
        :raises ConfigError: 未配置灾害或引用无法解析
        """
        ref = self.disaster if ref is None else ref
        if ref is None:
            raise ConfigError("no disaster configured")
        if isinstance(ref, DisasterSpec):
            return ref, None
        candidate = self.resolve(Path(ref))
        if candidate.is_file():
            return load_disaster_spec(candidate)
        return get_disaster_preset(ref), None

    def saa_config(self, spec: DisasterSpec) -> SaaConfig:
        return SaaConfig(
            M=self.saa.M,
            N=self.saa.N,
            N_prime=self.saa.N_prime,
            base_seed=self.seed,
            solver=self.solver,
            disaster=spec,
            unit_factors=self.unit_factors,
        )

    def run_id(self) -> str:
        """配置内容 + 种子的摘要，绑定到本次运行的所有日志"""
        digest = hashlib.blake2b(digest_size=6)
        digest.update(orjson.dumps(self.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS))
        digest.update(str(self.seed).encode("ascii"))
        return digest.hexdigest()


def load_run_config(path: Path) -> RunConfig:
    """读取并校验 JSON 运行配置

    :param path: 配置文件
    :return:
    :raises ConfigError: 文件不存在、JSON 非法或字段不合法
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config not found: {path}")
    try:
        cfg = RunConfig.model_validate(orjson.loads(path.read_bytes()))
    except orjson.JSONDecodeError as exc:
        raise ConfigError(f"{path.name}: invalid JSON ({exc})") from None
    except ValidationError as exc:
        raise ConfigError(f"{path.name}: {exc.error_count()} invalid field(s): {exc.errors()[0]['loc']}") from None

    base_dir = path.resolve().parent
    cfg = cfg.model_copy(update={"base_dir": base_dir})
    inputs = InputFiles(
        nodes=cfg.resolve(cfg.inputs.nodes),
        links=cfg.resolve(cfg.inputs.links),
        demand=cfg.resolve(cfg.inputs.demand),
    )
    return cfg.model_copy(update={"inputs": inputs, "output_dir": cfg.resolve(cfg.output_dir)})
