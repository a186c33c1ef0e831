"""灾害预设注册表 - 名称 -> DisasterSpec 映射"""
from typing import Dict, List

from freight_engine.errors import ConfigError
from freight_engine.schemas.network import RiskTag
from freight_engine.schemas.scenario import DisasterSpec


# 五类灾害场景：高风险地震、高+中风险地震、飓风、龙卷风、洪水
DISASTER_PRESETS: Dict[str, DisasterSpec] = {
    "earthquake_high": DisasterSpec(
        name="earthquake_high",
        risk_tags=frozenset({RiskTag.EARTHQUAKE_HIGH}),
    ),
    "earthquake_high_moderate": DisasterSpec(
        name="earthquake_high_moderate",
        risk_tags=frozenset({RiskTag.EARTHQUAKE_HIGH, RiskTag.EARTHQUAKE_MODERATE}),
    ),
    "hurricane": DisasterSpec(name="hurricane", risk_tags=frozenset({RiskTag.HURRICANE})),
    "tornado": DisasterSpec(name="tornado", risk_tags=frozenset({RiskTag.TORNADO})),
    "flood": DisasterSpec(name="flood", risk_tags=frozenset({RiskTag.FLOOD})),
}


def get_disaster_preset(name: str) -> DisasterSpec:
    """根据名称获取灾害预设

    :param name: 预设名称
    :return:
    :raises ConfigError: 未知的预设名称
    """
    if name not in DISASTER_PRESETS:
        raise ConfigError(f"Unknown disaster preset: {name}")
    return DISASTER_PRESETS[name]


def list_disaster_presets() -> List[str]:
    """列出所有已注册的灾害预设名称

    :return:
    """
    return list(DISASTER_PRESETS.keys())
