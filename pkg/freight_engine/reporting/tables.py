"""文本表格输出"""
from typing import Dict, Mapping, Optional

from tabulate import tabulate

from freight_engine.reporting.ton_miles import CONTIGUOUS_US, REGION_ROWS, compare_ton_miles
from freight_engine.schemas.network import Region
from freight_engine.schemas.report import CostStats, TonMileTable


_COST_ROWS = (
    ("Average", "mean"),
    ("Std. dev.", "std_dev"),
    ("Minimum", "min"),
    ("Maximum", "max"),
    ("Gap", "gap"),
    ("σ_gap", "gap_sigma"),
)

_REGION_LABELS = {
    "midwest": "Midwest",
    "northeast": "Northeast",
    "south": "South",
    "west": "West",
    Region.UNASSIGNED.value: "Unassigned",
    CONTIGUOUS_US: "Contiguous U.S.",
}


def render_cost_table(columns: Mapping[str, CostStats], floatfmt: str = ".4f") -> str:
    """成本统计表，每列一个灾害情形

    :param columns: 情形名 -> 成本统计
    :param floatfmt: 数值格式
    :return:
    """
    rows = []
    for label, attr in _COST_ROWS:
        rows.append([label] + [getattr(stats, attr) for stats in columns.values()])
    return tabulate(rows, headers=["Total cost (hours/day)"] + list(columns), floatfmt=floatfmt, missingval="-")


def render_ton_mile_table(
    tables: Mapping[str, TonMileTable],
    annual: bool = True,
    scale: float = 1e6,
    base: Optional[str] = None,
) -> str:
    """吨英里表，行为 (方式, 大区)，每列一个情形

    :param tables: 情形名 -> 吨英里表
    :param annual: 全年或每日
    :param scale: 数值除以该值（默认以百万吨英里为单位）
    :param base: 基准情形名，给出时为其余情形追加百分比变化列
    :return:
    """
    changes: Dict[str, Dict[str, Dict[str, Optional[float]]]] = {}
    if base is not None:
        changes = {
            name: compare_ton_miles(tables[base], table, annual)
            for name, table in tables.items() if name != base
        }

    headers = ["Mode", "Region"]
    for name in tables:
        headers.append(name)
        if name in changes:
            headers.append(f"{name} Δ%")

    first = next(iter(tables.values()))
    data = first.annual if annual else first.daily
    rows = []
    for mode in data:
        regions = list(REGION_ROWS) + [Region.UNASSIGNED.value, CONTIGUOUS_US]
        for region in regions:
            row = [mode.capitalize(), _REGION_LABELS.get(region, region)]
            for name, table in tables.items():
                values = table.annual if annual else table.daily
                row.append(values[mode][region] / scale)
                if name in changes:
                    row.append(changes[name][mode][region])
            rows.append(row)
    return tabulate(rows, headers=headers, floatfmt=",.3f", missingval="-")
