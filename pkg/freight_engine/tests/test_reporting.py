import math

import numpy as np
import pandas as pd
import pytest

from freight_engine.errors import CorruptArtifact, InsufficientSamples, MissingArtifact
from freight_engine.network.model import build_network
from freight_engine.reporting.cost import cost_stats
from freight_engine.reporting.exports import (
    LINK_FLOW_COLUMNS,
    export_class_flows,
    export_link_flows,
    load_class_flows,
    read_json,
    read_model,
    write_json,
    write_model,
)
from freight_engine.reporting.tables import render_cost_table, render_ton_mile_table
from freight_engine.reporting.ton_miles import (
    CONTIGUOUS_US,
    REGION_ROWS,
    compare_ton_miles,
    ton_miles,
    ton_miles_from_class_flows,
)
from freight_engine.schemas.network import LinkKind, Mode, NodeKind, Region
from freight_engine.schemas.report import CostStats, TonMileConfig, TonMileTable
from freight_engine.schemas.solver import SolverParams
from freight_engine.solver.gradient_projection import gp_solve
from freight_engine.tests.factories import make_link, make_node, parallel_links_network


def _class_flows(n_links, **values):
    flows = {mode: np.zeros(n_links) for mode in Mode}
    for mode_name, per_link in values.items():
        for link_id, flow in per_link.items():
            flows[Mode(mode_name)][link_id] = flow
    return flows


@pytest.fixture
def toy_solution(toy_net, toy_base, toy_demand):
    return gp_solve(toy_net, toy_base, toy_demand, SolverParams(gap_tol=1e-8))


def test_cost_stats():
    stats = cost_stats([1.0, 2.0, 3.0, 4.0], gap=0.5, gap_sigma=0.1)
    assert stats.mean == 2.5
    assert stats.std_dev == pytest.approx(math.sqrt(5.0 / 12.0))
    assert (stats.min, stats.max) == (1.0, 4.0)
    assert (stats.gap, stats.gap_sigma) == (0.5, 0.1)
    assert cost_stats([3.0, 3.0]).std_dev == 0.0
    with pytest.raises(InsufficientSamples):
        cost_stats([1.0])


def test_truck_ton_miles_on_single_link():
    net = parallel_links_network(length=100.0)
    table = ton_miles_from_class_flows(_class_flows(2, truck={0: 10.0}), net)
    assert table.daily["truck"]["midwest"] == 16000.0
    assert table.daily["truck"][CONTIGUOUS_US] == 16000.0
    assert table.annual["truck"]["midwest"] == 16000.0 * 365.0
    assert table.daily["rail"][CONTIGUOUS_US] == 0.0


def test_ton_miles_scale_with_tons_per_truck():
    net = parallel_links_network(length=100.0)
    flows = _class_flows(2, truck={0: 10.0, 1: 2.5})
    base = ton_miles_from_class_flows(flows, net)
    doubled = ton_miles_from_class_flows(flows, net, TonMileConfig(tons_per_truck=32.0))
    assert doubled.daily["truck"][CONTIGUOUS_US] == pytest.approx(2 * base.daily["truck"][CONTIGUOUS_US])


def test_zero_flows_give_zero_table():
    net = parallel_links_network()
    table = ton_miles_from_class_flows(_class_flows(2), net)
    for mode in ("truck", "rail"):
        assert set(table.daily[mode]) == set(REGION_ROWS) | {Region.UNASSIGNED.value, CONTIGUOUS_US}
        assert all(v == 0.0 for v in table.daily[mode].values())
    assert table.unassigned_links == []


def test_intermodal_tons_split_between_road_and_rail(toy_net):
    flows = _class_flows(toy_net.n_links, intermodal={0: 2.0, 4: 2.0, 5: 2.0, 7: 2.0, 1: 2.0})
    table = ton_miles_from_class_flows(flows, toy_net, TonMileConfig(tons_per_intermodal_unit=20.0))
    # 连接线与场站不计入，铁路段 1020 英里
    assert table.daily["rail"][CONTIGUOUS_US] == pytest.approx(2.0 * 20.0 * 1020.0)
    assert table.daily["truck"][CONTIGUOUS_US] == 0.0


def test_region_rows_sum_to_total(toy_net, toy_solution):
    table = ton_miles(toy_solution, toy_net)
    for mode in ("truck", "rail"):
        rows = table.daily[mode]
        parts = [rows[r] for r in REGION_ROWS] + [rows[Region.UNASSIGNED.value]]
        assert math.fsum(parts) == pytest.approx(rows[CONTIGUOUS_US], rel=1e-12)
        assert rows[CONTIGUOUS_US] > 0.0


def test_unassigned_region_is_only_in_total():
    nodes = [make_node(0, NodeKind.CENTROID, Region.UNASSIGNED), make_node(1, NodeKind.CENTROID)]
    net = build_network(nodes, [make_link(0, 0, 1, LinkKind.ROAD, length=10.0)])
    table = ton_miles_from_class_flows(_class_flows(1, truck={0: 1.0}), net)
    assert table.unassigned_links == [0]
    assert table.daily["truck"][Region.UNASSIGNED.value] == 160.0
    assert table.daily["truck"][CONTIGUOUS_US] == 160.0
    assert table.daily["truck"]["midwest"] == 0.0


def test_compare_ton_miles():
    base = TonMileTable(
        daily={"truck": {"south": 100.0, "west": 0.0}},
        annual={"truck": {"south": 200.0, "west": 0.0}},
        annualization_factor=2.0,
    )
    scenario = TonMileTable(
        daily={"truck": {"south": 150.0, "west": 5.0}},
        annual={"truck": {"south": 300.0, "west": 10.0}},
        annualization_factor=2.0,
    )
    assert compare_ton_miles(base, scenario) == {"truck": {"south": 50.0, "west": None}}
    assert compare_ton_miles(base, scenario, annual=False)["truck"]["south"] == 50.0


def test_link_flow_export_is_byte_stable(tmp_path, toy_net, toy_solution):
    export_link_flows(toy_solution, toy_net, tmp_path / "a.csv")
    export_link_flows(toy_solution, toy_net, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    frame = pd.read_csv(tmp_path / "a.csv", float_precision="round_trip")
    assert tuple(frame.columns) == LINK_FLOW_COLUMNS
    assert list(frame["link_id"]) == list(range(toy_net.n_links))
    assert np.array_equal(frame["flow"].to_numpy(), toy_solution.link_flows)
    assert frame["vc_ratio"].to_numpy() == pytest.approx((frame["flow"] / frame["capacity"]).to_numpy())
    assert frame.loc[2, "region"] == "midwest"


def test_class_flows_round_trip(tmp_path, toy_net, toy_solution):
    export_class_flows(toy_solution, tmp_path / "class_flows.csv")
    flows = load_class_flows(tmp_path / "class_flows.csv", toy_net)
    for mode in Mode:
        assert np.array_equal(flows[mode], toy_solution.class_flows[mode])


def test_class_flows_errors(tmp_path, toy_net):
    with pytest.raises(MissingArtifact):
        load_class_flows(tmp_path / "missing.csv", toy_net)

    bad = tmp_path / "bad.csv"
    bad.write_text("link_id,truck\n0,x\n", encoding="utf-8")
    with pytest.raises(CorruptArtifact):
        load_class_flows(bad, toy_net)

    short = tmp_path / "short.csv"
    short.write_text("link_id,truck,rail,intermodal\n0,1.0,0.0,0.0\n", encoding="utf-8")
    with pytest.raises(CorruptArtifact, match="link ids"):
        load_class_flows(short, toy_net)


def test_json_artifacts(tmp_path):
    stats = CostStats(mean=1.5, std_dev=0.25, min=1.0, max=2.0)
    write_model(stats, tmp_path / "stats.json")
    assert read_model(CostStats, tmp_path / "stats.json") == stats
    assert not (tmp_path / "stats.tmp").exists()

    write_json({"values": np.arange(3)}, tmp_path / "values.json")
    assert read_json(tmp_path / "values.json") == {"values": [0, 1, 2]}

    (tmp_path / "broken.json").write_text("{not json", encoding="utf-8")
    with pytest.raises(CorruptArtifact, match="broken.json"):
        read_json(tmp_path / "broken.json")
    with pytest.raises(CorruptArtifact):
        read_model(CostStats, tmp_path / "values.json")
    with pytest.raises(MissingArtifact):
        read_model(CostStats, tmp_path / "nope.json")


def test_render_cost_table():
    text = render_cost_table({
        "hurricane": CostStats(mean=1.23456, std_dev=0.1, min=1.0, max=1.5, gap=0.01, gap_sigma=None),
    })
    assert "Total cost (hours/day)" in text
    assert "hurricane" in text
    assert "1.2346" in text
    for label in ("Average", "Std. dev.", "Minimum", "Maximum", "Gap", "σ_gap"):
        assert label in text


def test_render_ton_mile_table_with_changes(toy_net):
    base = ton_miles_from_class_flows(_class_flows(toy_net.n_links, truck={2: 10.0}), toy_net)
    hurricane = ton_miles_from_class_flows(_class_flows(toy_net.n_links, truck={2: 12.0}), toy_net)
    text = render_ton_mile_table({"base": base, "hurricane": hurricane}, base="base")
    assert "hurricane Δ%" in text
    assert "Contiguous U.S." in text
    assert "20.000" in text
    assert "base Δ%" not in text
