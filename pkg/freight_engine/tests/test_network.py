import math
import shutil

import pytest

from freight_engine.demand.table import DemandTable
from freight_engine.errors import (
    ConfigError,
    DanglingEndpoint,
    DisconnectedDemand,
    DuplicateId,
    InvalidFieldValue,
    MissingConnector,
    MissingReverseRail,
    NonDenseId,
    NonPositiveCapacity,
    TerminalEndpointsSameSide,
)
from freight_engine.network.layers import ENTERED_RAIL, ON_RAIL, POST_RAIL, PRE_RAIL, is_intermodal_path
from freight_engine.network.loader import export_network, load_network
from freight_engine.network.model import build_network, mode_subnetwork, network_summary
from freight_engine.network.validation import validate_demand_support
from freight_engine.schemas.network import LinkKind, Mode, NodeKind, Region, RiskTag
from freight_engine.tests.factories import TOY_DIR, intermodal_network, make_link, make_node


def test_load_toy_network_counts():
    net = load_network(TOY_DIR / "nodes.csv", TOY_DIR / "links.csv")
    summary = network_summary(net)
    assert net.n_nodes == 6
    # 两条场站路段各补一条反向
    assert net.n_links == 12
    assert summary["nodes"] == {"centroid": 2, "road": 2, "rail": 2}
    assert summary["links"] == {"road": 2, "rail": 2, "terminal": 4, "connector": 4}
    assert summary["risk_tags"]["hurricane"] == 3
    assert net.centroids == (0, 1)


def test_terminal_reverse_is_materialized():
    net = intermodal_network()
    forward = net.links[4]
    reverse = net.links[forward.reverse_link]
    assert reverse.id == 10
    assert (reverse.tail, reverse.head) == (forward.head, forward.tail)
    assert reverse.reverse_link == forward.id
    assert reverse.kind == LinkKind.TERMINAL
    assert reverse.free_flow_time_hr == forward.free_flow_time_hr


def test_link_region_follows_tail_node():
    net = intermodal_network()
    assert net.link_region(2) == Region.MIDWEST
    assert net.link_region(6) == Region.SOUTH


def test_export_then_load_reproduces_network(tmp_path):
    net = intermodal_network()
    export_network(net, tmp_path / "nodes.csv", tmp_path / "links.csv")
    again = load_network(tmp_path / "nodes.csv", tmp_path / "links.csv")
    assert again.nodes == net.nodes
    assert again.links == net.links


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_network(tmp_path / "nodes.csv", tmp_path / "links.csv")


def _two_centroids():
    return [make_node(0, NodeKind.CENTROID), make_node(1, NodeKind.RAIL_JUNCTION), make_node(2, NodeKind.RAIL_JUNCTION)]


def test_rail_without_reverse_is_rejected():
    links = [make_link(0, 1, 2, LinkKind.RAIL)]
    with pytest.raises(MissingReverseRail, match="MissingReverseRail link=0"):
        build_network(_two_centroids(), links)


def test_rail_reverse_must_swap_endpoints():
    links = [make_link(0, 1, 2, LinkKind.RAIL, reverse=1), make_link(1, 1, 2, LinkKind.RAIL, reverse=0)]
    with pytest.raises(MissingReverseRail):
        build_network(_two_centroids(), links)


def test_dangling_endpoint():
    with pytest.raises(DanglingEndpoint, match="node=9"):
        build_network(_two_centroids(), [make_link(0, 0, 9, LinkKind.ROAD)])


@pytest.mark.parametrize("cap", [(0.0, 1.0), (-1.0, 2.0), (5.0, 4.0)])
def test_non_positive_capacity(cap):
    with pytest.raises(NonPositiveCapacity):
        build_network(_two_centroids(), [make_link(0, 0, 1, LinkKind.ROAD, cap=cap)])


@pytest.mark.parametrize("cap", [(math.nan, math.nan), (10.0, math.inf), (math.nan, 5.0)])
def test_non_finite_capacity(cap):
    with pytest.raises(NonPositiveCapacity):
        build_network(_two_centroids(), [make_link(0, 0, 1, LinkKind.ROAD, cap=cap)])


@pytest.mark.parametrize("field", [dict(length=math.inf), dict(fftime=math.inf)])
def test_non_finite_length_or_time(field):
    with pytest.raises(InvalidFieldValue):
        build_network(_two_centroids(), [make_link(0, 0, 1, LinkKind.ROAD, **field)])


def _toy_copy(tmp_path, old, new):
    for name in ("nodes.csv", "links.csv"):
        shutil.copy(TOY_DIR / name, tmp_path / name)
    links = tmp_path / "links.csv"
    text = links.read_text(encoding="utf-8")
    assert old in text
    links.write_text(text.replace(old, new), encoding="utf-8")
    return tmp_path / "nodes.csv", links


def test_nan_capacity_in_csv(tmp_path):
    nodes, links = _toy_copy(tmp_path, "940.0,15.0,90.0,130.0", "940.0,15.0,nan,nan")
    with pytest.raises(NonPositiveCapacity, match="link=2"):
        load_network(nodes, links)


def test_field_constraint_in_csv_reports_row(tmp_path):
    nodes, links = _toy_copy(tmp_path, "940.0,15.0,90.0,130.0", "-5.0,15.0,90.0,130.0")
    with pytest.raises(InvalidFieldValue, match="row=4") as info:
        load_network(nodes, links)
    assert "length_miles" in str(info.value)


def test_nan_length_in_csv(tmp_path):
    nodes, links = _toy_copy(tmp_path, "940.0,15.0,90.0,130.0", "nan,15.0,90.0,130.0")
    with pytest.raises(InvalidFieldValue, match="length_miles"):
        load_network(nodes, links)


def test_terminal_endpoints_on_same_side():
    nodes = [make_node(0, NodeKind.CENTROID), make_node(1, NodeKind.ROAD_INTERSECTION)]
    with pytest.raises(TerminalEndpointsSameSide):
        build_network(nodes, [make_link(0, 0, 1, LinkKind.TERMINAL)])


def test_duplicate_and_sparse_ids():
    nodes = _two_centroids()
    with pytest.raises(DuplicateId):
        build_network(nodes + [make_node(2, NodeKind.CENTROID)], [])
    with pytest.raises(NonDenseId):
        build_network(nodes, [make_link(1, 0, 1, LinkKind.ROAD)])


def test_connector_needs_mode_access():
    with pytest.raises(InvalidFieldValue):
        build_network(_two_centroids(), [make_link(0, 0, 1, LinkKind.CONNECTOR)])
    with pytest.raises(InvalidFieldValue, match="truck and/or rail"):
        build_network(_two_centroids(), [make_link(0, 0, 1, LinkKind.CONNECTOR, mode_access=[Mode.INTERMODAL])])


def test_mode_subnetworks():
    net = intermodal_network()
    truck = mode_subnetwork(net, Mode.TRUCK)
    rail = mode_subnetwork(net, Mode.RAIL)
    assert [l.id for l in net.links if truck(l)] == [0, 1, 2, 3]
    assert [l.id for l in net.links if rail(l)] == [5, 6, 8, 9]
    assert net.mode_mask(Mode.INTERMODAL).all()


def test_layered_adjacency_transitions():
    net = intermodal_network()
    layered = net.layered_adjacency
    # 道路节点 2：PRE_RAIL 可上道路或经场站进入铁路
    assert (4, ENTERED_RAIL) in layered[PRE_RAIL][2]
    assert (2, PRE_RAIL) in layered[PRE_RAIL][2]
    # 铁路枢纽 5：在铁路上可经场站下到道路侧
    assert (7, POST_RAIL) in layered[ON_RAIL][5]
    assert layered[POST_RAIL][4] == ()


def test_is_intermodal_path():
    net = intermodal_network()
    assert is_intermodal_path(net, [0, 4, 5, 7, 1])
    assert not is_intermodal_path(net, [0, 2, 1])
    # 场站之间缺少铁路段
    assert not is_intermodal_path(net, [0, 4, 10, 2, 1])
    assert not is_intermodal_path(net, [0, 4, 5])
    assert not is_intermodal_path(net, [])


def test_validate_demand_support_passes_on_toy():
    net = intermodal_network()
    demand = DemandTable({(0, 1, Mode.TRUCK): 1.0, (0, 1, Mode.RAIL): 1.0, (0, 1, Mode.INTERMODAL): 1.0})
    validate_demand_support(net, demand)


def test_missing_rail_connector():
    nodes = [make_node(0, NodeKind.CENTROID), make_node(1, NodeKind.CENTROID), make_node(2, NodeKind.ROAD_INTERSECTION)]
    links = [
        make_link(0, 0, 2, LinkKind.CONNECTOR, mode_access=[Mode.TRUCK]),
        make_link(1, 2, 1, LinkKind.CONNECTOR, mode_access=[Mode.TRUCK]),
    ]
    net = build_network(nodes, links)
    validate_demand_support(net, DemandTable({(0, 1, Mode.TRUCK): 1.0}))
    with pytest.raises(MissingConnector, match="mode=rail"):
        validate_demand_support(net, DemandTable({(0, 1, Mode.RAIL): 1.0}))


def test_intermodal_demand_needs_only_truck_connectors():
    nodes = [
        make_node(0, NodeKind.CENTROID),
        make_node(1, NodeKind.CENTROID),
        make_node(2, NodeKind.ROAD_INTERSECTION),
        make_node(3, NodeKind.ROAD_INTERSECTION),
        make_node(4, NodeKind.RAIL_JUNCTION),
        make_node(5, NodeKind.RAIL_JUNCTION),
    ]
    links = [
        make_link(0, 0, 2, LinkKind.CONNECTOR, mode_access=[Mode.TRUCK]),
        make_link(1, 3, 1, LinkKind.CONNECTOR, mode_access=[Mode.TRUCK]),
        make_link(2, 2, 4, LinkKind.TERMINAL),
        make_link(3, 4, 5, LinkKind.RAIL, reverse=4),
        make_link(4, 5, 4, LinkKind.RAIL, reverse=3),
        make_link(5, 5, 3, LinkKind.TERMINAL),
    ]
    net = build_network(nodes, links)
    # 联运货物经场站上下铁路，两端只需卡车连接线
    validate_demand_support(net, DemandTable({(0, 1, Mode.INTERMODAL): 1.0}))
    with pytest.raises(MissingConnector, match="mode=rail"):
        validate_demand_support(net, DemandTable({(0, 1, Mode.RAIL): 1.0}))


def test_disconnected_demand():
    nodes = [make_node(0, NodeKind.CENTROID), make_node(1, NodeKind.CENTROID), make_node(2, NodeKind.ROAD_INTERSECTION)]
    links = [
        make_link(0, 0, 2, LinkKind.CONNECTOR, mode_access=[Mode.TRUCK]),
        make_link(1, 1, 2, LinkKind.CONNECTOR, mode_access=[Mode.TRUCK]),
    ]
    net = build_network(nodes, links)
    with pytest.raises(DisconnectedDemand, match="origin=0 destination=1"):
        validate_demand_support(net, DemandTable({(0, 1, Mode.TRUCK): 1.0}))


def test_risk_mask():
    net = intermodal_network()
    assert list(net.risk_mask([RiskTag.HURRICANE]).nonzero()[0]) == [2, 5, 6]
    assert not net.risk_mask([RiskTag.FLOOD]).any()
