"""需求与路网的一致性校验: 连接线与方式子网连通性"""
from typing import Optional

import networkx as nx

from freight_engine.demand.table import DemandTable
from freight_engine.errors import DisconnectedDemand, MissingConnector
from freight_engine.logging_utils import get_logger
from freight_engine.network.layers import LAYERS, POST_RAIL, PRE_RAIL
from freight_engine.network.model import Network
from freight_engine.schemas.network import LinkKind, Mode


def mode_graph(net: Network, mode: Mode) -> nx.DiGraph:
    """方式子网的 networkx 图

    卡车/铁路为节点图；多式联运为 (节点, 层) 状态图。
    """
    graph = nx.DiGraph()
    if mode == Mode.INTERMODAL:
        for layer in LAYERS:
            for node, edges in enumerate(net.layered_adjacency[layer]):
                graph.add_node((node, layer))
                for link_id, target in edges:
                    graph.add_edge((node, layer), (net.links[link_id].head, target))
        return graph

    graph.add_nodes_from(range(net.n_nodes))
    for node, link_ids in enumerate(net.out_adjacency[mode]):
        for link_id in link_ids:
            graph.add_edge(node, net.links[link_id].head)
    return graph


def _has_connector(net: Network, centroid: int, mode: Mode) -> bool:
    for link in net.links:
        if link.kind != LinkKind.CONNECTOR or mode not in link.mode_access:
            continue
        if centroid in (link.tail, link.head):
            return True
    return False


def validate_demand_support(net: Network, demand: DemandTable, run_id: Optional[str] = None) -> None:
    """校验每个有需求的 O-D 在其方式子网中可达

    有需求的质心至少有一条卡车连接线；有铁路需求的质心还需一条铁路连接线。

    :param net: 路网
    :param demand: 需求表
    :param run_id: 运行标识
    :return:
    :raises MissingConnector: 缺少连接线
    :raises DisconnectedDemand: 不可达
    """
    logger = get_logger(run_id)

    rail_centroids = set(demand.centroids_for(Mode.RAIL))
    all_centroids = set()
    for mode in Mode:
        all_centroids.update(demand.centroids_for(mode))
    for centroid in sorted(all_centroids):
        if not _has_connector(net, centroid, Mode.TRUCK):
            raise MissingConnector(node=centroid, mode=Mode.TRUCK.value)
        if centroid in rail_centroids and not _has_connector(net, centroid, Mode.RAIL):
            raise MissingConnector(node=centroid, mode=Mode.RAIL.value)

    graphs = {mode: mode_graph(net, mode) for mode in Mode}
    for (origin, destination, mode), _ in demand:
        if mode == Mode.INTERMODAL:
            source, target = (origin, PRE_RAIL), (destination, POST_RAIL)
        else:
            source, target = origin, destination
        if not nx.has_path(graphs[mode], source, target):
            raise DisconnectedDemand(origin=origin, destination=destination, mode=mode.value)

    logger.info(f"需求-路网一致性校验通过: {len(demand)} 个条目")
