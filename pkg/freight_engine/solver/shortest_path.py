"""方式子网最短路

卡车、铁路在节点图上搜索；多式联运在 (节点, 层) 状态图上搜索，
终点状态为 (目的质心, POST_RAIL)。标签为 (费用, 路段序列)，
费用相同时取路段 id 序列字典序较小者，结果确定。
"""
import heapq
from dataclasses import dataclass
from itertools import islice
from typing import Dict, Iterator, List, Tuple

import networkx as nx
import numpy as np

from freight_engine.errors import Unreachable
from freight_engine.network.layers import LAYERS, POST_RAIL, PRE_RAIL
from freight_engine.network.model import Network
from freight_engine.schemas.network import Mode
from freight_engine.solver.paths import Path

Label = Tuple[float, Tuple[int, ...]]
State = Tuple[int, int]


def _successors(net: Network, mode: Mode, state: State) -> Iterator[Tuple[int, State]]:
    node, layer = state
    if mode == Mode.INTERMODAL:
        for link_id, target in net.layered_adjacency[layer][node]:
            yield link_id, (int(net.head[link_id]), target)
    else:
        for link_id in net.out_adjacency[mode][node]:
            yield link_id, (int(net.head[link_id]), layer)


def _terminal_layer(mode: Mode) -> int:
    return POST_RAIL if mode == Mode.INTERMODAL else PRE_RAIL


@dataclass(frozen=True)
class ShortestPathTree:
    """从单一起点出发、单一方式的最短路标签"""
    origin: int
    mode: Mode
    labels: Dict[State, Label]

    def _label(self, destination: int) -> Label:
        label = self.labels.get((destination, _terminal_layer(self.mode)))
        if label is None or not label[1]:
            raise Unreachable(origin=self.origin, destination=destination, mode=self.mode.value)
        return label

    def path_to(self, destination: int) -> Path:
        return Path(self._label(destination)[1], self.mode)

    def cost_to(self, destination: int) -> float:
        return self._label(destination)[0]


def shortest_path_tree(net: Network, link_times: np.ndarray, mode: Mode, origin: int) -> ShortestPathTree:
    """单源 Dijkstra，非负路段时间

    :param net: 路网
    :param link_times: (L,) 当前路段时间
    :param mode: 货运方式
    :param origin: 起点质心
    :return:
    """
    source: State = (origin, PRE_RAIL)
    settled: Dict[State, Label] = {}
    best: Dict[State, Label] = {source: (0.0, ())}
    heap: List[Tuple[float, Tuple[int, ...], State]] = [(0.0, (), source)]

    while heap:
        cost, links, state = heapq.heappop(heap)
        if state in settled:
            continue
        settled[state] = (cost, links)
        for link_id, target in _successors(net, mode, state):
            if target in settled:
                continue
            candidate = (cost + float(link_times[link_id]), links + (link_id,))
            current = best.get(target)
            if current is None or candidate < current:
                best[target] = candidate
                heapq.heappush(heap, (candidate[0], candidate[1], target))

    return ShortestPathTree(origin=origin, mode=mode, labels=settled)


def shortest_path(net: Network, link_times: np.ndarray, mode: Mode, origin: int, destination: int) -> Path:
    """当前路段时间下 (origin, destination) 在该方式子网中的最短路

    :param net: 路网
    :param link_times: (L,) 路段时间
    :param mode: 货运方式
    :param origin: 起点质心
    :param destination: 终点质心
    :return:
    :raises Unreachable: 不可达
    """
    return shortest_path_tree(net, link_times, mode, origin).path_to(destination)


def _link_split_graph(net: Network, link_times: np.ndarray, mode: Mode) -> nx.DiGraph:
    """每条路段拆成一个中间节点，平行路段得以区分"""
    graph = nx.DiGraph()
    layers = LAYERS if mode == Mode.INTERMODAL else (PRE_RAIL,)
    for layer in layers:
        for node in range(net.n_nodes):
            state = (node, layer)
            for link_id, target in _successors(net, mode, state):
                via = ("link", link_id, layer)
                graph.add_edge(state, via, weight=float(link_times[link_id]))
                graph.add_edge(via, target, weight=0.0)
    return graph


def k_shortest_paths(
    net: Network,
    link_times: np.ndarray,
    mode: Mode,
    origin: int,
    destination: int,
    k: int,
) -> List[Path]:
    """前 k 条最短简单路径，第一条与 shortest_path 费用相同

    :param net: 路网
    :param link_times: (L,) 路段时间
    :param mode: 货运方式
    :param origin: 起点质心
    :param destination: 终点质心
    :param k: 条数
    :return:
    :raises Unreachable: 不可达
    """
    if k <= 1:
        return [shortest_path(net, link_times, mode, origin, destination)]

    graph = _link_split_graph(net, link_times, mode)
    source, target = (origin, PRE_RAIL), (destination, _terminal_layer(mode))
    if source not in graph or target not in graph:
        raise Unreachable(origin=origin, destination=destination, mode=mode.value)
    try:
        generator = nx.shortest_simple_paths(graph, source, target, weight="weight")
        state_paths = list(islice(generator, k))
    except nx.NetworkXNoPath:
        raise Unreachable(origin=origin, destination=destination, mode=mode.value) from None

    paths = [Path(tuple(v[1] for v in nodes if v[0] == "link"), mode) for nodes in state_paths]
    # 首条以 Dijkstra 结果为准，保证与单路径模式一致
    first = shortest_path(net, link_times, mode, origin, destination)
    return [first] + [p for p in paths if p.links != first.links][: k - 1]
