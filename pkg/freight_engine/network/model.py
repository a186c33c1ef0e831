"""多式联运路网模型

Network 载入后不可变，数组只读，可在并发场景求解之间共享。
"""
import math
from collections import Counter
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from freight_engine.errors import (
    DanglingEndpoint,
    DuplicateId,
    InvalidFieldValue,
    MissingReverseRail,
    NonDenseId,
    NonPositiveCapacity,
    TerminalEndpointsSameSide,
)
from freight_engine.network.layers import LayeredAdjacency, build_layered_adjacency
from freight_engine.schemas.network import ACCESS_MODES, Link, LinkKind, Mode, Node, NodeKind, Region, RiskTag


# 路段类型编码，供向量化计算使用
KIND_CODES: Dict[LinkKind, int] = {
    LinkKind.ROAD: 0,
    LinkKind.RAIL: 1,
    LinkKind.TERMINAL: 2,
    LinkKind.CONNECTOR: 3,
}

LinkPredicate = Callable[[Link], bool]


def _readonly(values: Iterable, dtype) -> np.ndarray:
    arr = np.asarray(list(values), dtype=dtype)
    arr.setflags(write=False)
    return arr


class Network:
    """有向多式联运路网 G=(N, A)

    只通过 build_network 构造，构造前已完成全部校验。
    """

    def __init__(self, nodes: Sequence[Node], links: Sequence[Link]) -> None:
        self.nodes: Tuple[Node, ...] = tuple(nodes)
        self.links: Tuple[Link, ...] = tuple(links)

        self.tail = _readonly((l.tail for l in self.links), np.int64)
        self.head = _readonly((l.head for l in self.links), np.int64)
        self.kind_code = _readonly((KIND_CODES[l.kind] for l in self.links), np.int8)
        self.fftime = _readonly((l.free_flow_time_hr for l in self.links), np.float64)
        self.cap_lo = _readonly((l.cap_lo for l in self.links), np.float64)
        self.cap_hi = _readonly((l.cap_hi for l in self.links), np.float64)
        self.length = _readonly((l.length_miles for l in self.links), np.float64)
        self.reverse = _readonly(
            (l.reverse_link if l.reverse_link is not None else -1 for l in self.links), np.int64
        )

        self.is_road = _readonly((l.kind == LinkKind.ROAD for l in self.links), bool)
        self.is_rail = _readonly((l.kind == LinkKind.RAIL for l in self.links), bool)
        self.is_fixed = _readonly(
            (l.kind in (LinkKind.TERMINAL, LinkKind.CONNECTOR) for l in self.links), bool
        )
        self.terminals: Tuple[int, ...] = tuple(
            l.id for l in self.links if l.kind == LinkKind.TERMINAL
        )

        self.out_adjacency: Dict[Mode, Tuple[Tuple[int, ...], ...]] = {
            mode: self._build_adjacency(mode_subnetwork(self, mode)) for mode in Mode
        }
        self.layered_adjacency: LayeredAdjacency = build_layered_adjacency(self.nodes, self.links)

    def _build_adjacency(self, predicate: LinkPredicate) -> Tuple[Tuple[int, ...], ...]:
        out: List[List[int]] = [[] for _ in self.nodes]
        for link in self.links:
            if predicate(link):
                out[link.tail].append(link.id)
        return tuple(tuple(ids) for ids in out)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_links(self) -> int:
        return len(self.links)

    @property
    def centroids(self) -> Tuple[int, ...]:
        return tuple(n.id for n in self.nodes if n.kind == NodeKind.CENTROID)

    def link_region(self, link_id: int) -> Region:
        """路段所属大区取其起点节点的大区"""
        return self.nodes[self.links[link_id].tail].region

    def mode_mask(self, mode: Mode) -> np.ndarray:
        predicate = mode_subnetwork(self, mode)
        return np.array([predicate(l) for l in self.links], dtype=bool)

    def risk_mask(self, tags: Iterable[RiskTag]) -> np.ndarray:
        wanted = frozenset(tags)
        return np.array([bool(l.risk_tags & wanted) for l in self.links], dtype=bool)


def mode_subnetwork(net: Network, mode: Mode) -> LinkPredicate:
    """返回方式子网的路段谓词

    卡车：道路 + 卡车可达连接线；铁路：铁路 + 铁路可达连接线；多式联运：全部路段。

    :param net: 路网
    :param mode: 货运方式
    :return:
    """
    if mode == Mode.INTERMODAL:
        return lambda link: True

    own_kind = LinkKind.ROAD if mode == Mode.TRUCK else LinkKind.RAIL

    def _admits(link: Link) -> bool:
        if link.kind == own_kind:
            return True
        return link.kind == LinkKind.CONNECTOR and mode in link.mode_access

    return _admits


def network_summary(net: Network) -> Dict[str, Dict[str, int]]:
    """统计各类节点、路段与风险标签数量

    :param net: 路网
    :return:
    """
    tag_counts: Counter = Counter()
    for link in net.links:
        tag_counts.update(tag.value for tag in link.risk_tags)
    return {
        "nodes": {kind.value: sum(1 for n in net.nodes if n.kind == kind) for kind in NodeKind},
        "links": {kind.value: sum(1 for l in net.links if l.kind == kind) for kind in LinkKind},
        "risk_tags": {tag.value: tag_counts.get(tag.value, 0) for tag in RiskTag},
        "totals": {"nodes": net.n_nodes, "links": net.n_links, "terminals": len(net.terminals)},
    }


def _check_dense(ids: Sequence[int], what: str) -> None:
    seen = set()
    for item in ids:
        if item in seen:
            raise DuplicateId(**{what: item})
        seen.add(item)
    for expected, item in enumerate(sorted(ids)):
        if expected != item:
            raise NonDenseId(f"expected {expected}", **{what: item})


def _check_link(link: Link, nodes: Sequence[Node]) -> None:
    for endpoint in (link.tail, link.head):
        if endpoint >= len(nodes):
            raise DanglingEndpoint(link=link.id, node=endpoint)
    # NaN 与任何数比较都为 False，须先判有限
    if not (math.isfinite(link.cap_lo) and math.isfinite(link.cap_hi)):
        raise NonPositiveCapacity(f"non-finite cap_lo={link.cap_lo} cap_hi={link.cap_hi}", link=link.id)
    if link.cap_lo <= 0 or link.cap_hi <= 0 or link.cap_lo > link.cap_hi:
        raise NonPositiveCapacity(f"cap_lo={link.cap_lo} cap_hi={link.cap_hi}", link=link.id)
    if not (math.isfinite(link.free_flow_time_hr) and link.free_flow_time_hr > 0):
        raise InvalidFieldValue("free-flow time must be positive and finite", link=link.id)
    if not (math.isfinite(link.length_miles) and link.length_miles >= 0):
        raise InvalidFieldValue(f"length_miles={link.length_miles}", link=link.id)
    if link.kind == LinkKind.TERMINAL:
        # 一端道路侧（质心或道路交叉口），另一端铁路枢纽
        tail_rail = nodes[link.tail].kind == NodeKind.RAIL_JUNCTION
        head_rail = nodes[link.head].kind == NodeKind.RAIL_JUNCTION
        if tail_rail == head_rail:
            raise TerminalEndpointsSameSide(link=link.id)
    if link.kind == LinkKind.CONNECTOR and not link.mode_access:
        raise InvalidFieldValue("connector without mode_access", link=link.id)
    if link.kind == LinkKind.CONNECTOR and not link.mode_access <= frozenset(ACCESS_MODES):
        raise InvalidFieldValue("connector mode_access must be truck and/or rail", link=link.id)
    if link.kind in (LinkKind.ROAD, LinkKind.CONNECTOR) and link.reverse_link is not None:
        raise InvalidFieldValue("reverse_id only allowed on rail/terminal links", link=link.id)


def _is_swapped_pair(link: Link, other: Link) -> bool:
    return (
        other.kind == link.kind
        and other.tail == link.head
        and other.head == link.tail
        and other.reverse_link == link.id
        and link.reverse_link == other.id
    )


def build_network(nodes: Sequence[Node], links: Sequence[Link]) -> Network:
    """校验节点/路段并构造 Network

    未给出 reverse_id 的场站转运路段会在末尾补一条反向路段。

    :param nodes: 节点列表
    :param links: 路段列表
    :return:
    :raises DataValidationError: 任一不变式不成立
    """
    _check_dense([n.id for n in nodes], "node")
    _check_dense([l.id for l in links], "link")

    nodes = sorted(nodes, key=lambda n: n.id)
    links = sorted(links, key=lambda l: l.id)
    for link in links:
        _check_link(link, nodes)

    materialized: List[Link] = [
        l if l.kind == LinkKind.CONNECTOR else l.model_copy(update={"mode_access": frozenset()})
        for l in links
    ]
    next_id = len(materialized)
    for idx, link in enumerate(list(materialized)):
        if link.kind != LinkKind.TERMINAL or link.reverse_link is not None:
            continue
        materialized[idx] = link.model_copy(update={"reverse_link": next_id})
        materialized.append(
            link.model_copy(
                update={"id": next_id, "tail": link.head, "head": link.tail, "reverse_link": link.id}
            )
        )
        next_id += 1

    for link in materialized:
        if link.kind not in (LinkKind.RAIL, LinkKind.TERMINAL):
            continue
        rev = link.reverse_link
        partner = materialized[rev] if rev is not None and 0 <= rev < len(materialized) else None
        if partner is None or not _is_swapped_pair(link, partner):
            if link.kind == LinkKind.RAIL:
                raise MissingReverseRail(link=link.id)
            raise InvalidFieldValue("terminal reverse_id must point to a swapped terminal", link=link.id)

    return Network(nodes, materialized)
