"""多式联运分层状态图

多式联运路径必须呈 道路侧 → 场站(上铁路) → 铁路⁺ → 场站(下铁路) → 道路侧 的结构。
在 (节点, 层) 状态上搜索即可保证恰好两个场站路段夹住一段非空铁路。
"""
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

from freight_engine.schemas.network import Link, LinkKind, Mode, Node, NodeKind

if TYPE_CHECKING:
    from freight_engine.network.model import Network


PRE_RAIL = 0
ENTERED_RAIL = 1
ON_RAIL = 2
POST_RAIL = 3
LAYERS: Tuple[int, ...] = (PRE_RAIL, ENTERED_RAIL, ON_RAIL, POST_RAIL)

# 每层的出边: layered[layer][node] = ((link_id, next_layer), ...)
LayeredAdjacency = Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...]


def _truck_side(link: Link) -> bool:
    if link.kind == LinkKind.ROAD:
        return True
    return link.kind == LinkKind.CONNECTOR and Mode.TRUCK in link.mode_access


def next_layer(link: Link, nodes: Sequence[Node], layer: int) -> Optional[int]:
    """在某层经过路段后到达的层，不允许时返回 None

    :param link: 路段
    :param nodes: 节点列表（按 id 索引）
    :param layer: 当前层
    :return:
    """
    if layer in (PRE_RAIL, POST_RAIL) and _truck_side(link):
        return layer
    if link.kind == LinkKind.RAIL and layer in (ENTERED_RAIL, ON_RAIL):
        return ON_RAIL
    if link.kind == LinkKind.TERMINAL:
        boarding = nodes[link.head].kind == NodeKind.RAIL_JUNCTION
        if layer == PRE_RAIL and boarding:
            return ENTERED_RAIL
        if layer == ON_RAIL and not boarding:
            return POST_RAIL
    return None


def build_layered_adjacency(nodes: Sequence[Node], links: Sequence[Link]) -> LayeredAdjacency:
    """按层构建出边表，出边按路段 id 升序"""
    table: List[List[List[Tuple[int, int]]]] = [[[] for _ in nodes] for _ in LAYERS]
    for link in links:
        for layer in LAYERS:
            target = next_layer(link, nodes, layer)
            if target is not None:
                table[layer][link.tail].append((link.id, target))
    return tuple(tuple(tuple(edges) for edges in per_node) for per_node in table)


def is_intermodal_path(net: "Network", links: Sequence[int]) -> bool:
    """检查路段序列是否为合法的多式联运路径

    :param net: 路网
    :param links: 路段 id 序列
    :return:
    """
    if not links:
        return False
    layer = PRE_RAIL
    previous_head: Optional[int] = None
    terminals = 0
    for link_id in links:
        link = net.links[link_id]
        if previous_head is not None and link.tail != previous_head:
            return False
        target = next_layer(link, net.nodes, layer)
        if target is None:
            return False
        terminals += link.kind == LinkKind.TERMINAL
        layer = target
        previous_head = link.head
    return layer == POST_RAIL and terminals == 2
