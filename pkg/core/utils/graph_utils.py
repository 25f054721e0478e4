"""
Graph helpers shared by the protocols and the exact deciders.
"""

import logging
from collections import deque
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

logger = logging.getLogger(__name__)


def _cleanup(g: nx.Graph) -> nx.Graph:
    """Repeatedly strip vertices of degree at most one."""
    g = g.copy()
    while True:
        to_remove = [node for node in g.nodes if g.degree(node) <= 1]
        if not to_remove:
            return g
        g.remove_nodes_from(to_remove)


def _semidisjoint_cycle(g: nx.Graph) -> Optional[List[int]]:
    """A cycle with at most one vertex of degree other than 2, if any."""
    for cycle in nx.cycle_basis(g):
        if sum(1 for node in cycle if g.degree(node) != 2) <= 1:
            return cycle
    return None


def local_ratio_fvs(g: nx.Graph, weights: Optional[Dict[int, int]] = None) -> Tuple[int, ...]:
    """
    Feedback vertex set within a factor 2 of optimum, by the local-ratio method.

    Each round either zeroes the weight of a semidisjoint cycle or subtracts
    ``gamma * (deg(v) - 1)`` from every vertex, takes the vertices whose weight
    reached zero, and strips degree <= 1 vertices. A final reverse-delete pass
    drops vertices that are not needed to keep the rest a forest. Weights are
    exact ``Fraction`` values so the zero test is exact.

    Args:
        g: Simple undirected graph
        weights: Optional vertex weights (default: all 1)

    Returns:
        Tuple[int, ...]: Sorted feedback vertex set
    """
    work = _cleanup(g)
    weight = {v: Fraction((weights or {}).get(v, 1)) for v in work.nodes}
    chosen = set()
    stack: List[int] = []
    while work.number_of_nodes():
        cycle = _semidisjoint_cycle(work)
        if cycle is not None:
            gamma = min(weight[v] for v in cycle)
            for v in cycle:
                weight[v] -= gamma
        else:
            gamma = min(weight[v] / (work.degree(v) - 1) for v in work.nodes)
            for v in work.nodes:
                weight[v] -= gamma * (work.degree(v) - 1)
        zeroed = sorted(v for v in work.nodes if weight[v] == 0)
        chosen.update(zeroed)
        stack.extend(zeroed)
        work.remove_nodes_from(zeroed)
        work = _cleanup(work)

    while stack:
        v = stack.pop()
        rest = g.subgraph(set(g.nodes) - (chosen - {v}))
        if nx.is_forest(rest):
            chosen.discard(v)
    logger.debug(f"local-ratio FVS picked {len(chosen)} of {g.number_of_nodes()} vertices")
    return tuple(sorted(chosen))


def component_labels(n: int, adjacency: Sequence[Sequence[int]], removed: Iterable[int] = ()) -> List[int]:
    """
    Connected-component label per vertex; removed vertices get -1.

    Labels are assigned in order of the smallest vertex of each component.
    """
    gone = set(removed)
    labels = [-1] * n
    label = 0
    for start in range(n):
        if start in gone or labels[start] != -1:
            continue
        labels[start] = label
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if v not in gone and labels[v] == -1:
                    labels[v] = label
                    queue.append(v)
        label += 1
    return labels


def bfs_distances(adjacency: Sequence[Sequence[int]], source: int) -> List[Optional[int]]:
    """Unweighted distances from ``source``; unreachable vertices are None."""
    dist: List[Optional[int]] = [None] * len(adjacency)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if dist[v] is None:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist
