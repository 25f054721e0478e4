"""
Path tables for the trees of a forest.

For every tree ``T`` and vertices ``a, b`` of ``T``, ``length(a, b)`` is the
number of vertices on the unique ``a``-``b`` path; for two such paths in the
same tree, ``disjoint`` tells whether they share a vertex. Tables are filled
completely at build time by a BFS from every vertex of each tree.
"""

import logging
from collections import deque
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Sequence, Tuple

import networkx as nx

from core.exceptions import PreconditionError, StructureUsageError
from core.structures.counters import OpCounter
from core.structures.serialization import Decoder, Encoder, pack_sections, unpack_sections

logger = logging.getLogger(__name__)

BLOB_KIND = "tree-path-tables"


def _pair(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a <= b else (b, a)


class TreePathTables:
    """
    Per-tree ``len`` and ``disj`` tables.

    Vertices outside the forest carry label -1.
    """

    def __init__(self, labels: Sequence[int], members: Sequence[Sequence[int]], lengths, disjoint):
        self.labels = tuple(labels)
        self.members = tuple(tuple(m) for m in members)
        self._position = {v: i for comp in self.members for i, v in enumerate(comp)}
        self._lengths: List[List[int]] = lengths
        self._disjoint: List[Dict[Tuple[int, int, int, int], bool]] = disjoint
        self.counter = OpCounter()

    @classmethod
    def build(
        cls, n: int, edges: Iterable[Tuple[int, int]], vertices: Iterable[int] | None = None
    ) -> "TreePathTables":
        """
        Tables for the forest on ``vertices`` (default: all ``n``) with ``edges``.

        Raises:
            PreconditionError: The input has a cycle or an edge leaves ``vertices``
        """
        present = set(range(n)) if vertices is None else set(vertices)
        adjacency: Dict[int, List[int]] = {v: [] for v in present}
        edge_count = 0
        for u, v in edges:
            if u not in present or v not in present:
                raise PreconditionError(f"edge ({u}, {v}) leaves the forest's vertex set")
            adjacency[u].append(v)
            adjacency[v].append(u)
            edge_count += 1

        labels = [-1] * n
        members: List[List[int]] = []
        for start in sorted(present):
            if labels[start] != -1:
                continue
            comp = [start]
            labels[start] = len(members)
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v in sorted(adjacency[u]):
                    if labels[v] == -1:
                        labels[v] = len(members)
                        comp.append(v)
                        queue.append(v)
            members.append(sorted(comp))
        if edge_count != len(present) - len(members):
            raise PreconditionError(
                f"input is not a forest: {edge_count} edges on {len(present)} vertices "
                f"in {len(members)} components"
            )

        lengths = []
        disjoint = []
        for comp in members:
            local = {v: i for i, v in enumerate(comp)}
            masks = [[0] * len(comp) for _ in comp]
            for a in comp:
                parent = {a: a}
                queue = deque([a])
                while queue:
                    u = queue.popleft()
                    for v in adjacency[u]:
                        if v not in parent:
                            parent[v] = u
                            queue.append(v)
                for b in comp:
                    mask, w = 0, b
                    while True:
                        mask |= 1 << local[w]
                        if w == a:
                            break
                        w = parent[w]
                    masks[local[a]][local[b]] = mask
            lengths.append([[bin(m).count("1") for m in row] for row in masks])
            pairs = list(combinations_with_replacement(range(len(comp)), 2))
            table = {}
            for i, j in pairs:
                for k, l in pairs:
                    table[(i, j, k, l)] = (masks[i][j] & masks[k][l]) == 0
            disjoint.append(table)
        logger.debug(f"path tables: {len(members)} trees, largest {max((len(c) for c in members), default=0)}")
        return cls(labels, members, lengths, disjoint)

    def label(self, v: int) -> int:
        return self.labels[v]

    def _locate(self, a: int, b: int) -> Tuple[int, int, int]:
        comp = self.labels[a] if 0 <= a < len(self.labels) else -1
        if comp == -1 or self.labels[b] != comp:
            raise StructureUsageError(f"vertices {a} and {b} are not in one tree")
        i, j = _pair(self._position[a], self._position[b])
        return comp, i, j

    def length(self, a: int, b: int) -> int:
        """Number of vertices on the tree path from ``a`` to ``b``."""
        self.counter.tick("len")
        comp, i, j = self._locate(a, b)
        return self._lengths[comp][i][j]

    def disjoint(self, a: int, b: int, c: int, d: int) -> bool:
        """Whether the paths ``a``-``b`` and ``c``-``d`` share no vertex."""
        self.counter.tick("disj")
        first, i, j = self._locate(a, b)
        second, k, l = self._locate(c, d)
        if first != second:
            return True
        return self._disjoint[first][(i, j, k, l)]

    def fresh_copy(self) -> "TreePathTables":
        return TreePathTables(self.labels, self.members, self._lengths, self._disjoint)

    def to_bytes(self) -> bytes:
        head = Encoder().counts(label + 1 for label in self.labels).count(len(self.members))
        for comp, rows, table in zip(self.members, self._lengths, self._disjoint):
            head.counts(comp)
            head.counts(x for row in rows for x in row)
            head.fixed(bytes(int(table[key]) for key in sorted(table)))
        return pack_sections(BLOB_KIND, {"tables": head.to_bytes()})

    @classmethod
    def from_bytes(cls, data: bytes) -> "TreePathTables":
        body = Decoder(unpack_sections(data, BLOB_KIND)["tables"], "path tables")
        labels = [x - 1 for x in body.counts()]
        members, lengths, disjoint = [], [], []
        for _ in range(body.count()):
            comp = body.counts()
            size = len(comp)
            flat = body.counts()
            pairs = list(combinations_with_replacement(range(size), 2))
            keys = sorted((i, j, k, l) for i, j in pairs for k, l in pairs)
            bits = body.take_fixed(len(keys))
            members.append(comp)
            lengths.append([list(flat[r * size : (r + 1) * size]) for r in range(size)])
            disjoint.append({key: bool(bit) for key, bit in zip(keys, bits)})
        body.done()
        return cls(labels, members, lengths, disjoint)


class RecomputePathTables:
    """Reference twin: extracts each path with networkx on demand."""

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]], vertices: Iterable[int] | None = None):
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(n) if vertices is None else vertices)
        self.graph.add_edges_from(edges)

    def path(self, a: int, b: int) -> List[int]:
        return nx.shortest_path(self.graph, a, b)

    def length(self, a: int, b: int) -> int:
        return len(self.path(a, b))

    def disjoint(self, a: int, b: int, c: int, d: int) -> bool:
        if not nx.has_path(self.graph, a, c):
            return True
        return not set(self.path(a, b)) & set(self.path(c, d))
