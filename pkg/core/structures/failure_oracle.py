"""
One-shot failure connectivity oracle.

After a single ``update`` with a failure set ``D`` (at most ``d_max`` vertices,
or edges in edge mode), ``query(u, v)`` answers whether ``u`` and ``v`` are
connected in ``G - D``. Edge mode runs vertex mode on the subdivided graph,
where edge ``i`` becomes the vertex ``n + i``.

Preprocessing stores component labels of the (subdivided) graph. An update
relabels only the components that contain a failed element, so query work is
a couple of label comparisons.
"""

import logging
from collections import deque
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from core.exceptions import StructureUsageError
from core.structures.counters import OpCounter
from core.structures.serialization import Decoder, Encoder, pack_sections, unpack_sections
from core.utils.graph_utils import component_labels

logger = logging.getLogger(__name__)

BLOB_KIND = "failure-oracle"


class FailureMode(str, Enum):
    EDGE = "edge"
    VERTEX = "vertex"


class OracleState(str, Enum):
    FRESH = "Fresh"
    UPDATED = "Updated"


def subdivide(n: int, edges: Sequence[Tuple[int, int]]) -> Tuple[int, List[List[int]]]:
    """
    Subdivide every edge once.

    Returns:
        (vertex count ``n + |E|``, adjacency lists) where edge ``i`` is vertex ``n + i``
    """
    adjacency: List[List[int]] = [[] for _ in range(n + len(edges))]
    for i, (u, v) in enumerate(edges):
        mid = n + i
        adjacency[u].append(mid)
        adjacency[v].append(mid)
        adjacency[mid].extend((u, v))
    return n + len(edges), [sorted(nb) for nb in adjacency]


class FailureOracle:
    """
    Connectivity under at most ``d_max`` failures, installed once.

    Args:
        n: Number of vertices of the base graph
        edges: Edge list of the base graph; edge ids are positions in this list
        mode: Whether failures are edges or vertices
        d_max: Maximum size of the failure set
    """

    def __init__(self, n: int, edges: Sequence[Tuple[int, int]], mode: FailureMode, d_max: int):
        self.n = n
        self.edges = tuple((min(u, v), max(u, v)) for u, v in edges)
        self.mode = FailureMode(mode)
        self.d_max = d_max
        self.counter = OpCounter()
        if self.mode is FailureMode.EDGE:
            self._size, self._adjacency = subdivide(n, self.edges)
        else:
            self._size = n
            self._adjacency = [[] for _ in range(n)]
            for u, v in self.edges:
                self._adjacency[u].append(v)
                self._adjacency[v].append(u)
            self._adjacency = [sorted(nb) for nb in self._adjacency]
        self.labels = tuple(component_labels(self._size, self._adjacency))
        self._reset_state()

    def _reset_state(self) -> None:
        self.state = OracleState.FRESH
        self.failed: Tuple[int, ...] = ()
        self._failed_nodes: frozenset = frozenset()
        self._dirty: frozenset = frozenset()
        self._relabel: Dict[int, int] = {}

    @property
    def component_count(self) -> int:
        return len(set(self.labels[: self.n])) if self.n else 0

    def label(self, v: int) -> int:
        """Component label of ``v`` in the base graph."""
        return self.labels[v]

    def update(self, failures: Iterable[int]) -> None:
        """
        Install the failure set.

        Args:
            failures: Vertex ids (vertex mode) or edge ids (edge mode)

        Raises:
            StructureUsageError: Second update, capacity exceeded, or unknown element
        """
        self.counter.tick("update")
        if self.state is not OracleState.FRESH:
            raise StructureUsageError("failure oracle accepts a single update")
        failures = tuple(sorted(set(failures)))
        if len(failures) > self.d_max:
            raise StructureUsageError(f"{len(failures)} failures exceed capacity d_max={self.d_max}")
        limit = len(self.edges) if self.mode is FailureMode.EDGE else self.n
        for x in failures:
            if not 0 <= x < limit:
                raise StructureUsageError(f"unknown {self.mode.value} {x} in failure set")
        nodes = frozenset(x + self.n for x in failures) if self.mode is FailureMode.EDGE else frozenset(failures)

        dirty = frozenset(self.labels[x] for x in nodes)
        relabel: Dict[int, int] = {}
        next_label = 0
        for start in range(self._size):
            if start in nodes or start in relabel or self.labels[start] not in dirty:
                continue
            relabel[start] = next_label
            queue = deque([start])
            while queue:
                u = queue.popleft()
                self.counter.step()
                for v in self._adjacency[u]:
                    if v not in nodes and v not in relabel:
                        relabel[v] = next_label
                        queue.append(v)
            next_label += 1

        self.state = OracleState.UPDATED
        self.failed = failures
        self._failed_nodes = nodes
        self._dirty = dirty
        self._relabel = relabel
        logger.debug(f"oracle update: |D|={len(failures)}, dirty components={len(dirty)}")

    def query(self, u: int, v: int) -> bool:
        """
        True when ``u`` and ``v`` are connected in ``G - D``.

        Raises:
            StructureUsageError: Before the update, or on a failed vertex in vertex mode
        """
        self.counter.tick("query")
        if self.state is not OracleState.UPDATED:
            raise StructureUsageError("query before update")
        for x in (u, v):
            if not 0 <= x < self.n:
                raise StructureUsageError(f"unknown vertex {x}")
            if x in self._failed_nodes:
                raise StructureUsageError(f"vertex {x} is in the failure set")
        self.counter.step()
        if u == v:
            return True
        if self.labels[u] != self.labels[v]:
            return False
        if self.labels[u] not in self._dirty:
            return True
        return self._relabel[u] == self._relabel[v]

    def fresh_copy(self) -> "FailureOracle":
        """A Fresh oracle sharing this one's preprocessing, with zeroed counters."""
        clone = object.__new__(FailureOracle)
        clone.n = self.n
        clone.edges = self.edges
        clone.mode = self.mode
        clone.d_max = self.d_max
        clone.counter = OpCounter()
        clone._size = self._size
        clone._adjacency = self._adjacency
        clone.labels = self.labels
        clone._reset_state()
        return clone

    def to_bytes(self) -> bytes:
        body = Encoder().text(self.mode.value).count(self.d_max).count(self.n)
        body.counts(x for e in self.edges for x in e)
        labels = Encoder().counts(self.labels)
        return pack_sections(BLOB_KIND, {"graph": body.to_bytes(), "labels": labels.to_bytes()})

    @classmethod
    def from_bytes(cls, data: bytes) -> "FailureOracle":
        sections = unpack_sections(data, BLOB_KIND)
        body = Decoder(sections["graph"], "failure-oracle graph")
        mode = FailureMode(body.text())
        d_max = body.count()
        n = body.count()
        flat = body.counts()
        body.done()
        edges = list(zip(flat[0::2], flat[1::2]))
        oracle = cls(n, edges, mode, d_max)
        labels = Decoder(sections["labels"], "failure-oracle labels")
        stored = labels.counts()
        labels.done()
        if tuple(stored) != oracle.labels:
            raise StructureUsageError("stored component labels disagree with the stored graph")
        return oracle


class RecomputeOracle:
    """Reference twin: rebuilds ``G - D`` with networkx and asks ``has_path``."""

    def __init__(self, n: int, edges: Sequence[Tuple[int, int]], mode: FailureMode, d_max: int):
        self.n = n
        self.edges = tuple(edges)
        self.mode = FailureMode(mode)
        self.d_max = d_max
        self._graph: Optional[nx.Graph] = None
        self._failed: frozenset = frozenset()

    def update(self, failures: Iterable[int]) -> None:
        if self._graph is not None:
            raise StructureUsageError("failure oracle accepts a single update")
        failures = frozenset(failures)
        if len(failures) > self.d_max:
            raise StructureUsageError(f"{len(failures)} failures exceed capacity d_max={self.d_max}")
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        if self.mode is FailureMode.EDGE:
            g.add_edges_from(e for i, e in enumerate(self.edges) if i not in failures)
        else:
            g.add_edges_from(self.edges)
            g.remove_nodes_from(failures)
            self._failed = failures
        self._graph = g

    def query(self, u: int, v: int) -> bool:
        if self._graph is None:
            raise StructureUsageError("query before update")
        if u in self._failed or v in self._failed:
            raise StructureUsageError("query on a failed vertex")
        return nx.has_path(self._graph, u, v)
