"""
Long path: is there a simple path on exactly ``ell`` vertices?

``A`` computes a feedback vertex set ``X`` with the local-ratio
2-approximation, path tables for the forest ``G - X`` and the adjacency
matrix of ``G``. A path meets ``X`` at most ``|X|`` times, so it splits into at
most ``S = 2|X| + 1`` items, each a vertex of ``X`` or a tree path of the
forest given by its two ends.

Witness: item count in ``count_width(S)`` bits, then ``S`` slots of
``tag (1 bit) | a (width(n)) | b (width(n))``; tag 1 is the ``X`` vertex ``a``
with ``b = 0``, tag 0 is the tree path from ``a`` to ``b``.
"""

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Tuple

from core.oracles.instances import LongPathInstance
from core.protocols.base import (
    BitReader,
    BitWriter,
    CheckLog,
    Preprocessed,
    Protocol,
    VerifierState,
    Witness,
    count_width,
    require,
    width,
)
from core.structures.counters import OpCounter
from core.structures.path_tables import TreePathTables
from core.structures.serialization import Encoder
from core.utils.graph_utils import local_ratio_fvs

FVS_TAG = 1


class AdjacencyMatrix:
    """``n x n`` bit matrix with a lookup counter."""

    def __init__(self, n: int, bits: bytes):
        self.n = n
        self.bits = bits
        self.counter = OpCounter()

    @classmethod
    def build(cls, n: int, edges) -> "AdjacencyMatrix":
        bits = bytearray((n * n + 7) // 8)
        for u, v in edges:
            for i in (u * n + v, v * n + u):
                bits[i // 8] |= 1 << (i % 8)
        return cls(n, bytes(bits))

    def adjacent(self, u: int, v: int) -> bool:
        self.counter.tick("adjacent")
        i = u * self.n + v
        return bool(self.bits[i // 8] >> (i % 8) & 1)

    def fresh_copy(self) -> "AdjacencyMatrix":
        return AdjacencyMatrix(self.n, self.bits)


@dataclass
class LongPathState(VerifierState):
    tables: Optional[TreePathTables] = None
    adjacency: Optional[AdjacencyMatrix] = None
    n: int = 0
    target: int = 0
    fvs: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def slots(self) -> int:
        return 2 * len(self.fvs) + 1


@dataclass(frozen=True)
class PathItem:
    """An ``X`` vertex (``is_fvs``, ``a``) or the tree path from ``a`` to ``b``."""

    is_fvs: bool
    a: int
    b: int = 0

    @classmethod
    def vertex(cls, v: int) -> "PathItem":
        return cls(True, v, 0)

    @classmethod
    def subpath(cls, a: int, b: int) -> "PathItem":
        return cls(False, a, b)

    @property
    def start(self) -> int:
        return self.a

    @property
    def end(self) -> int:
        return self.a if self.is_fvs else self.b


class LongPathProtocol(Protocol):
    name = "long-path"
    variant = "long-path"

    def parameter(self, inst: LongPathInstance) -> int:
        return len(local_ratio_fvs(inst.graph.to_networkx()))

    def length_formula(self, inst: LongPathInstance) -> int:
        s = 2 * self.parameter(inst) + 1
        return width(s + 1) + s * (1 + 2 * width(inst.graph.n))

    def call_budget(self, inst: LongPathInstance) -> int:
        s = 2 * self.parameter(inst) + 1
        return s + s * (s - 1) // 2 + (s - 1)

    def preprocess(self, inst: LongPathInstance) -> Preprocessed:
        graph = inst.graph
        fvs = local_ratio_fvs(graph.to_networkx())
        removed = set(fvs)
        forest_edges = [(u, v) for u, v in graph.edges if u not in removed and v not in removed]
        tables = TreePathTables.build(graph.n, forest_edges, [v for v in range(graph.n) if v not in removed])
        matrix = AdjacencyMatrix.build(graph.n, graph.edges)
        s = 2 * len(fvs) + 1
        length = count_width(s) + s * (1 + 2 * width(graph.n))
        self.log.debug(f"n={graph.n}, |X|={len(fvs)}, ell={length}")
        header = Encoder().count(graph.n).count(inst.length).counts(fvs)
        advice = self.advice(length, header, {"tables": tables.to_bytes(), "adjacency": matrix.bits})
        return Preprocessed(advice, length, len(fvs), graph.n)

    def load(self, advice: bytes) -> LongPathState:
        base, body = self.open_advice(advice)
        n, target, fvs = body.count(), body.count(), body.counts()
        body.done()
        return LongPathState(
            base.length,
            base.rejected,
            tables=TreePathTables.from_bytes(base.sections["tables"]),
            adjacency=AdjacencyMatrix(n, base.sections["adjacency"]),
            n=n,
            target=target,
            fvs=tuple(fvs),
        )

    def _decode(self, state: LongPathState, reader: BitReader) -> List[PathItem]:
        s = state.slots
        count = reader.read(count_width(s))
        require(count <= s, "more items than slots")
        fvs = set(state.fvs)
        items: List[PathItem] = []
        for slot in range(s):
            tag = reader.read(1)
            a = reader.read(width(state.n))
            b = reader.read(width(state.n))
            if slot >= count:
                require(tag == 0 and a == 0 and b == 0, "unused item slots must be zero")
                continue
            require(a < state.n and b < state.n, "vertex index out of range")
            if tag == FVS_TAG:
                require(a in fvs, f"vertex {a} is not in the feedback vertex set")
                require(b == 0, "second field of a vertex item must be zero")
                items.append(PathItem.vertex(a))
            else:
                la, lb = state.tables.label(a), state.tables.label(b)
                require(la != -1 and lb != -1, "subpath end lies in the feedback vertex set")
                require(la == lb, "subpath ends lie in different trees")
                items.append(PathItem.subpath(a, b))
        return items

    def run(self, state: LongPathState, reader: BitReader, steps: OpCounter):
        items = self._decode(state, reader)
        tables = state.tables.fresh_copy()
        matrix = state.adjacency.fresh_copy()
        log = CheckLog()

        total = 0
        for item in items:
            total += 1 if item.is_fvs else tables.length(item.a, item.b)
        steps.step(len(items))
        log.expect(total == state.target, "i-wrong-length")

        for prev, nxt in zip(items, items[1:]):
            log.expect(matrix.adjacent(prev.end, nxt.start), "ii-items-not-adjacent")

        vertices = [item.a for item in items if item.is_fvs]
        steps.step(len(vertices))
        log.expect(len(set(vertices)) == len(vertices), "iii-repeated-vertex")
        subpaths = [item for item in items if not item.is_fvs]
        for p, q in combinations(subpaths, 2):
            log.expect(tables.disjoint(p.a, p.b, q.a, q.b), "iii-subpaths-intersect")
        return log.failed, {"path_tables": tables.counter, "adjacency": matrix.counter}

    def encode(self, state: LongPathState, structured) -> Witness:
        items = list(structured)
        s = state.slots
        w = BitWriter().write(len(items), count_width(s))
        for item in items:
            w.write(FVS_TAG if item.is_fvs else 0, 1).write(item.a, width(state.n)).write(item.b, width(state.n))
        for _ in range(s - len(items)):
            w.write(0, 1 + 2 * width(state.n))
        return w.to_witness()

    def sample_witness(self, state: LongPathState, rng: random.Random) -> Witness:
        forest = [v for v in range(state.n) if state.tables.label(v) != -1]
        items = []
        for _ in range(state.slots):
            if state.fvs and (not forest or rng.random() < 0.5):
                items.append(PathItem.vertex(rng.choice(state.fvs)))
            elif forest:
                a = rng.choice(forest)
                same = [v for v in forest if state.tables.label(v) == state.tables.label(a)]
                items.append(PathItem.subpath(a, rng.choice(same)))
        return self.encode(state, items)
