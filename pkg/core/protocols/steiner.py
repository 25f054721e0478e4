"""
Steiner tree: is there a tree with at most ``ell`` edges spanning the terminals?

``A`` stores all pairwise BFS distances. With ``k = |T|`` the witness is a set
``Y`` of at most ``k - 1`` non-terminals and a tree ``F`` on ``L = T ++ Y``
given as one parent index per node ``L[1:]``::

    |Y|        count_width(k - 1)
    Y          (k - 1) x width(n)       increasing, unused zero
    parents    (2k - 2) x width(2k - 1) one per node of L[1:], unused zero

``B`` accepts when ``F`` is a tree and the distances along its edges sum to at
most ``ell``.
"""

import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from core.oracles.instances import SteinerInstance
from core.protocols.base import (
    BitReader,
    BitWriter,
    CheckLog,
    Preprocessed,
    Protocol,
    VerifierState,
    Witness,
    count_width,
    read_increasing,
    require,
    width,
)
from core.structures.counters import OpCounter
from core.structures.serialization import Decoder, Encoder
from core.utils.graph_utils import bfs_distances


class DistanceTable:
    """All-pairs distances; ``None`` for unreachable pairs."""

    def __init__(self, n: int, flat: Tuple[int, ...]):
        self.n = n
        self._flat = flat
        self.counter = OpCounter()

    @classmethod
    def build(cls, n: int, adjacency) -> "DistanceTable":
        flat = []
        for source in range(n):
            flat.extend(0 if d is None else d + 1 for d in bfs_distances(adjacency, source))
        return cls(n, tuple(flat))

    def distance(self, u: int, v: int) -> Optional[int]:
        self.counter.tick("distance")
        stored = self._flat[u * self.n + v]
        return stored - 1 if stored else None

    def fresh_copy(self) -> "DistanceTable":
        return DistanceTable(self.n, self._flat)

    def to_bytes(self) -> bytes:
        return Encoder().counts(self._flat).to_bytes()

    @classmethod
    def from_bytes(cls, n: int, data: bytes) -> "DistanceTable":
        body = Decoder(data, "distances")
        flat = tuple(body.counts())
        body.done()
        return cls(n, flat)


@dataclass
class SteinerState(VerifierState):
    distances: Optional[DistanceTable] = None
    n: int = 0
    budget: int = 0
    terminals: Tuple[int, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class SteinerWitness:
    steiner_vertices: Tuple[int, ...]
    parents: Tuple[int, ...]


def _find(parent: List[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


class SteinerProtocol(Protocol):
    name = "steiner"
    variant = "steiner"

    def length_formula(self, inst: SteinerInstance) -> int:
        k = len(inst.terminals)
        return width(k) + (k - 1) * width(inst.graph.n) + (2 * k - 2) * width(2 * k - 1)

    def call_budget(self, inst: SteinerInstance) -> int:
        return 2 * len(inst.terminals) - 2

    def _layout_length(self, n: int, k: int) -> int:
        return count_width(k - 1) + (k - 1) * width(n) + (2 * k - 2) * width(2 * k - 1)

    def preprocess(self, inst: SteinerInstance) -> Preprocessed:
        graph = inst.graph
        table = DistanceTable.build(graph.n, graph.adjacency)
        k = len(inst.terminals)
        length = self._layout_length(graph.n, k)
        header = Encoder().count(graph.n).count(inst.budget).counts(inst.terminals)
        advice = self.advice(length, header, {"distances": table.to_bytes()})
        return Preprocessed(advice, length, k, graph.n)

    def load(self, advice: bytes) -> SteinerState:
        base, body = self.open_advice(advice)
        n, budget, terminals = body.count(), body.count(), body.counts()
        body.done()
        table = DistanceTable.from_bytes(n, base.sections["distances"])
        return SteinerState(
            base.length, base.rejected, distances=table, n=n, budget=budget, terminals=tuple(terminals)
        )

    def run(self, state: SteinerState, reader: BitReader, steps: OpCounter):
        k = len(state.terminals)
        count = reader.read(count_width(k - 1))
        require(count <= k - 1, "|Y| exceeds k - 1")
        extra = read_increasing(reader, count, k - 1, width(state.n), state.n, "steiner vertex")
        nodes = list(state.terminals) + extra
        size = len(nodes)
        parents = reader.read_many(2 * k - 2, width(2 * k - 1))
        used = parents[: size - 1]
        require(all(p < size for p in used), "parent index out of range")
        require(not any(parents[size - 1 :]), "unused parent slots must be zero")

        log = CheckLog()
        terminals = set(state.terminals)
        steps.step(len(extra))
        log.expect(not terminals.intersection(extra), "y-meets-terminals")

        union = list(range(size))
        for child, p in enumerate(used, start=1):
            steps.step()
            a, b = _find(union, child), _find(union, p)
            if log.expect(a != b, "f-not-a-tree"):
                union[a] = b

        distances = state.distances.fresh_copy()
        total = 0
        reachable = True
        for child, p in enumerate(used, start=1):
            d = distances.distance(nodes[child], nodes[p])
            if d is None:
                reachable = False
            else:
                total += d
        log.expect(reachable, "unreachable-pair")
        log.expect(total <= state.budget, "over-budget")
        return log.failed, {"distances": distances.counter}

    def encode(self, state: SteinerState, structured: SteinerWitness) -> Witness:
        k = len(state.terminals)
        extra = sorted(structured.steiner_vertices)
        w = BitWriter().write(len(extra), count_width(k - 1))
        for v in extra + [0] * (k - 1 - len(extra)):
            w.write(v, width(state.n))
        parents = list(structured.parents)
        for p in parents + [0] * (2 * k - 2 - len(parents)):
            w.write(p, width(2 * k - 1))
        return w.to_witness()

    def sample_witness(self, state: SteinerState, rng: random.Random) -> Witness:
        k = len(state.terminals)
        others = [v for v in range(state.n) if v not in set(state.terminals)]
        extra = rng.sample(others, rng.randint(0, min(k - 1, len(others))))
        size = k + len(extra)
        # Random recursive tree on L: node i hangs below an earlier node.
        parents = tuple(rng.randrange(i) for i in range(1, size))
        return self.encode(state, SteinerWitness(tuple(extra), parents))
