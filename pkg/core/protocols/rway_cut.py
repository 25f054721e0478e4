"""
r-way cut: remove at most ``k`` edges so that at least ``r`` components remain.

Witness layout (``n`` vertices, ``|E|`` edges, ``c`` base components)::

    |X|            count_width(k)
    X              k x width(|E|)     edge ids, increasing, unused zero
    t              count_width(k)
    group sizes    k x count_width(2k)
    vertices       2k x width(n)      groups back to back, increasing per group

``B`` checks (i) each group lies in one base component, (ii) different groups
lie in different components, (iii) after failing ``X`` the vertices of each
group are pairwise disconnected and (iv) ``sum(|V_i| - 1) = max(0, r - c)``.
"""

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from core.oracles.instances import RWayCutInstance
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
from core.structures.failure_oracle import FailureMode, FailureOracle
from core.structures.serialization import Encoder


@dataclass
class RWayCutState(VerifierState):
    oracle: Optional[FailureOracle] = None
    n: int = 0
    edge_count: int = 0
    k: int = 0
    target: int = 0


@dataclass(frozen=True)
class RWayCutWitness:
    edges: Tuple[int, ...]
    groups: Tuple[Tuple[int, ...], ...]


class RWayCutProtocol(Protocol):
    name = "rway-cut"
    variant = "rway-cut"

    def _layout_length(self, n: int, edge_count: int, k: int) -> int:
        return (
            count_width(k)
            + k * width(edge_count)
            + count_width(k)
            + k * count_width(2 * k)
            + 2 * k * width(n)
        )

    def length_formula(self, inst: RWayCutInstance) -> int:
        n, m, k = inst.graph.n, len(inst.graph.edges), inst.k
        return (
            2 * width(k + 1) + k * width(m) + k * width(2 * k + 1) + 2 * k * width(n)
        )

    def call_budget(self, inst: RWayCutInstance) -> int:
        return 1 + (2 * inst.k) * (2 * inst.k - 1) // 2

    def preprocess(self, inst: RWayCutInstance) -> Preprocessed:
        graph = inst.graph
        oracle = FailureOracle(graph.n, graph.edges, FailureMode.EDGE, inst.k)
        components = oracle.component_count
        length = self._layout_length(graph.n, len(graph.edges), inst.k)
        rejected = None
        if components + inst.k < inst.r:
            rejected = "early-reject: base components + k < r"
            self.log.info(f"{components} components + k={inst.k} < r={inst.r}")
        header = Encoder().count(graph.n).count(len(graph.edges)).count(inst.k)
        header.count(max(0, inst.r - components))
        advice = self.advice(length, header, {"oracle": oracle.to_bytes()}, rejected)
        return Preprocessed(advice, length, inst.k, graph.n, rejected)

    def load(self, advice: bytes) -> RWayCutState:
        base, body = self.open_advice(advice)
        n, edge_count, k, target = body.count(), body.count(), body.count(), body.count()
        body.done()
        return RWayCutState(
            base.length,
            base.rejected,
            oracle=FailureOracle.from_bytes(base.sections["oracle"]),
            n=n,
            edge_count=edge_count,
            k=k,
            target=target,
        )

    def _decode(self, state: RWayCutState, reader: BitReader) -> RWayCutWitness:
        k = state.k
        x_count = reader.read(count_width(k))
        require(x_count <= k, "|X| exceeds k")
        edges = read_increasing(reader, x_count, k, width(state.edge_count), state.edge_count, "edge")
        t = reader.read(count_width(k))
        require(t <= k, "t exceeds k")
        sizes = reader.read_many(k, count_width(2 * k))
        require(all(s >= 1 for s in sizes[:t]), "empty group")
        require(not any(sizes[t:]), "unused group sizes must be zero")
        total = sum(sizes[:t])
        require(total <= 2 * k, "more than 2k group vertices")
        vertices = reader.read_many(2 * k, width(state.n))
        require(not any(vertices[total:]), "unused vertex slots must be zero")
        require(all(v < state.n for v in vertices[:total]), "vertex index out of range")
        require(len(set(vertices[:total])) == total, "group vertices are not distinct")
        groups: List[Tuple[int, ...]] = []
        start = 0
        for s in sizes[:t]:
            group = tuple(vertices[start : start + s])
            require(all(a < b for a, b in zip(group, group[1:])), "group not increasing")
            groups.append(group)
            start += s
        return RWayCutWitness(tuple(edges), tuple(groups))

    def run(self, state: RWayCutState, reader: BitReader, steps: OpCounter):
        witness = self._decode(state, reader)
        oracle = state.oracle.fresh_copy()
        log = CheckLog()
        labels = []
        for group in witness.groups:
            group_labels = {oracle.label(v) for v in group}
            steps.step(len(group))
            log.expect(len(group_labels) == 1, "i-group-spans-components")
            labels.append(oracle.label(group[0]))
        steps.step(len(labels))
        log.expect(len(set(labels)) == len(labels), "ii-groups-share-component")
        oracle.update(witness.edges)
        for group in witness.groups:
            for u, v in combinations(group, 2):
                log.expect(not oracle.query(u, v), "iii-group-connected")
        steps.step(len(witness.groups))
        log.expect(sum(len(g) - 1 for g in witness.groups) == state.target, "iv-wrong-split-count")
        return log.failed, {"failure_oracle": oracle.counter}

    def encode(self, state: RWayCutState, structured: RWayCutWitness) -> Witness:
        k = state.k
        edges = sorted(structured.edges)
        groups = [sorted(g) for g in structured.groups]
        sizes = [len(g) for g in groups]
        flat = [v for g in groups for v in g]
        w = BitWriter().write(len(edges), count_width(k))
        for e in edges + [0] * (k - len(edges)):
            w.write(e, width(state.edge_count))
        w.write(len(groups), count_width(k))
        for s in sizes + [0] * (k - len(sizes)):
            w.write(s, count_width(2 * k))
        for v in flat + [0] * (2 * k - len(flat)):
            w.write(v, width(state.n))
        return w.to_witness()

    def sample_witness(self, state: RWayCutState, rng: random.Random) -> Witness:
        k = state.k
        edges = rng.sample(range(state.edge_count), min(k, state.edge_count, rng.randint(0, k)))
        pool = list(range(state.n))
        rng.shuffle(pool)
        total = min(2 * k, state.n)
        groups: List[Sequence[int]] = []
        # Favour few large groups so the query count reaches its maximum.
        while total and len(groups) < k and pool:
            size = rng.randint(1, total)
            groups.append(pool[:size])
            pool = pool[size:]
            total -= size
        return self.encode(state, RWayCutWitness(tuple(edges), tuple(tuple(g) for g in groups)))
