"""
Vertex multiway cut: delete at most ``k`` non-terminals so that no two
terminals stay connected.

Witness: ``|X|`` in ``count_width(k)`` bits, then ``k`` vertex ids of
``width(n)`` bits (increasing, unused zero). ``B`` checks ``X`` avoids the
terminals, installs ``X`` in a vertex-failure oracle and queries every
terminal pair.
"""

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Tuple

from core.exceptions import PreconditionError
from core.oracles.instances import MultiwayCutInstance
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
class MultiwayCutState(VerifierState):
    oracle: Optional[FailureOracle] = None
    n: int = 0
    k: int = 0
    terminals: Tuple[int, ...] = field(default_factory=tuple)


class MultiwayCutProtocol(Protocol):
    name = "multiway-cut"
    variant = "multiway-cut"

    def length_formula(self, inst: MultiwayCutInstance) -> int:
        return width(inst.k + 1) + inst.k * width(inst.graph.n)

    def call_budget(self, inst: MultiwayCutInstance) -> int:
        t = len(inst.terminals)
        return 1 + t * (t - 1) // 2

    def preprocess(self, inst: MultiwayCutInstance) -> Preprocessed:
        limit = max(2 * inst.k, 1)
        if len(inst.terminals) > limit:
            raise PreconditionError(
                f"{len(inst.terminals)} terminals exceed 2k={limit}; apply the terminal-reduction "
                f"step (|T'| <= 2k') before this protocol, it is not implemented here"
            )
        graph = inst.graph
        oracle = FailureOracle(graph.n, graph.edges, FailureMode.VERTEX, inst.k)
        length = count_width(inst.k) + inst.k * width(graph.n)
        header = Encoder().count(graph.n).count(inst.k).counts(inst.terminals)
        advice = self.advice(length, header, {"oracle": oracle.to_bytes()})
        return Preprocessed(advice, length, inst.k, graph.n)

    def load(self, advice: bytes) -> MultiwayCutState:
        base, body = self.open_advice(advice)
        n, k, terminals = body.count(), body.count(), body.counts()
        body.done()
        return MultiwayCutState(
            base.length,
            base.rejected,
            oracle=FailureOracle.from_bytes(base.sections["oracle"]),
            n=n,
            k=k,
            terminals=tuple(terminals),
        )

    def run(self, state: MultiwayCutState, reader: BitReader, steps: OpCounter):
        count = reader.read(count_width(state.k))
        require(count <= state.k, "|X| exceeds k")
        chosen = read_increasing(reader, count, state.k, width(state.n), state.n, "vertex")
        log = CheckLog()
        terminals = set(state.terminals)
        steps.step(len(chosen))
        log.expect(not terminals.intersection(chosen), "x-meets-terminals")
        oracle = state.oracle.fresh_copy()
        oracle.update(chosen)
        alive = [t for t in state.terminals if t not in chosen]
        for u, v in combinations(alive, 2):
            log.expect(not oracle.query(u, v), "terminals-connected")
        return log.failed, {"failure_oracle": oracle.counter}

    def encode(self, state: MultiwayCutState, structured) -> Witness:
        chosen = sorted(structured)
        w = BitWriter().write(len(chosen), count_width(state.k))
        for v in chosen + [0] * (state.k - len(chosen)):
            w.write(v, width(state.n))
        return w.to_witness()

    def sample_witness(self, state: MultiwayCutState, rng: random.Random) -> Witness:
        size = rng.randint(0, min(state.k, state.n))
        return self.encode(state, rng.sample(range(state.n), size))
