"""
Optimal discretization: separate every point of ``W1`` from every point of
``W2`` with at most ``k`` axis-parallel lines.

Lines are taken from the midpoint pools ``h_X`` and ``h_Y``. Witness:
``|X|`` and ``|Y|`` in ``count_width(k)`` bits each, then ``k`` slots of
``width(max(|h_X|, |h_Y|))`` bits holding the pool positions of ``X`` followed
by those of ``Y``, each list strictly increasing. ``B`` looks up every box
between consecutive lines of ``X + {-inf, +inf}`` and ``Y + {-inf, +inf}`` in
the bad-tuple index and accepts when none is bad.
"""

import random
from dataclasses import dataclass
from typing import Optional, Tuple

from core.oracles.instances import DiscretizationInstance
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
from core.structures.bad_tuples import BadTupleIndex, midpoints
from core.structures.counters import OpCounter
from core.structures.serialization import Encoder


@dataclass
class DiscretizationState(VerifierState):
    index: Optional[BadTupleIndex] = None
    k: int = 0

    @property
    def pool_width(self) -> int:
        return width(max(len(self.index.pool_x), len(self.index.pool_y)))


@dataclass(frozen=True)
class Separation:
    """Pool positions (0-based) of the vertical and horizontal lines."""

    xs: Tuple[int, ...]
    ys: Tuple[int, ...]


def _pool_sizes(inst: DiscretizationInstance) -> Tuple[int, int]:
    points = inst.first + inst.second
    return len(midpoints(p[0] for p in points)), len(midpoints(p[1] for p in points))


class DiscretizationProtocol(Protocol):
    name = "discretization"
    variant = "discretization"

    def length_formula(self, inst: DiscretizationInstance) -> int:
        px, py = _pool_sizes(inst)
        return 2 * width(inst.k + 1) + inst.k * width(max(px, py))

    def call_budget(self, inst: DiscretizationInstance) -> int:
        # (a + 1)(b + 1) lookups with a + b <= k peaks at the most even split.
        half = inst.k // 2
        return (half + 1) * (inst.k - half + 1)

    def preprocess(self, inst: DiscretizationInstance) -> Preprocessed:
        index = BadTupleIndex.build(inst.first, inst.second)
        pool = max(len(index.pool_x), len(index.pool_y))
        length = 2 * count_width(inst.k) + inst.k * width(pool)
        header = Encoder().count(inst.k)
        advice = self.advice(length, header, {"index": index.to_bytes()})
        return Preprocessed(advice, length, inst.k, len(inst.first) + len(inst.second))

    def load(self, advice: bytes) -> DiscretizationState:
        base, body = self.open_advice(advice)
        k = body.count()
        body.done()
        index = BadTupleIndex.from_bytes(base.sections["index"])
        return DiscretizationState(base.length, base.rejected, index=index, k=k)

    def run(self, state: DiscretizationState, reader: BitReader, steps: OpCounter):
        k = state.k
        a = reader.read(count_width(k))
        b = reader.read(count_width(k))
        require(a + b <= k, "|X| + |Y| exceeds k")
        bits = state.pool_width
        slots = reader.read_many(k, bits)
        xs, ys = slots[:a], slots[a : a + b]
        index = state.index.fresh_copy()
        for chosen, pool, what in ((xs, index.pool_x, "x"), (ys, index.pool_y, "y")):
            require(all(v < len(pool) for v in chosen), f"{what} pool index out of range")
            require(all(p < q for p, q in zip(chosen, chosen[1:])), f"{what} lines not strictly increasing")
        require(not any(slots[a + b :]), "unused line slots must be zero")

        x_bounds = [0] + [v + 1 for v in xs] + [len(index.pool_x) + 1]
        y_bounds = [0] + [v + 1 for v in ys] + [len(index.pool_y) + 1]
        log = CheckLog()
        for x1, x2 in zip(x_bounds, x_bounds[1:]):
            for y1, y2 in zip(y_bounds, y_bounds[1:]):
                log.expect(not index.lookup_positions((x1, x2, y1, y2)), "bad-box")
        return log.failed, {"bad_tuples": index.counter}

    def encode(self, state: DiscretizationState, structured: Separation) -> Witness:
        k = state.k
        xs, ys = sorted(structured.xs), sorted(structured.ys)
        w = BitWriter().write(len(xs), count_width(k)).write(len(ys), count_width(k))
        for v in xs + ys + [0] * (k - len(xs) - len(ys)):
            w.write(v, state.pool_width)
        return w.to_witness()

    def sample_witness(self, state: DiscretizationState, rng: random.Random) -> Witness:
        px, py = len(state.index.pool_x), len(state.index.pool_y)
        a = rng.randint(0, min(state.k, px))
        b = rng.randint(0, min(state.k - a, py))
        return self.encode(state, Separation(tuple(rng.sample(range(px), a)), tuple(rng.sample(range(py), b))))
