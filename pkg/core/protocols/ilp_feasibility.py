"""
ILP feasibility in standard form without upper bounds.

``A`` moves to equality form, shrinks the right-hand side with ``reduce_rhs``
and publishes the columns and ``b'``. A witness is a short support with
values: with ``s = min(n', support_bound(m, Δ))`` and
``R = radius_from_bounds(m, Δ, ||b'||∞)``::

    support size   count_width(s)
    indices        s x width(n')     increasing, unused zero
    values         s x count_width(R) positive on the support, unused zero

``B`` accepts when the weighted column sum equals ``b'``.
"""

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from core.ilp.forms import compute_delta, to_equality_form
from core.ilp.program import IntegerProgram, Sense
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
from core.solvers.bounds import radius_from_bounds, support_bound
from core.solvers.lattice import check_lattice_form
from core.solvers.proximity import reduce_rhs
from core.structures.counters import OpCounter
from core.structures.serialization import Decoder, Encoder


class ColumnStore:
    """Sparse columns of the reduced program with a read counter."""

    def __init__(self, columns: Tuple[Tuple[Tuple[int, int], ...], ...]):
        self.columns = columns
        self.counter = OpCounter()

    def column(self, j: int) -> Tuple[Tuple[int, int], ...]:
        self.counter.tick("column")
        self.counter.step(len(self.columns[j]))
        return self.columns[j]

    def fresh_copy(self) -> "ColumnStore":
        return ColumnStore(self.columns)


@dataclass
class IlpState(VerifierState):
    store: Optional[ColumnStore] = None
    rhs: Tuple[int, ...] = field(default_factory=tuple)
    num_vars: int = 0
    support: int = 0
    radius: int = 0


def _reduced(p: IntegerProgram) -> Tuple[IntegerProgram, Optional[str]]:
    """The equality-form program the witness refers to, and an early rejection if any."""
    eq = p if p.sense is Sense.EQ else to_equality_form(p)
    check_lattice_form(eq)
    reduction = reduce_rhs(eq)
    if reduction.ilp_infeasible:
        return eq, "early-reject: LP relaxation is empty"
    return reduction.program, None


def _shape(p: IntegerProgram) -> Tuple[int, int]:
    """
    Support size ``s`` and per-value cap ``R`` of the witness.

    If ``p`` is feasible, some solution uses at most ``support_bound(m, Δ)``
    columns. Restricting ``p`` to those columns keeps ``m`` and ``b`` and can only
    lower ``Δ``, so the restricted program has a solution of ℓ1 norm at most
    ``radius_from_bounds(m, Δ, ||b||∞)``. Every entry of that solution is at most
    its ℓ1 norm, so a value field of ``count_width(R)`` bits holds it.
    """
    stats = compute_delta(p)
    m, delta = max(p.num_constraints, 1), max(stats.delta_A, 1)
    s = min(p.num_vars, support_bound(m, delta))
    r = radius_from_bounds(m, delta, stats.b_inf_norm).l1_cap
    return s, r


class IlpProtocol(Protocol):
    name = "ilp"
    variant = "ilp"

    def parameter(self, p: IntegerProgram) -> int:
        return p.num_constraints

    def length_formula(self, p: IntegerProgram) -> int:
        reduced, _ = _reduced(p)
        s, r = _shape(reduced)
        return width(s + 1) + s * width(reduced.num_vars) + s * width(r + 1)

    def call_budget(self, p: IntegerProgram) -> int:
        reduced, _ = _reduced(p)
        return _shape(reduced)[0]

    def preprocess(self, p: IntegerProgram) -> Preprocessed:
        reduced, rejected = _reduced(p)
        s, r = _shape(reduced)
        length = count_width(s) + s * width(reduced.num_vars) + s * count_width(r)
        self.log.debug(f"m={reduced.num_constraints}, n'={reduced.num_vars}, s={s}, R={r}, ell={length}")
        header = Encoder().count(reduced.num_vars).count(s).integer(r).integers(reduced.rhs)
        columns = Encoder().count(reduced.num_vars)
        for col in reduced.columns():
            columns.counts(row for row, _ in col).integers(coef for _, coef in col)
        advice = self.advice(length, header, {"columns": columns.to_bytes()}, rejected)
        return Preprocessed(advice, length, p.num_constraints, p.num_vars, rejected)

    def load(self, advice: bytes) -> IlpState:
        base, body = self.open_advice(advice)
        num_vars, support, radius, rhs = body.count(), body.count(), body.integer(), body.integers()
        body.done()
        reader = Decoder(base.sections["columns"], "columns")
        columns = []
        for _ in range(reader.count()):
            rows, coefs = reader.counts(), reader.integers()
            columns.append(tuple(zip(rows, coefs)))
        reader.done()
        return IlpState(
            base.length,
            base.rejected,
            store=ColumnStore(tuple(columns)),
            rhs=tuple(rhs),
            num_vars=num_vars,
            support=support,
            radius=radius,
        )

    def run(self, state: IlpState, reader: BitReader, steps: OpCounter):
        s = state.support
        used = reader.read(count_width(s))
        require(used <= s, "support larger than s")
        indices = read_increasing(reader, used, s, width(state.num_vars), state.num_vars, "variable")
        values = reader.read_many(s, count_width(state.radius))
        require(all(v > 0 for v in values[:used]), "support values must be positive")
        require(not any(values[used:]), "unused value slots must be zero")

        store = state.store.fresh_copy()
        activity: Dict[int, int] = {}
        for j, value in zip(indices, values):
            for row, coef in store.column(j):
                activity[row] = activity.get(row, 0) + coef * value
        steps.step(len(state.rhs))
        log = CheckLog()
        log.expect(all(activity.get(i, 0) == b for i, b in enumerate(state.rhs)), "rhs-mismatch")
        return log.failed, {"columns": store.counter}

    def encode(self, state: IlpState, structured) -> Witness:
        """``structured`` maps variable index to a positive value."""
        support = sorted((j, v) for j, v in dict(structured).items() if v)
        s = state.support
        w = BitWriter().write(len(support), count_width(s))
        for j in [j for j, _ in support] + [0] * (s - len(support)):
            w.write(j, width(state.num_vars))
        for v in [v for _, v in support] + [0] * (s - len(support)):
            w.write(v, count_width(state.radius))
        return w.to_witness()

    def sample_witness(self, state: IlpState, rng: random.Random) -> Witness:
        size = rng.randint(0, state.support)
        chosen: List[int] = rng.sample(range(state.num_vars), size)
        return self.encode(state, {j: rng.randint(1, state.radius) for j in chosen})
