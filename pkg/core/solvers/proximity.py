"""
Right-hand-side reduction by LP proximity.

``reduce_rhs`` shifts an equality-form program by an integer vector ``z`` taken
from an exact LP vertex, so that ``x'`` solves the reduced program iff
``x' + z`` solves the original one.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional, Tuple

from core.ilp.forms import compute_delta
from core.ilp.program import IntegerProgram
from core.solvers.bounds import proximity_bound, proximity_radius
from core.solvers.lattice import check_lattice_form
from core.solvers.simplex import LpResult, lp_vertex_relaxation

logger = logging.getLogger(__name__)


@dataclass
class RhsReduction:
    """
    Result of ``reduce_rhs``.

    When the LP relaxation is empty, ``ilp_infeasible`` is set and there is no
    reduced program: the integer program is infeasible as well.
    """

    ilp_infeasible: bool
    program: Optional[IntegerProgram] = None
    shift: Optional[Tuple[int, ...]] = None
    vertex: Optional[Tuple[Fraction, ...]] = None
    slack: int = 0
    b_inf_after: int = 0
    bound: int = 0

    @property
    def within_bound(self) -> bool:
        return self.b_inf_after <= self.bound

    def lift(self, x: Tuple[int, ...]) -> Tuple[int, ...]:
        """Map a solution of the reduced program to one of the original."""
        return tuple(a + b for a, b in zip(x, self.shift))


def reduce_rhs(
    p: IntegerProgram,
    proximity_slack: Optional[int] = None,
    lp: Optional[LpResult] = None,
) -> RhsReduction:
    """
    Replace ``b`` by ``b' = b - A z`` with ``z = max(0, floor(x*) - P)`` for an LP vertex ``x*``.

    ``P`` defaults to the proximity radius ``m·(2·m·Δ + 1)^m``: some integer
    solution lies within that ℓ1 distance of ``x*`` whenever one exists, so the
    shift never removes all solutions. ``proximity_slack=0`` is plain flooring,
    which is smaller but may turn a feasible program infeasible.

    A reduced rhs above ``(m·max(Δ,1))^(m+1)`` is logged as a warning.

    Args:
        p: Equality-form program, integral, bounds ``x >= 0``
        proximity_slack: Override for ``P``
        lp: Precomputed LP relaxation result of ``p``

    Returns:
        RhsReduction
    """
    check_lattice_form(p)
    lp = lp or lp_vertex_relaxation(p)
    if not lp.feasible:
        logger.info("LP relaxation is empty; program is infeasible")
        return RhsReduction(ilp_infeasible=True)

    stats = compute_delta(p)
    m = max(p.num_constraints, 1)
    slack = proximity_radius(m, stats.delta_A) if proximity_slack is None else proximity_slack
    shift = tuple(max(0, floor(v) - slack) for v in lp.vertex)
    activity = p.activity(shift)
    reduced = p.with_rhs(b - a for b, a in zip(p.rhs, activity))

    b_inf_after = compute_delta(reduced).b_inf_norm
    bound = proximity_bound(m, stats.delta_A)
    if b_inf_after > bound:
        logger.warning(
            f"reduced rhs norm {b_inf_after} exceeds (m*max(delta,1))^(m+1) = {bound} "
            f"(m={p.num_constraints}, delta={stats.delta_A}, slack={slack})"
        )
    return RhsReduction(
        ilp_infeasible=False,
        program=reduced,
        shift=shift,
        vertex=lp.vertex,
        slack=slack,
        b_inf_after=b_inf_after,
        bound=bound,
    )
