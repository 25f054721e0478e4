"""
Breadth-first reachability solver for ``Ax = b, x >= 0`` integral.

Residuals ``r = b - A x`` are explored from ``b`` towards ``0`` by subtracting
one column at a time. Each residual is kept at the first depth BFS reaches it,
so a returned certificate has the smallest ℓ1 norm of all solutions.

Besides the ℓ1 cap and the ∞-norm cap, residuals must stay within ∞-distance
``2·m·Δ`` of the segment from ``0`` to ``b``. Any solution can have its columns
ordered so that every intermediate residual satisfies this (Steinitz lemma
applied to ``a_i - b/t``), so the restriction never loses a solution.
"""

import logging
from collections import Counter, deque
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from core.exceptions import PreconditionError
from core.ilp.forms import compute_delta
from core.ilp.program import IntegerProgram, Sense
from core.solvers.bounds import radius_from_bounds
from core.solvers.results import RadiusSource, SearchRadius, SolveResult, SolveStatus
from core.utils.budget import Deadline
from core.utils.config import setting
from core.utils.logging_utils import log_execution_time

logger = logging.getLogger(__name__)

Residual = Tuple[int, ...]


def check_lattice_form(p: IntegerProgram) -> None:
    """Raise PreconditionError unless ``p`` is equality form without upper bounds."""
    if p.sense is not Sense.EQ:
        raise PreconditionError("lattice_feasibility needs an equality-form program (sense 'eq')")
    if p.has_upper_bounds:
        cols = [j for j, u in enumerate(p.upper) if u is not None]
        raise PreconditionError(f"lattice_feasibility rejects finite upper bounds (cols {cols})")
    if not p.is_standard_without_upper_bounds:
        raise PreconditionError("lattice_feasibility needs integral variables with lower bound 0")


def default_radius(p: IntegerProgram) -> SearchRadius:
    stats = compute_delta(p)
    return radius_from_bounds(max(p.num_constraints, 1), max(stats.delta_A, 1), stats.b_inf_norm)


def near_segment(r: Sequence[int], b: Sequence[int], distance: int) -> bool:
    """True when some point ``s·b`` with ``0 <= s <= 1`` is within ∞-distance of ``r``."""
    lo, hi = Fraction(0), Fraction(1)
    for ri, bi in zip(r, b):
        if bi == 0:
            if abs(ri) > distance:
                return False
            continue
        a, c = Fraction(ri - distance, bi), Fraction(ri + distance, bi)
        if bi < 0:
            a, c = c, a
        lo, hi = max(lo, a), min(hi, c)
        if lo > hi:
            return False
    return True


@log_execution_time()
def lattice_feasibility(
    p: IntegerProgram,
    l1_cap: Optional[int] = None,
    node_cap: Optional[int] = None,
    deadline: Optional[Deadline] = None,
) -> SolveResult:
    """
    Decide feasibility of an equality-form program by residual BFS.

    Args:
        p: Equality-form program, integral, lower bounds 0, no upper bounds
        l1_cap: Cap on the ℓ1 norm of solutions searched; defaults to the norm bound
        node_cap: Cap on stored residuals (default: COMPACT_ILP_LATTICE_NODE_CAP)
        deadline: Optional wall-clock budget

    Returns:
        SolveResult: Feasible with a minimum-ℓ1 certificate; Infeasible when the
        search at the norm-bound cap found nothing; BoundExhausted when a lowered
        cap or the node cap stopped the search
    """
    check_lattice_form(p)
    if node_cap is None:
        node_cap = int(setting("COMPACT_ILP_LATTICE_NODE_CAP", 2_000_000))
    deadline = deadline or Deadline.from_settings("lattice search")

    proven = default_radius(p)
    radius = proven if l1_cap is None else SearchRadius(l1_cap, RadiusSource.USER_OVERRIDE)
    capped_below = radius.l1_cap < proven.l1_cap

    stats = compute_delta(p)
    m = p.num_constraints
    delta = max(stats.delta_A, 1)
    b = tuple(p.rhs)
    inf_cap = delta * radius.l1_cap + stats.b_inf_norm
    tube = 2 * max(m, 1) * delta

    columns = []
    for j in range(p.num_vars):
        vector = p.column_vector(j)
        if any(vector):
            columns.append((j, vector))

    zero: Residual = (0,) * m
    parents: Dict[Residual, Optional[Tuple[Residual, int]]] = {b: None}
    depth: Dict[Residual, int] = {b: 0}
    queue = deque([b])
    max_norm = stats.b_inf_norm
    hit_node_cap = False

    found = b == zero
    while queue and not found:
        deadline.check()
        r = queue.popleft()
        d = depth[r]
        if d >= radius.l1_cap:
            continue
        for j, vector in columns:
            nxt = tuple(ri - ai for ri, ai in zip(r, vector))
            if nxt in parents:
                continue
            norm = max((abs(v) for v in nxt), default=0)
            if norm > inf_cap or not near_segment(nxt, b, tube):
                continue
            if len(parents) >= node_cap:
                hit_node_cap = True
                break
            parents[nxt] = (r, j)
            depth[nxt] = d + 1
            max_norm = max(max_norm, norm)
            if nxt == zero:
                found = True
                break
            queue.append(nxt)
        if hit_node_cap:
            break

    run_stats = {
        "nodes": len(parents),
        "max_residual_norm": max_norm,
        "l1_cap": radius.l1_cap,
        "radius_source": radius.source.value,
    }
    if found:
        counts: Counter = Counter()
        cursor = zero
        while parents[cursor] is not None:
            cursor, j = parents[cursor]
            counts[j] += 1
        certificate = tuple(counts.get(j, 0) for j in range(p.num_vars))
        assert p.is_satisfied_by(certificate), "lattice certificate failed re-substitution"
        return SolveResult(SolveStatus.FEASIBLE, "lattice", certificate, run_stats)
    if hit_node_cap:
        logger.warning(f"lattice search stopped at node cap {node_cap}")
        run_stats["node_cap"] = node_cap
        return SolveResult(SolveStatus.BOUND_EXHAUSTED, "lattice", None, run_stats)
    if capped_below:
        return SolveResult(SolveStatus.BOUND_EXHAUSTED, "lattice", None, run_stats)
    return SolveResult(SolveStatus.INFEASIBLE, "lattice", None, run_stats)
