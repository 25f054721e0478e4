"""
Weighted Vertex Cover as a MILP and as a binary ILP with ``|Y| + 1`` rows.

Both formulations start from a known vertex cover ``Y`` (the 2-approximation
below gives ``|Y| <= 2k``). Only the variables of ``Y`` need to be integral:
for ``u`` in ``Y`` the row

    sum_{v in N(u)} x_v + deg(u) * x_u >= deg(u)

forces every neighbour of ``u`` to 1 whenever ``x_u = 0``, and the budget row
``sum_v w(v) x_v <= budget`` replaces the objective.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from core.exceptions import AuditFailure, UncoveredEdgeError
from core.ilp.forms import compute_delta
from core.ilp.program import IntegerProgram, Sense
from core.oracles.instances import SimpleGraph, WvcInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VcWitnessSet:
    """A sorted vertex set ``Y`` and whether it covers every edge."""

    vertices: Tuple[int, ...]
    is_cover: bool

    @classmethod
    def of(cls, graph: SimpleGraph, vertices) -> "VcWitnessSet":
        chosen = tuple(sorted(set(vertices)))
        members = set(chosen)
        covered = all(u in members or v in members for u, v in graph.edges)
        return cls(chosen, covered)


def vc_2approx(graph: SimpleGraph) -> VcWitnessSet:
    """
    Maximal-matching 2-approximation.

    Edges are scanned in sorted order; every edge with no chosen endpoint adds
    both of its endpoints. Isolated vertices are never chosen.
    """
    chosen = set()
    for u, v in graph.edges:
        if u not in chosen and v not in chosen:
            chosen.update((u, v))
    return VcWitnessSet(tuple(sorted(chosen)), True)


def _uncovered_edge(graph: SimpleGraph, cover: VcWitnessSet):
    members = set(cover.vertices)
    for u, v in graph.edges:
        if u not in members and v not in members:
            return (u, v)
    return None


def _cover_rows(inst: WvcInstance, cover: VcWitnessSet) -> Tuple[list, list]:
    graph = inst.graph
    missing = _uncovered_edge(graph, cover)
    if missing is not None:
        raise UncoveredEdgeError(f"Y does not cover edge ({missing[0]}, {missing[1]})")
    graph.check_vertices(cover.vertices, "vertex cover")

    entries = []
    rhs = []
    # ">=" rows are stored negated, one per u in Y in increasing order.
    for row, u in enumerate(cover.vertices):
        degree = graph.degree(u)
        for v in graph.neighbors(u):
            entries.append((row, v, -1))
        if degree:
            entries.append((row, u, -degree))
        rhs.append(-degree)
    budget_row = len(cover.vertices)
    for v, w in enumerate(inst.weights):
        if w:
            entries.append((budget_row, v, w))
    rhs.append(inst.budget)
    return entries, rhs


def wvc_to_milp(inst: WvcInstance, cover: VcWitnessSet) -> IntegerProgram:
    """
    MILP with ``x_v`` in [0, 1] for every vertex, integral exactly on ``Y``.

    Args:
        inst: Weighted instance
        cover: A vertex cover of ``inst.graph``

    Returns:
        IntegerProgram: ``|Y| + 1`` constraints, ``|Y|`` integral variables

    Raises:
        UncoveredEdgeError: ``cover`` misses an edge
    """
    entries, rhs = _cover_rows(inst, cover)
    n = inst.graph.n
    members = set(cover.vertices)
    program = IntegerProgram(
        len(rhs),
        n,
        tuple(entries),
        tuple(rhs),
        Sense.LE,
        lower=(0,) * n,
        upper=(1,) * n,
        integral=tuple(v in members for v in range(n)),
    )
    logger.debug(f"wvc milp: n={n}, |Y|={len(members)}, budget={inst.budget}")
    return program


def wvc_to_binary_ilp(inst: WvcInstance, cover: VcWitnessSet) -> IntegerProgram:
    """Same rows as ``wvc_to_milp`` with every variable integral."""
    entries, rhs = _cover_rows(inst, cover)
    n = inst.graph.n
    return IntegerProgram(
        len(rhs),
        n,
        tuple(entries),
        tuple(rhs),
        Sense.LE,
        lower=(0,) * n,
        upper=(1,) * n,
        integral=(True,) * n,
    )


def extract_cover(inst: WvcInstance, certificate: Sequence[int | Fraction]) -> Tuple[int, ...]:
    """
    Read the vertex cover ``{v : x_v = 1}`` off a feasible certificate.

    Raises:
        AuditFailure: The extracted set is not a cover of weight at most the budget
    """
    chosen = tuple(v for v, value in enumerate(certificate) if value == 1)
    members = set(chosen)
    for u, v in inst.graph.edges:
        if u not in members and v not in members:
            raise AuditFailure(f"extracted set misses edge ({u}, {v})")
    weight = sum(inst.weights[v] for v in chosen)
    if weight > inst.budget:
        raise AuditFailure(f"extracted cover weighs {weight}, budget is {inst.budget}")
    return chosen


def formulation_audit(inst: WvcInstance, cover: VcWitnessSet, program: IntegerProgram) -> Dict[str, int]:
    """
    Record the size quantities of a WVC formulation and check them.

    Checks ``Δ(A) <= max(W, n)``, ``m = |Y| + 1`` and that exactly ``|Y|``
    variables are integral (MILP) or all of them (binary ILP).

    Returns:
        Dict: delta, max_weight, n, constraints, integral_vars, cover_size
    """
    delta = compute_delta(program).delta_A
    max_weight = max(inst.weights, default=0)
    n = inst.graph.n
    report = {
        "delta": delta,
        "max_weight": max_weight,
        "n": n,
        "constraints": program.num_constraints,
        "integral_vars": program.integral_count,
        "cover_size": len(cover.vertices),
    }
    if delta > max(max_weight, n):
        raise AuditFailure(f"delta {delta} exceeds max(W, n) = {max(max_weight, n)}")
    if program.num_constraints != len(cover.vertices) + 1:
        raise AuditFailure(
            f"{program.num_constraints} constraints, expected |Y|+1 = {len(cover.vertices) + 1}"
        )
    if program.integral_count not in (len(cover.vertices), n):
        raise AuditFailure(f"{program.integral_count} integral variables for |Y| = {len(cover.vertices)}")
    return report
