"""
Exhaustive deciders used as ground truth.

Every decider is plain brute force over the relevant subsets, guarded by the
``COMPACT_ILP_DECIDER_GUARDS`` size limits.
"""

import logging
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

from core.exceptions import GuardExceededError, PreconditionError
from core.ilp.program import IntegerProgram, Sense
from core.oracles.instances import (
    DiscretizationInstance,
    LongPathInstance,
    McspInstance,
    MultiwayCutInstance,
    ProblemInstance,
    RWayCutInstance,
    SetCoverInstance,
    SimpleGraph,
    SteinerInstance,
    WvcInstance,
)
from core.utils.config import setting
from core.utils.graph_utils import component_labels

logger = logging.getLogger(__name__)

DEFAULT_GUARDS = {"max_vertices": 10, "max_string": 8, "max_points": 10, "max_sets": 8}


def _guard(name: str, value: int, what: str) -> None:
    limits = {**DEFAULT_GUARDS, **setting("COMPACT_ILP_DECIDER_GUARDS", {})}
    if value > limits[name]:
        raise GuardExceededError(f"{what} is {value}, exact decider guard {name} is {limits[name]}")


def _graph_guard(graph: SimpleGraph) -> None:
    _guard("max_vertices", graph.n, "vertex count")


def _decide_set_cover(inst: SetCoverInstance) -> bool:
    _guard("max_sets", len(inst.sets), "set count")
    universe = set(range(inst.universe_size))
    for size in range(0, min(inst.budget, len(inst.sets)) + 1):
        for family in combinations(inst.sets, size):
            if universe.issubset(e for members in family for e in members):
                return True
    return False


def _decide_wvc(inst: WvcInstance) -> bool:
    _graph_guard(inst.graph)
    n = inst.graph.n
    for mask in range(1 << n):
        if sum(inst.weights[v] for v in range(n) if mask >> v & 1) > inst.budget:
            continue
        if all(mask >> u & 1 or mask >> v & 1 for u, v in inst.graph.edges):
            return True
    return False


def min_weight_cover_via_cover(inst: WvcInstance, cover: Sequence[int]) -> int:
    """
    Minimum vertex cover weight by guessing its intersection with a known cover ``Y``.

    For ``S`` the part of ``Y`` that is taken, the rest ``Y - S`` is left out, so
    all of its neighbours must be taken; ``S`` is valid when no edge runs
    inside ``Y - S``. Runs in ``2^|Y| * n`` time.

    Raises:
        PreconditionError: ``cover`` misses an edge
    """
    graph = inst.graph
    members = sorted(set(cover))
    chosen_set = set(members)
    for u, v in graph.edges:
        if u not in chosen_set and v not in chosen_set:
            raise PreconditionError(f"Y does not cover edge ({u}, {v})")
    best = None
    for mask in range(1 << len(members)):
        taken = {members[i] for i in range(len(members)) if mask >> i & 1}
        left_out = chosen_set - taken
        forced = {w for u in left_out for w in graph.neighbors(u)}
        if forced & left_out:
            continue
        weight = sum(inst.weights[v] for v in taken | forced)
        if best is None or weight < best:
            best = weight
    return best if best is not None else 0


def _components_after(n: int, edges: Iterable[Tuple[int, int]], removed_vertices=()) -> List[int]:
    adjacency: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    return component_labels(n, adjacency, removed_vertices)


def _decide_rway(inst: RWayCutInstance) -> bool:
    graph = inst.graph
    _graph_guard(graph)
    for size in range(0, min(inst.k, len(graph.edges)) + 1):
        for cut in combinations(range(len(graph.edges)), size):
            gone = set(cut)
            kept = [e for i, e in enumerate(graph.edges) if i not in gone]
            if len(set(_components_after(graph.n, kept))) >= inst.r:
                return True
    return False


def _decide_multiway(inst: MultiwayCutInstance) -> bool:
    graph = inst.graph
    _graph_guard(graph)
    terminals = set(inst.terminals)
    others = [v for v in range(graph.n) if v not in terminals]
    for size in range(0, min(inst.k, len(others)) + 1):
        for removed in combinations(others, size):
            labels = _components_after(graph.n, graph.edges, removed)
            if len({labels[t] for t in inst.terminals}) == len(inst.terminals):
                return True
    return False


def _compositions(n: int, parts: int) -> Iterable[Tuple[int, ...]]:
    """Block end positions of every split of ``0..n`` into ``parts`` non-empty blocks."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    for cuts in combinations(range(1, n), parts - 1):
        yield cuts + (n,)


def _blocks(s: bytes, ends: Tuple[int, ...]) -> List[bytes]:
    starts = (0,) + ends[:-1]
    return [s[a:b] for a, b in zip(starts, ends)]


def _decide_mcsp(inst: McspInstance) -> bool:
    _guard("max_string", inst.n, "string length")
    parts = min(inst.k, inst.n)
    y_partitions = {tuple(sorted(_blocks(inst.y, ends))) for ends in _compositions(inst.n, parts)}
    return any(tuple(sorted(_blocks(inst.x, ends))) in y_partitions for ends in _compositions(inst.n, parts))


def _decide_long_path(inst: LongPathInstance) -> bool:
    graph = inst.graph
    _graph_guard(graph)
    target = inst.length
    if target == 0:
        return True
    if target > graph.n:
        return False

    def extend(v: int, visited: set, size: int) -> bool:
        if size == target:
            return True
        for w in graph.neighbors(v):
            if w not in visited:
                visited.add(w)
                if extend(w, visited, size + 1):
                    return True
                visited.discard(w)
        return False

    return any(extend(v, {v}, 1) for v in range(graph.n))


def _decide_steiner(inst: SteinerInstance) -> bool:
    graph = inst.graph
    _graph_guard(graph)
    terminals = set(inst.terminals)
    others = [v for v in range(graph.n) if v not in terminals]
    # A connected vertex set S containing T has a spanning tree with |S| - 1 edges.
    for extra in range(0, min(len(others), inst.budget + 1 - len(terminals)) + 1):
        for chosen in combinations(others, extra):
            keep = terminals | set(chosen)
            removed = [v for v in range(graph.n) if v not in keep]
            labels = _components_after(graph.n, graph.edges, removed)
            if len({labels[v] for v in keep}) == 1:
                return True
    return False


def separating_lines(values: Iterable) -> List:
    """One line strictly between each pair of consecutive distinct coordinates."""
    ordered = sorted(set(values))
    return [(a + b) / 2 for a, b in zip(ordered, ordered[1:])]


def _decide_discretization(inst: DiscretizationInstance) -> bool:
    _guard("max_points", len(inst.first) + len(inst.second), "point count")
    points = inst.first + inst.second
    candidates = [("x", c) for c in separating_lines(p[0] for p in points)]
    candidates += [("y", c) for c in separating_lines(p[1] for p in points)]
    pairs = [(p, q) for p in inst.first for q in inst.second]

    def separated(p, q, lines) -> bool:
        for axis, c in lines:
            i = 0 if axis == "x" else 1
            if min(p[i], q[i]) < c < max(p[i], q[i]):
                return True
        return False

    for size in range(0, min(inst.k, len(candidates)) + 1):
        for lines in combinations(candidates, size):
            if all(separated(p, q, lines) for p, q in pairs):
                return True
    return False


def _decide_program(p: IntegerProgram) -> bool:
    from core.ilp.forms import to_equality_form
    from core.solvers.lattice import lattice_feasibility
    from core.solvers.results import SolveStatus

    eq = p if p.sense is Sense.EQ else to_equality_form(p)
    result = lattice_feasibility(eq)
    if result.status is SolveStatus.BOUND_EXHAUSTED:
        raise GuardExceededError("lattice search hit its node cap")
    return result.feasible


DECIDERS: Dict[str, Callable] = {
    "set-cover": _decide_set_cover,
    "wvc": _decide_wvc,
    "rway-cut": _decide_rway,
    "multiway-cut": _decide_multiway,
    "mcsp": _decide_mcsp,
    "long-path": _decide_long_path,
    "steiner": _decide_steiner,
    "discretization": _decide_discretization,
}


def decide_exact(inst: ProblemInstance | IntegerProgram) -> bool:
    """
    Exact yes/no answer for ``inst`` by exhaustive search.

    Integer programs (the ``ilp`` protocol's instances) are decided with the
    lattice solver at its default radius.

    Raises:
        GuardExceededError: The instance is above its size guard
    """
    if isinstance(inst, IntegerProgram):
        return _decide_program(inst)
    verdict = DECIDERS[inst.variant](inst)
    logger.debug(f"decide_exact {inst.variant}: {'yes' if verdict else 'no'}")
    return verdict
