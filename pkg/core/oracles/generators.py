"""
Deterministic instance generators for the differential corpus.

A ``GenSpec`` fully determines its instance: every random choice comes from one
``random.Random(seed)`` and is made over sorted sequences, so the same spec
always yields byte-identical ``write_instance`` output.

Modes:
    random       plain random instance of the requested size
    planted-yes  a solution is planted, so the answer is yes
    planted-no   a structural obstruction is planted, so the answer is no
    scaled       planted-yes shape with sparse extras, for growing ``n`` at fixed ``k``

Planted modes may clamp parameters that make the construction impossible
(for example ``k`` above ``n``); the returned instance carries the values used.
"""

import logging
import random
from fractions import Fraction
from typing import Callable, Dict, List, Literal, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from core.oracles.deciders import min_weight_cover_via_cover
from core.oracles.instances import (
    VARIANTS,
    DiscretizationInstance,
    Edge,
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

logger = logging.getLogger(__name__)

Mode = Literal["random", "planted-yes", "planted-no", "scaled"]
Variant = Literal[
    "set-cover", "wvc", "rway-cut", "multiway-cut", "mcsp", "long-path", "steiner", "discretization"
]

# Exact planted WVC budgets are only computed over covers this small.
EXACT_COVER_LIMIT = 12


class GenSpec(BaseModel):
    """
    Parameters of one generated instance.

    ``n`` is the vertex count, string length, universe size or point count;
    ``k`` is the variant's parameter or budget (ℓ for set cover, WVC, long
    path and Steiner tree).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Variant
    mode: Mode = "random"
    n: int = Field(6, ge=0)
    k: int = Field(2, ge=0)
    r: int = Field(2, ge=1, description="Component target of r-way cut")
    terminals: int = Field(3, ge=1, description="Terminal count of multiway cut and Steiner tree")
    sets: int = Field(6, ge=0, description="Set family size of set cover")
    density: float = Field(0.4, ge=0.0, le=1.0)
    alphabet: int = Field(2, ge=1, le=26)
    seed: int = 7


def _pairs(vertices: Sequence[int]) -> List[Edge]:
    ordered = sorted(vertices)
    return [(u, v) for i, u in enumerate(ordered) for v in ordered[i + 1 :]]


def _random_edges(rng: random.Random, vertices: Sequence[int], density: float) -> Set[Edge]:
    return {e for e in _pairs(vertices) if rng.random() < density}


def _random_tree(rng: random.Random, vertices: Sequence[int]) -> Set[Edge]:
    order = sorted(vertices)
    rng.shuffle(order)
    edges = set()
    for i in range(1, len(order)):
        u, v = order[i], order[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    return edges


def _split(rng: random.Random, vertices: Sequence[int], groups: int) -> List[List[int]]:
    """Random partition into ``groups`` non-empty parts; needs ``len(vertices) >= groups``."""
    order = sorted(vertices)
    rng.shuffle(order)
    parts = [[v] for v in order[:groups]]
    for v in order[groups:]:
        parts[rng.randrange(groups)].append(v)
    return parts


def _sparse(spec: GenSpec) -> float:
    return min(spec.density, 2.0 / max(spec.n, 1))


def _set_cover(spec: GenSpec, rng: random.Random) -> SetCoverInstance:
    u, budget = spec.n, spec.k
    if spec.mode == "random":
        sets = [tuple(e for e in range(u) if rng.random() < spec.density) for _ in range(spec.sets)]
        return SetCoverInstance(u, tuple(sets), budget)
    if spec.mode == "planted-no":
        u = max(u, 1)
        # Element u-1 is in no set.
        sets = [tuple(e for e in range(u - 1) if rng.random() < spec.density) for _ in range(spec.sets)]
        return SetCoverInstance(u, tuple(sets), budget)
    budget = max(budget, 1)
    planted: List[List[int]] = [[] for _ in range(budget)]
    for e in range(u):
        planted[rng.randrange(budget)].append(e)
    decoys = [[e for e in range(u) if rng.random() < spec.density] for _ in range(max(spec.sets - budget, 0))]
    family = [tuple(s) for s in planted + decoys]
    rng.shuffle(family)
    return SetCoverInstance(u, tuple(family), budget)


def _wvc(spec: GenSpec, rng: random.Random) -> WvcInstance:
    from core.modelers.vertex_cover import vc_2approx

    n = spec.n
    if spec.mode == "planted-no":
        n = max(n, 2)
    density = _sparse(spec) if spec.mode == "scaled" else spec.density
    edges = _random_edges(rng, range(n), density)
    budget = spec.k
    if spec.mode == "planted-no":
        # A matching of budget+1 unit-or-heavier edges needs more than budget weight.
        budget = min(budget, n // 2 - 1)
        order = list(range(n))
        rng.shuffle(order)
        for i in range(budget + 1):
            u, v = order[2 * i], order[2 * i + 1]
            edges.add((min(u, v), max(u, v)))
    graph = SimpleGraph(n, tuple(sorted(edges)))
    weights = tuple(rng.randint(1, 3) for _ in range(n))
    if spec.mode in ("planted-yes", "scaled"):
        cover = vc_2approx(graph)
        budget = sum(weights[v] for v in cover.vertices)
        if len(cover.vertices) <= EXACT_COVER_LIMIT:
            budget = min_weight_cover_via_cover(WvcInstance(graph, weights, 0), cover.vertices)
    return WvcInstance(graph, weights, budget)


def _rway(spec: GenSpec, rng: random.Random) -> RWayCutInstance:
    n = spec.n
    if spec.mode == "random":
        edges = _random_edges(rng, range(n), spec.density)
        return RWayCutInstance(SimpleGraph(n, tuple(sorted(edges))), spec.r, spec.k)
    if spec.mode == "planted-no":
        # K_n has edge connectivity n - 1.
        n = max(n, 2)
        return RWayCutInstance(SimpleGraph(n, tuple(_pairs(range(n)))), 2, min(spec.k, n - 2))
    n = max(n, 1)
    r = min(spec.r, n)
    density = _sparse(spec) if spec.mode == "scaled" else spec.density
    groups = _split(rng, range(n), r)
    edges: Set[Edge] = set()
    for group in groups:
        edges |= _random_tree(rng, group) | _random_edges(rng, group, density)
    if r >= 2:
        owner = {v: i for i, group in enumerate(groups) for v in group}
        crossing = [(u, v) for u, v in _pairs(range(n)) if owner[u] != owner[v]]
        edges |= set(rng.sample(crossing, min(spec.k, len(crossing))))
    return RWayCutInstance(SimpleGraph(n, tuple(sorted(edges))), r, spec.k)


def _multiway(spec: GenSpec, rng: random.Random) -> MultiwayCutInstance:
    n, k = spec.n, spec.k
    if spec.mode == "planted-no":
        n, k = max(n, 2), max(k, 1)
    t = min(spec.terminals, max(2 * k, 1), max(n, 1))
    if spec.mode == "planted-no":
        t = max(t, 2)
    vertices = list(range(n))
    if spec.mode == "random":
        edges = _random_edges(rng, vertices, spec.density)
        terminals = rng.sample(vertices, min(t, n))
        return MultiwayCutInstance(SimpleGraph(n, tuple(sorted(edges))), tuple(terminals), k)
    if spec.mode == "planted-no":
        edges = _random_edges(rng, vertices, spec.density)
        terminals = rng.sample(vertices, t)
        a, b = sorted(terminals[:2])
        edges.add((a, b))
        return MultiwayCutInstance(SimpleGraph(n, tuple(sorted(edges))), tuple(terminals), k)

    n = max(n, t)
    vertices = list(range(n))
    density = _sparse(spec) if spec.mode == "scaled" else spec.density
    order = vertices[:]
    rng.shuffle(order)
    terminals = order[:t]
    separator = order[t : t + min(k, n - t)]
    rest = order[t + len(separator) :]
    groups = [[term] for term in terminals]
    for v in rest:
        groups[rng.randrange(t)].append(v)
    edges: Set[Edge] = set()
    for group in groups:
        edges |= _random_tree(rng, group) | _random_edges(rng, group, density)
    for s in separator:
        for v in sorted(v for v in vertices if v != s):
            if v not in separator and rng.random() < density:
                edges.add((min(s, v), max(s, v)))
    edges |= _random_edges(rng, separator, density)
    return MultiwayCutInstance(SimpleGraph(n, tuple(sorted(edges))), tuple(terminals), k)


def _mcsp(spec: GenSpec, rng: random.Random) -> McspInstance:
    n, k = spec.n, max(spec.k, 1)
    alphabet = bytes(range(ord("a"), ord("a") + spec.alphabet))
    if spec.mode == "planted-no":
        n = max(n, 1)
        alphabet = alphabet if len(alphabet) >= 2 else b"ab"
    x = bytes(rng.choice(alphabet) for _ in range(n))
    if spec.mode == "random":
        symbols = list(x)
        rng.shuffle(symbols)
        return McspInstance(x, bytes(symbols), k)
    if spec.mode == "planted-no":
        # Changing one symbol changes the multiset, so no partition matches.
        i = rng.randrange(n)
        other = rng.choice([c for c in alphabet if c != x[i]])
        return McspInstance(x, x[:i] + bytes([other]) + x[i + 1 :], k)
    parts = min(k, n)
    cuts = sorted(rng.sample(range(1, n), parts - 1)) if parts else []
    bounds = [0] + cuts + [n]
    blocks = [x[a:b] for a, b in zip(bounds, bounds[1:])] if n else []
    rng.shuffle(blocks)
    return McspInstance(x, b"".join(blocks), k)


def _long_path(spec: GenSpec, rng: random.Random) -> LongPathInstance:
    n, target = spec.n, spec.k
    if spec.mode == "random":
        return LongPathInstance(SimpleGraph(n, tuple(sorted(_random_edges(rng, range(n), spec.density)))), target)
    if spec.mode == "planted-no":
        # Components of target - 1 vertices hold no path on target vertices.
        target = max(target, 2)
        n = max(n, 1)
        size = target - 1
        order = list(range(n))
        rng.shuffle(order)
        edges: Set[Edge] = set()
        for i in range(0, n, size):
            component = order[i : i + size]
            edges |= _random_tree(rng, component) | _random_edges(rng, component, spec.density)
        return LongPathInstance(SimpleGraph(n, tuple(sorted(edges))), target)
    if spec.mode == "scaled":
        # Triangle core plus paths of four: the feedback vertex set stays one vertex.
        n = max(n, 3)
        edges = {(0, 1), (0, 2), (1, 2)}
        for start in range(3, n, 4):
            chain = list(range(start, min(start + 4, n)))
            edges |= {(a, b) for a, b in zip(chain, chain[1:])}
        return LongPathInstance(SimpleGraph(n, tuple(sorted(edges))), min(target, 4))
    target = min(target, n)
    order = list(range(n))
    rng.shuffle(order)
    path = order[:target]
    edges = {(min(a, b), max(a, b)) for a, b in zip(path, path[1:])}
    edges |= _random_edges(rng, range(n), spec.density)
    return LongPathInstance(SimpleGraph(n, tuple(sorted(edges))), target)


def _steiner(spec: GenSpec, rng: random.Random) -> SteinerInstance:
    n, budget = max(spec.n, 1), spec.k
    if spec.mode == "random":
        terminals = rng.sample(range(n), min(spec.terminals, n))
        edges = _random_edges(rng, range(n), spec.density)
        return SteinerInstance(SimpleGraph(n, tuple(sorted(edges))), tuple(terminals), budget)
    if spec.mode == "planted-no":
        # Terminals on both sides of an empty cut.
        n = max(n, 2)
        order = list(range(n))
        rng.shuffle(order)
        left, right = order[: n // 2], order[n // 2 :]
        edges = _random_edges(rng, left, spec.density) | _random_edges(rng, right, spec.density)
        t = max(spec.terminals, 2)
        terminals = [left[0], right[0]] + rng.sample(order, min(t, n) - 2)
        return SteinerInstance(SimpleGraph(n, tuple(sorted(edges))), tuple(terminals), budget)
    size = min(n, budget + 1)
    t = min(spec.terminals, size)
    order = list(range(n))
    rng.shuffle(order)
    tree = order[:size]
    terminals = rng.sample(tree, t)
    density = _sparse(spec) if spec.mode == "scaled" else spec.density
    edges = _random_tree(rng, tree) | _random_edges(rng, range(n), density)
    if spec.mode == "scaled":
        edges |= _random_tree(rng, range(n))
    return SteinerInstance(SimpleGraph(n, tuple(sorted(edges))), tuple(terminals), budget)


def _distinct_points(rng: random.Random, count: int, span: int) -> List[Tuple[int, int]]:
    grid = [(x, y) for x in range(span) for y in range(span)]
    return sorted(rng.sample(grid, min(count, len(grid))))


def _discretization(spec: GenSpec, rng: random.Random) -> DiscretizationInstance:
    n, k = spec.n, spec.k
    if spec.mode == "planted-no":
        # Alternating colours on the diagonal need one line per gap.
        n = max(n, 2)
        diagonal = [(Fraction(i), Fraction(i)) for i in range(n)]
        return DiscretizationInstance(tuple(diagonal[0::2]), tuple(diagonal[1::2]), min(k, n - 2))
    span = max(2, n)
    points = _distinct_points(rng, n, span)
    if spec.mode == "random":
        colours = [rng.random() < 0.5 for _ in points]
    else:
        vertical = rng.randint(0, k)
        xs = sorted(rng.sample(range(span - 1), min(vertical, span - 1)))
        ys = sorted(rng.sample(range(span - 1), min(k - vertical, span - 1)))
        cell_colour: Dict[Tuple[int, int], bool] = {}
        colours = []
        for x, y in points:
            # Lines sit at c + 1/2, so a cell is the count of lines left of and below the point.
            cell = (sum(c < x for c in xs), sum(c < y for c in ys))
            if cell not in cell_colour:
                cell_colour[cell] = rng.random() < 0.5
            colours.append(cell_colour[cell])
    first = tuple((Fraction(x), Fraction(y)) for (x, y), c in zip(points, colours) if c)
    second = tuple((Fraction(x), Fraction(y)) for (x, y), c in zip(points, colours) if not c)
    return DiscretizationInstance(first, second, k)


GENERATORS: Dict[str, Callable[[GenSpec, random.Random], ProblemInstance]] = {
    "set-cover": _set_cover,
    "wvc": _wvc,
    "rway-cut": _rway,
    "multiway-cut": _multiway,
    "mcsp": _mcsp,
    "long-path": _long_path,
    "steiner": _steiner,
    "discretization": _discretization,
}


def generate(spec: GenSpec) -> ProblemInstance:
    """
    Build the instance described by ``spec``.

    Args:
        spec: Variant, mode, size parameters and seed

    Returns:
        ProblemInstance: The same instance for the same spec, every time
    """
    rng = random.Random(f"{spec.variant}:{spec.mode}:{spec.seed}")
    inst = GENERATORS[spec.variant](spec, rng)
    logger.debug(f"generated {spec.variant} ({spec.mode}, n={spec.n}, k={spec.k}, seed={spec.seed})")
    return inst
