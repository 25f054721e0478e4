"""
Problem instances for the eight supported problems.

Every instance is an immutable dataclass carrying a ``variant`` tag; the union
``ProblemInstance`` is what parsers, generators, deciders and protocols pass
around.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import ClassVar, Dict, Iterable, List, Tuple, Union

import networkx as nx

from core.exceptions import InstanceParseError

Edge = Tuple[int, int]
Point = Tuple[Fraction, Fraction]

VARIANTS = (
    "set-cover",
    "wvc",
    "rway-cut",
    "multiway-cut",
    "mcsp",
    "long-path",
    "steiner",
    "discretization",
)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``0..n-1`` with edges stored as sorted pairs."""

    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InstanceParseError(f"vertex count must be non-negative, got {self.n}")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise InstanceParseError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceParseError(f"edge ({u}, {v}) uses a vertex outside 0..{self.n - 1}")
            e = (min(u, v), max(u, v))
            if e in normalized:
                raise InstanceParseError(f"parallel edge ({e[0]}, {e[1]})")
            normalized.add(e)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "SimpleGraph":
        mapping = {v: i for i, v in enumerate(sorted(g.nodes))}
        return cls(len(mapping), tuple((mapping[u], mapping[v]) for u, v in g.edges))

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        neighbors: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        return tuple(tuple(sorted(nb)) for nb in neighbors)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def check_vertices(self, vertices: Iterable[int], what: str) -> None:
        for v in vertices:
            if not 0 <= v < self.n:
                raise InstanceParseError(f"{what} refers to unknown vertex {v}")


@dataclass(frozen=True)
class SetCoverInstance:
    variant: ClassVar[str] = "set-cover"

    universe_size: int
    sets: Tuple[Tuple[int, ...], ...]
    budget: int

    def __post_init__(self) -> None:
        if self.universe_size < 0:
            raise InstanceParseError(f"universe size must be non-negative, got {self.universe_size}")
        if self.budget < 0:
            raise InstanceParseError(f"budget must be non-negative, got {self.budget}")
        normalized = []
        for i, members in enumerate(self.sets):
            for e in members:
                if not 0 <= e < self.universe_size:
                    raise InstanceParseError(f"set {i} contains {e}, outside the universe")
            normalized.append(tuple(sorted(set(members))))
        object.__setattr__(self, "sets", tuple(normalized))

    @property
    def parameter(self) -> int:
        return self.universe_size


@dataclass(frozen=True)
class WvcInstance:
    variant: ClassVar[str] = "wvc"

    graph: SimpleGraph
    weights: Tuple[int, ...]
    budget: int

    def __post_init__(self) -> None:
        if len(self.weights) != self.graph.n:
            raise InstanceParseError(
                f"{len(self.weights)} weights given for {self.graph.n} vertices"
            )
        for v, w in enumerate(self.weights):
            if w < 0:
                raise InstanceParseError(f"vertex {v} has negative weight {w}")
        object.__setattr__(self, "weights", tuple(self.weights))

    def check_weight_cap(self, cap: int) -> None:
        """Weights are unary in spirit; magnitudes above ``cap`` are rejected."""
        for v, w in enumerate(self.weights):
            if w > cap:
                raise InstanceParseError(f"vertex {v} weight {w} exceeds the weight cap {cap}")


@dataclass(frozen=True)
class RWayCutInstance:
    variant: ClassVar[str] = "rway-cut"

    graph: SimpleGraph
    r: int
    k: int

    def __post_init__(self) -> None:
        if self.r < 0 or self.k < 0:
            raise InstanceParseError(f"r and k must be non-negative, got r={self.r}, k={self.k}")

    @property
    def parameter(self) -> int:
        return self.k


@dataclass(frozen=True)
class MultiwayCutInstance:
    variant: ClassVar[str] = "multiway-cut"

    graph: SimpleGraph
    terminals: Tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise InstanceParseError(f"k must be non-negative, got {self.k}")
        self.graph.check_vertices(self.terminals, "terminal set")
        object.__setattr__(self, "terminals", tuple(sorted(set(self.terminals))))

    @property
    def parameter(self) -> int:
        return self.k


@dataclass(frozen=True)
class McspInstance:
    variant: ClassVar[str] = "mcsp"

    x: bytes
    y: bytes
    k: int

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise InstanceParseError(f"strings differ in length: {len(self.x)} vs {len(self.y)}")
        if self.k < 1:
            raise InstanceParseError(f"k must be at least 1, got {self.k}")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def parameter(self) -> int:
        return self.k


@dataclass(frozen=True)
class LongPathInstance:
    variant: ClassVar[str] = "long-path"

    graph: SimpleGraph
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise InstanceParseError(f"path length must be non-negative, got {self.length}")


@dataclass(frozen=True)
class SteinerInstance:
    variant: ClassVar[str] = "steiner"

    graph: SimpleGraph
    terminals: Tuple[int, ...]
    budget: int

    def __post_init__(self) -> None:
        self.graph.check_vertices(self.terminals, "terminal set")
        object.__setattr__(self, "terminals", tuple(sorted(set(self.terminals))))
        if not self.terminals:
            raise InstanceParseError("Steiner tree needs at least one terminal")
        if self.budget < 0:
            raise InstanceParseError(f"budget must be non-negative, got {self.budget}")

    @property
    def parameter(self) -> int:
        return len(self.terminals)


@dataclass(frozen=True)
class DiscretizationInstance:
    variant: ClassVar[str] = "discretization"

    first: Tuple[Point, ...]
    second: Tuple[Point, ...]
    k: int

    def __post_init__(self) -> None:
        first = tuple(sorted(set((Fraction(x), Fraction(y)) for x, y in self.first)))
        second = tuple(sorted(set((Fraction(x), Fraction(y)) for x, y in self.second)))
        shared = set(first) & set(second)
        if shared:
            x, y = sorted(shared)[0]
            raise InstanceParseError(f"point ({x}, {y}) belongs to both sets")
        if self.k < 0:
            raise InstanceParseError(f"k must be non-negative, got {self.k}")
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    @property
    def parameter(self) -> int:
        return self.k


ProblemInstance = Union[
    SetCoverInstance,
    WvcInstance,
    RWayCutInstance,
    MultiwayCutInstance,
    McspInstance,
    LongPathInstance,
    SteinerInstance,
    DiscretizationInstance,
]

INSTANCE_TYPES: Dict[str, type] = {
    cls.variant: cls
    for cls in (
        SetCoverInstance,
        WvcInstance,
        RWayCutInstance,
        MultiwayCutInstance,
        McspInstance,
        LongPathInstance,
        SteinerInstance,
        DiscretizationInstance,
    )
}
