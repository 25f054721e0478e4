"""
Line-based instance files.

Graph problems::

    c <comment>
    p <n> <m>
    e <u> <v>          m lines, vertices 0-indexed
    w <v> <weight>     weighted vertex cover (missing weights are 1)
    t <v>              terminals
    k <k> | r <r> | l <ell>

Set cover uses ``u <size>``, one ``s <e> ...`` line per set and ``l <budget>``.
MCSP uses ``x <string>``, ``y <string>`` and ``k <k>``; strings are UTF-8.
Discretization uses ``pt <1|2> <x> <y>`` with rationals ``p/q`` and ``k <k>``.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from core.exceptions import InstanceParseError
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
    VARIANTS,
    WvcInstance,
)
from core.utils.config import setting

logger = logging.getLogger(__name__)

_SCALARS = {"k", "r", "l", "u"}


class _Lines:
    """Tokenized lines with their 1-based numbers; comments and blanks dropped."""

    def __init__(self, data: bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceParseError(f"instance file is not UTF-8: {exc}") from exc
        self.rows: List[Tuple[int, str, str]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.rstrip("\r")
            if not line.strip() or line.startswith("c"):
                continue
            tag, _, rest = line.partition(" ")
            self.rows.append((number, tag, rest))

    def scalars(self, allowed: set, required: set) -> Dict[str, int]:
        values: Dict[str, int] = {}
        for number, tag, rest in self.rows:
            if tag not in _SCALARS:
                continue
            if tag not in allowed:
                raise InstanceParseError(f"'{tag}' line is not valid here", number)
            if tag in values:
                raise InstanceParseError(f"duplicate '{tag}' line", number)
            values[tag] = _int(rest, number, tag)
        missing = sorted(required - values.keys())
        if missing:
            raise InstanceParseError(f"missing '{missing[0]}' line")
        return values

    def tagged(self, tag: str):
        return [(number, rest) for number, t, rest in self.rows if t == tag]

    def check_tags(self, allowed: set) -> None:
        for number, tag, _ in self.rows:
            if tag not in allowed:
                raise InstanceParseError(f"unexpected line tag '{tag}'", number)


def _int(text: str, line: int, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise InstanceParseError(f"{what} expects an integer, got '{text.strip()}'", line) from None


def _ints(text: str, line: int, count: Optional[int], what: str) -> List[int]:
    parts = text.split()
    if count is not None and len(parts) != count:
        raise InstanceParseError(f"'{what}' line expects {count} integers, got {len(parts)}", line)
    return [_int(p, line, what) for p in parts]


def _rational(text: str, line: int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InstanceParseError(f"not a rational number: '{text}'", line) from None


def _graph(lines: _Lines) -> SimpleGraph:
    header = lines.tagged("p")
    if len(header) != 1:
        raise InstanceParseError("expected exactly one 'p <n> <m>' line", header[1][0] if header else None)
    number, rest = header[0]
    n, m = _ints(rest, number, 2, "p")
    edges = []
    seen = set()
    for number, rest in lines.tagged("e"):
        u, v = _ints(rest, number, 2, "e")
        for x in (u, v):
            if not 0 <= x < n:
                raise InstanceParseError(f"edge endpoint {x} outside 0..{n - 1}", number)
        if u == v:
            raise InstanceParseError(f"self-loop at vertex {u}", number)
        if (min(u, v), max(u, v)) in seen:
            raise InstanceParseError(f"parallel edge ({u}, {v})", number)
        seen.add((min(u, v), max(u, v)))
        edges.append((u, v))
    if len(edges) != m:
        raise InstanceParseError(f"header announces {m} edges, found {len(edges)}")
    return SimpleGraph(n, tuple(edges))


def _vertices(lines: _Lines, tag: str, n: int, what: str) -> Tuple[int, ...]:
    found = []
    for number, rest in lines.tagged(tag):
        (v,) = _ints(rest, number, 1, tag)
        if not 0 <= v < n:
            raise InstanceParseError(f"{what} refers to unknown vertex {v}", number)
        found.append(v)
    return tuple(found)


def _parse_wvc(lines: _Lines) -> WvcInstance:
    lines.check_tags({"p", "e", "w", "l"})
    graph = _graph(lines)
    scalars = lines.scalars({"l"}, {"l"})
    weights = [1] * graph.n
    seen = set()
    for number, rest in lines.tagged("w"):
        v, weight = _ints(rest, number, 2, "w")
        if not 0 <= v < graph.n:
            raise InstanceParseError(f"weight for unknown vertex {v}", number)
        if v in seen:
            raise InstanceParseError(f"duplicate weight for vertex {v}", number)
        seen.add(v)
        weights[v] = weight
    inst = WvcInstance(graph, tuple(weights), scalars["l"])
    inst.check_weight_cap(int(setting("COMPACT_ILP_WVC_WEIGHT_CAP", 10**6)))
    return inst


def _parse_rway(lines: _Lines) -> RWayCutInstance:
    lines.check_tags({"p", "e", "r", "k"})
    scalars = lines.scalars({"r", "k"}, {"r", "k"})
    return RWayCutInstance(_graph(lines), scalars["r"], scalars["k"])


def _parse_multiway(lines: _Lines) -> MultiwayCutInstance:
    lines.check_tags({"p", "e", "t", "k"})
    graph = _graph(lines)
    scalars = lines.scalars({"k"}, {"k"})
    return MultiwayCutInstance(graph, _vertices(lines, "t", graph.n, "terminal set"), scalars["k"])


def _parse_long_path(lines: _Lines) -> LongPathInstance:
    lines.check_tags({"p", "e", "l"})
    scalars = lines.scalars({"l"}, {"l"})
    return LongPathInstance(_graph(lines), scalars["l"])


def _parse_steiner(lines: _Lines) -> SteinerInstance:
    lines.check_tags({"p", "e", "t", "l"})
    graph = _graph(lines)
    scalars = lines.scalars({"l"}, {"l"})
    return SteinerInstance(graph, _vertices(lines, "t", graph.n, "terminal set"), scalars["l"])


def _parse_set_cover(lines: _Lines) -> SetCoverInstance:
    lines.check_tags({"u", "s", "l"})
    scalars = lines.scalars({"u", "l"}, {"u", "l"})
    sets = []
    for number, rest in lines.tagged("s"):
        members = _ints(rest, number, None, "s")
        for e in members:
            if not 0 <= e < scalars["u"]:
                raise InstanceParseError(f"element {e} outside the universe 0..{scalars['u'] - 1}", number)
        sets.append(tuple(members))
    return SetCoverInstance(scalars["u"], tuple(sets), scalars["l"])


def _parse_mcsp(lines: _Lines) -> McspInstance:
    lines.check_tags({"x", "y", "k"})
    scalars = lines.scalars({"k"}, {"k"})
    strings = {}
    for tag in ("x", "y"):
        found = lines.tagged(tag)
        if len(found) != 1:
            raise InstanceParseError(f"expected exactly one '{tag}' line")
        strings[tag] = found[0][1].encode("utf-8")
    return McspInstance(strings["x"], strings["y"], scalars["k"])


def _parse_discretization(lines: _Lines) -> DiscretizationInstance:
    lines.check_tags({"pt", "k"})
    scalars = lines.scalars({"k"}, {"k"})
    sets: Dict[int, List] = {1: [], 2: []}
    for number, rest in lines.tagged("pt"):
        parts = rest.split()
        if len(parts) != 3 or parts[0] not in ("1", "2"):
            raise InstanceParseError("'pt' line expects <1|2> <x> <y>", number)
        sets[int(parts[0])].append((_rational(parts[1], number), _rational(parts[2], number)))
    return DiscretizationInstance(tuple(sets[1]), tuple(sets[2]), scalars["k"])


_PARSERS: Dict[str, Callable[[_Lines], ProblemInstance]] = {
    "set-cover": _parse_set_cover,
    "wvc": _parse_wvc,
    "rway-cut": _parse_rway,
    "multiway-cut": _parse_multiway,
    "mcsp": _parse_mcsp,
    "long-path": _parse_long_path,
    "steiner": _parse_steiner,
    "discretization": _parse_discretization,
}


def parse_instance(data: bytes, variant: str) -> ProblemInstance:
    """
    Parse an instance file of the given variant.

    Raises:
        InstanceParseError: Syntax or validity problem, with the line number when known
    """
    if variant not in _PARSERS:
        raise InstanceParseError(f"unknown variant '{variant}'; choose from {', '.join(VARIANTS)}")
    return _PARSERS[variant](_Lines(data))


def _graph_lines(graph: SimpleGraph) -> List[str]:
    return [f"p {graph.n} {len(graph.edges)}"] + [f"e {u} {v}" for u, v in graph.edges]


def _rational_text(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def write_instance(inst: ProblemInstance) -> bytes:
    """Deterministic file text for ``inst``; ``parse_instance`` reads it back unchanged."""
    lines = [f"c {inst.variant}"]
    if isinstance(inst, SetCoverInstance):
        lines.append(f"u {inst.universe_size}")
        lines.extend("s" + "".join(f" {e}" for e in members) for members in inst.sets)
        lines.append(f"l {inst.budget}")
    elif isinstance(inst, WvcInstance):
        lines.extend(_graph_lines(inst.graph))
        lines.extend(f"w {v} {w}" for v, w in enumerate(inst.weights))
        lines.append(f"l {inst.budget}")
    elif isinstance(inst, RWayCutInstance):
        lines.extend(_graph_lines(inst.graph))
        lines.extend([f"r {inst.r}", f"k {inst.k}"])
    elif isinstance(inst, MultiwayCutInstance):
        lines.extend(_graph_lines(inst.graph))
        lines.extend(f"t {t}" for t in inst.terminals)
        lines.append(f"k {inst.k}")
    elif isinstance(inst, McspInstance):
        lines.extend([f"x {inst.x.decode('utf-8')}", f"y {inst.y.decode('utf-8')}", f"k {inst.k}"])
    elif isinstance(inst, LongPathInstance):
        lines.extend(_graph_lines(inst.graph))
        lines.append(f"l {inst.length}")
    elif isinstance(inst, SteinerInstance):
        lines.extend(_graph_lines(inst.graph))
        lines.extend(f"t {t}" for t in inst.terminals)
        lines.append(f"l {inst.budget}")
    elif isinstance(inst, DiscretizationInstance):
        for tag, points in (("1", inst.first), ("2", inst.second)):
            lines.extend(f"pt {tag} {_rational_text(x)} {_rational_text(y)}" for x, y in points)
        lines.append(f"k {inst.k}")
    else:
        raise TypeError(f"cannot write {type(inst).__name__}")
    return ("\n".join(lines) + "\n").encode("utf-8")
