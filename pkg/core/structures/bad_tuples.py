"""
Bad-tuple index for axis-parallel separations.

Coordinates live in an extended pool ``-inf < h_1 < ... < h_p < +inf`` where
``h`` are the midpoints of input coordinates. A tuple ``(x1, x2, y1, y2)`` with
``x1 < x2`` and ``y1 < y2`` is bad when the closed box ``[x1, x2] x [y1, y2]``
holds a point of each set. Tuples are stored as pool positions (0 is ``-inf``,
``p + 1`` is ``+inf``), which sort in the same order as the coordinates.
"""

import logging
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from typing import Iterable, List, Sequence, Tuple

from core.exceptions import StructureUsageError
from core.structures.counters import OpCounter
from core.structures.serialization import Decoder, Encoder, pack_sections, unpack_sections

logger = logging.getLogger(__name__)

BLOB_KIND = "bad-tuple-index"

Point = Tuple[Fraction, Fraction]
IndexTuple = Tuple[int, int, int, int]


@total_ordering
@dataclass(frozen=True)
class ExtendedRational:
    """A rational, or one of the two infinities (``infinity`` is -1 or +1)."""

    value: Fraction = Fraction(0)
    infinity: int = 0

    def _key(self) -> Tuple[int, Fraction]:
        return (self.infinity, self.value if not self.infinity else Fraction(0))

    def __lt__(self, other: "ExtendedRational") -> bool:
        return self._key() < other._key()

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtendedRational) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __str__(self) -> str:
        if self.infinity:
            return "-inf" if self.infinity < 0 else "+inf"
        return str(self.value)

    @classmethod
    def of(cls, value) -> "ExtendedRational":
        return cls(Fraction(value))


NEG_INF = ExtendedRational(infinity=-1)
POS_INF = ExtendedRational(infinity=1)


def midpoints(coordinates: Iterable[Fraction]) -> Tuple[Fraction, ...]:
    """All averages ``(a + b) / 2`` of two coordinates, ``a == b`` included, sorted and deduplicated."""
    values = sorted(set(Fraction(c) for c in coordinates))
    return tuple(sorted({(a + b) / 2 for i, a in enumerate(values) for b in values[i:]}))


def box_is_bad(
    first: Sequence[Point], second: Sequence[Point], x_range: Tuple[ExtendedRational, ExtendedRational],
    y_range: Tuple[ExtendedRational, ExtendedRational],
) -> bool:
    """Direct test: the closed box contains a point of each set."""

    def inside(p: Point) -> bool:
        x, y = ExtendedRational.of(p[0]), ExtendedRational.of(p[1])
        return x_range[0] <= x <= x_range[1] and y_range[0] <= y <= y_range[1]

    return any(inside(p) for p in first) and any(inside(p) for p in second)


class BadTupleIndex:
    """
    Sorted bad tuples over the extended midpoint pools.

    Lookups are binary searches; each counts ``ceil(log2(len + 1))`` steps.
    """

    def __init__(self, pool_x: Sequence[Fraction], pool_y: Sequence[Fraction], tuples: Sequence[IndexTuple]):
        self.pool_x = tuple(pool_x)
        self.pool_y = tuple(pool_y)
        self.tuples: Tuple[IndexTuple, ...] = tuple(tuples)
        self.counter = OpCounter()

    @classmethod
    def build(cls, first: Sequence[Point], second: Sequence[Point]) -> "BadTupleIndex":
        points = list(first) + list(second)
        pool_x = midpoints(p[0] for p in points)
        pool_y = midpoints(p[1] for p in points)
        ext_x = [NEG_INF] + [ExtendedRational(v) for v in pool_x] + [POS_INF]
        ext_y = [NEG_INF] + [ExtendedRational(v) for v in pool_y] + [POS_INF]
        first = [(ExtendedRational.of(x), ExtendedRational.of(y)) for x, y in first]
        second = [(ExtendedRational.of(x), ExtendedRational.of(y)) for x, y in second]

        bad: List[IndexTuple] = []
        for x1, x2 in combinations(range(len(ext_x)), 2):
            lo, hi = ext_x[x1], ext_x[x2]
            ys_first = [y for x, y in first if lo <= x <= hi]
            ys_second = [y for x, y in second if lo <= x <= hi]
            if not ys_first or not ys_second:
                continue
            for y1, y2 in combinations(range(len(ext_y)), 2):
                bottom, top = ext_y[y1], ext_y[y2]
                if any(bottom <= y <= top for y in ys_first) and any(bottom <= y <= top for y in ys_second):
                    bad.append((x1, x2, y1, y2))
        logger.debug(f"bad tuples: pools {len(pool_x)}x{len(pool_y)}, {len(bad)} bad")
        return cls(pool_x, pool_y, bad)

    def extended_x(self, position: int) -> ExtendedRational:
        return self._extended(self.pool_x, position)

    def extended_y(self, position: int) -> ExtendedRational:
        return self._extended(self.pool_y, position)

    @staticmethod
    def _extended(pool: Sequence[Fraction], position: int) -> ExtendedRational:
        if position == 0:
            return NEG_INF
        if position == len(pool) + 1:
            return POS_INF
        return ExtendedRational(pool[position - 1])

    def position_x(self, value: ExtendedRational) -> int:
        return self._position(self.pool_x, value)

    def position_y(self, value: ExtendedRational) -> int:
        return self._position(self.pool_y, value)

    @staticmethod
    def _position(pool: Sequence[Fraction], value: ExtendedRational) -> int:
        if value.infinity:
            return 0 if value.infinity < 0 else len(pool) + 1
        i = bisect_left(pool, value.value)
        if i == len(pool) or pool[i] != value.value:
            raise StructureUsageError(f"coordinate {value} is not in the pool")
        return i + 1

    def lookup_positions(self, key: IndexTuple) -> bool:
        """Whether the tuple of pool positions is bad."""
        self.counter.tick("lookup")
        self.counter.step(max(1, len(self.tuples).bit_length()))
        i = bisect_left(self.tuples, key)
        return i < len(self.tuples) and self.tuples[i] == key

    def lookup(
        self, x1: ExtendedRational, x2: ExtendedRational, y1: ExtendedRational, y2: ExtendedRational
    ) -> bool:
        return self.lookup_positions(
            (self.position_x(x1), self.position_x(x2), self.position_y(y1), self.position_y(y2))
        )

    def __len__(self) -> int:
        return len(self.tuples)

    def fresh_copy(self) -> "BadTupleIndex":
        return BadTupleIndex(self.pool_x, self.pool_y, self.tuples)

    def to_bytes(self) -> bytes:
        body = Encoder().count(len(self.pool_x))
        for v in self.pool_x:
            body.rational(v)
        body.count(len(self.pool_y))
        for v in self.pool_y:
            body.rational(v)
        body.counts(x for t in self.tuples for x in t)
        return pack_sections(BLOB_KIND, {"index": body.to_bytes()})

    @classmethod
    def from_bytes(cls, data: bytes) -> "BadTupleIndex":
        body = Decoder(unpack_sections(data, BLOB_KIND)["index"], "bad-tuple index")
        pool_x = [body.rational() for _ in range(body.count())]
        pool_y = [body.rational() for _ in range(body.count())]
        flat = body.counts()
        body.done()
        tuples = [tuple(flat[i : i + 4]) for i in range(0, len(flat), 4)]
        return cls(pool_x, pool_y, tuples)
