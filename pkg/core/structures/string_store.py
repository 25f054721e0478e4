"""
Persistent string collection with split, concatenation and equality.

Strings are leaf-oriented AVL ropes over integer symbols. Every node carries a
polynomial fingerprint modulo the Mersenne prime ``2^61 - 1`` with a base
derived from a seed, so equality is a length check plus a fingerprint
comparison. Ropes are immutable: splitting or concatenating never changes the
host strings, which stay addressable through their handles.
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from core.exceptions import StructureUsageError
from core.structures.counters import OpCounter
from core.structures.serialization import Decoder, Encoder, pack_sections, unpack_sections
from core.utils.config import setting

logger = logging.getLogger(__name__)

MODULUS = (1 << 61) - 1
BLOB_KIND = "string-store"
OPERATIONS = ("singleton", "concat", "split", "equal")


def fingerprint_base(seed: str) -> int:
    digest = hashlib.blake2b(seed.encode("utf-8"), digest_size=8).digest()
    return 1024 + int.from_bytes(digest, "little") % (MODULUS - 2048)


@dataclass(frozen=True)
class _Rope:
    left: Optional["_Rope"]
    right: Optional["_Rope"]
    symbol: int
    size: int
    height: int
    digest: int
    power: int


class StringStore:
    """
    A collection of immutable strings addressed by integer handles.

    Args:
        seed: Fingerprint seed (default: COMPACT_ILP_STRING_SEED)
    """

    def __init__(self, seed: Optional[str] = None):
        self.seed = seed if seed is not None else str(setting("COMPACT_ILP_STRING_SEED", "compact-ilp"))
        self.base = fingerprint_base(self.seed)
        self.counter = OpCounter()
        self._ropes: List[_Rope] = []

    # rope primitives

    def _leaf(self, symbol: int) -> _Rope:
        return _Rope(None, None, symbol, 1, 0, (symbol + 1) % MODULUS, self.base)

    def _branch(self, left: _Rope, right: _Rope) -> _Rope:
        self.counter.step()
        return _Rope(
            left,
            right,
            -1,
            left.size + right.size,
            max(left.height, right.height) + 1,
            (left.digest * right.power + right.digest) % MODULUS,
            (left.power * right.power) % MODULUS,
        )

    def _balance(self, left: _Rope, right: _Rope) -> _Rope:
        if left.height > right.height + 1:
            if left.left.height >= left.right.height:
                return self._branch(left.left, self._branch(left.right, right))
            inner = left.right
            return self._branch(self._branch(left.left, inner.left), self._branch(inner.right, right))
        if right.height > left.height + 1:
            if right.right.height >= right.left.height:
                return self._branch(self._branch(left, right.left), right.right)
            inner = right.left
            return self._branch(self._branch(left, inner.left), self._branch(inner.right, right.right))
        return self._branch(left, right)

    def _join(self, left: Optional[_Rope], right: Optional[_Rope]) -> Optional[_Rope]:
        if left is None:
            return right
        if right is None:
            return left
        if abs(left.height - right.height) <= 1:
            return self._branch(left, right)
        if left.height > right.height:
            return self._balance(left.left, self._join(left.right, right))
        return self._balance(self._join(left, right.left), right.right)

    def _split(self, rope: _Rope, index: int) -> Tuple[Optional[_Rope], Optional[_Rope]]:
        if index == 0:
            return None, rope
        if index == rope.size:
            return rope, None
        self.counter.step()
        if index <= rope.left.size:
            head, tail = self._split(rope.left, index)
            return head, self._join(tail, rope.right)
        head, tail = self._split(rope.right, index - rope.left.size)
        return self._join(rope.left, head), tail

    def _build(self, symbols: Sequence[int]) -> _Rope:
        if len(symbols) == 1:
            return self._leaf(symbols[0])
        mid = len(symbols) // 2
        return self._branch(self._build(symbols[:mid]), self._build(symbols[mid:]))

    def _add(self, rope: _Rope) -> int:
        self._ropes.append(rope)
        return len(self._ropes) - 1

    def _get(self, handle: int) -> _Rope:
        if not 0 <= handle < len(self._ropes):
            raise StructureUsageError(f"unknown string handle {handle}")
        return self._ropes[handle]

    # public operations

    def singleton(self, symbol: int) -> int:
        self.counter.tick("singleton")
        if symbol < 0:
            raise StructureUsageError(f"symbols are non-negative, got {symbol}")
        return self._add(self._leaf(symbol))

    def concat(self, first: int, second: int) -> int:
        self.counter.tick("concat")
        return self._add(self._join(self._get(first), self._get(second)))

    def split(self, handle: int, index: int) -> Tuple[int, int]:
        """Split into the first ``index`` symbols and the rest; ``1 <= index <= len - 1``."""
        self.counter.tick("split")
        rope = self._get(handle)
        if not 1 <= index <= rope.size - 1:
            raise StructureUsageError(f"split index {index} outside [1, {rope.size - 1}]")
        head, tail = self._split(rope, index)
        return self._add(head), self._add(tail)

    def equal(self, first: int, second: int) -> bool:
        self.counter.tick("equal")
        a, b = self._get(first), self._get(second)
        self.counter.step()
        return a.size == b.size and a.digest == b.digest

    def length(self, handle: int) -> int:
        return self._get(handle).size

    def load(self, symbols: Iterable[int]) -> int:
        """
        Add a whole string through singleton and concat operations.

        The string must be non-empty; the result is balanced.
        """
        symbols = list(symbols)
        if not symbols:
            raise StructureUsageError("the store holds non-empty strings only")
        handles = [self.singleton(s) for s in symbols]
        while len(handles) > 1:
            paired = [self.concat(a, b) for a, b in zip(handles[0::2], handles[1::2])]
            if len(handles) % 2:
                paired.append(handles[-1])
            handles = paired
        return handles[0]

    def materialize(self, handle: int) -> Tuple[int, ...]:
        out: List[int] = []
        stack = [self._get(handle)]
        while stack:
            node = stack.pop()
            if node.left is None:
                out.append(node.symbol)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return tuple(out)

    def height(self, handle: int) -> int:
        return self._get(handle).height

    def __len__(self) -> int:
        return len(self._ropes)

    def fork(self) -> "StringStore":
        """A store with the same handles and fresh counters; later handles are private to it."""
        clone = StringStore(self.seed)
        clone._ropes = list(self._ropes)
        return clone

    def to_bytes(self) -> bytes:
        body = Encoder().text(self.seed).count(len(self._ropes))
        for handle in range(len(self._ropes)):
            body.counts(self.materialize(handle))
        return pack_sections(BLOB_KIND, {"strings": body.to_bytes()})

    @classmethod
    def from_bytes(cls, data: bytes) -> "StringStore":
        body = Decoder(unpack_sections(data, BLOB_KIND)["strings"], "string-store")
        store = cls(body.text())
        for _ in range(body.count()):
            store._ropes.append(store._build(body.counts()))
        body.done()
        store.counter.reset()
        return store


class LiteralStringStore:
    """Reference twin holding plain tuples and comparing them symbol by symbol."""

    def __init__(self) -> None:
        self._strings: List[Tuple[int, ...]] = []

    def _add(self, value: Tuple[int, ...]) -> int:
        self._strings.append(value)
        return len(self._strings) - 1

    def singleton(self, symbol: int) -> int:
        return self._add((symbol,))

    def concat(self, first: int, second: int) -> int:
        return self._add(self._strings[first] + self._strings[second])

    def split(self, handle: int, index: int) -> Tuple[int, int]:
        value = self._strings[handle]
        if not 1 <= index <= len(value) - 1:
            raise StructureUsageError(f"split index {index} outside [1, {len(value) - 1}]")
        return self._add(value[:index]), self._add(value[index:])

    def equal(self, first: int, second: int) -> bool:
        return self._strings[first] == self._strings[second]

    def length(self, handle: int) -> int:
        return len(self._strings[handle])

    def materialize(self, handle: int) -> Tuple[int, ...]:
        return self._strings[handle]
