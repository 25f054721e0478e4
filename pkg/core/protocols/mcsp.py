"""
Minimum common string partition.

With ``k' = min(k, n)`` blocks the witness is ``k'`` block end positions of
``width(n + 1)`` bits (strictly increasing, the last one ``n``) followed by a
permutation of ``k'`` entries of ``width(k')`` bits: entry ``i`` names the
block of ``x`` that becomes the ``i``-th block of ``y``.

Both strings are stored with a trailing sentinel symbol, so cutting off every
block takes ``k'`` splits, rebuilding in permuted order ``k'`` concatenations,
and one equality test compares against ``y``: ``2k' + 1`` store operations.
"""

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from core.exceptions import WitnessLengthError
from core.oracles.instances import McspInstance
from core.protocols.base import (
    BitReader,
    BitWriter,
    CheckLog,
    Preprocessed,
    Protocol,
    VerifierState,
    Witness,
    require,
    width,
)
from core.structures.counters import OpCounter
from core.structures.serialization import Encoder
from core.structures.string_store import StringStore

SENTINEL = 256


@dataclass
class McspState(VerifierState):
    store: Optional[StringStore] = None
    n: int = 0
    blocks: int = 0
    x_handle: int = 0
    y_handle: int = 0


@dataclass(frozen=True)
class McspWitness:
    cuts: Tuple[int, ...]
    order: Tuple[int, ...]


class McspProtocol(Protocol):
    name = "mcsp"
    variant = "mcsp"

    def length_formula(self, inst: McspInstance) -> int:
        k = min(inst.k, inst.n)
        return k * width(inst.n + 1) + k * width(k)

    def call_budget(self, inst: McspInstance) -> int:
        return 2 * min(inst.k, inst.n) + 1

    def preprocess(self, inst: McspInstance) -> Preprocessed:
        store = StringStore()
        x_handle = store.load(list(inst.x) + [SENTINEL])
        y_handle = store.load(list(inst.y) + [SENTINEL])
        blocks = min(inst.k, inst.n)
        length = blocks * width(inst.n + 1) + blocks * width(blocks)
        header = Encoder().count(inst.n).count(blocks).count(x_handle).count(y_handle)
        advice = self.advice(length, header, {"store": store.to_bytes()})
        return Preprocessed(advice, length, inst.k, inst.n)

    def load(self, advice: bytes) -> McspState:
        base, body = self.open_advice(advice)
        n, blocks, x_handle, y_handle = body.count(), body.count(), body.count(), body.count()
        body.done()
        return McspState(
            base.length,
            base.rejected,
            store=StringStore.from_bytes(base.sections["store"]),
            n=n,
            blocks=blocks,
            x_handle=x_handle,
            y_handle=y_handle,
        )

    def run(self, state: McspState, reader: BitReader, steps: OpCounter):
        k = state.blocks
        cuts = reader.read_many(k, width(state.n + 1))
        order = reader.read_many(k, width(k))
        require(all(0 < c <= state.n for c in cuts), "cut position out of range")
        require(all(a < b for a, b in zip(cuts, cuts[1:])), "cuts not strictly increasing")
        require(not cuts or cuts[-1] == state.n, "last cut must be n")
        require(sorted(order) == list(range(k)), "block order is not a permutation")

        store = state.store.fork()
        pieces = []
        rest, done = state.x_handle, 0
        for c in cuts:
            piece, rest = store.split(rest, c - done)
            pieces.append(piece)
            done = c
        # rest is now the sentinel alone.
        acc = rest
        for i in reversed(range(k)):
            acc = store.concat(pieces[order[i]], acc)
        log = CheckLog()
        log.expect(store.equal(acc, state.y_handle), "blocks-do-not-match")
        return log.failed, {"string_store": store.counter}

    def encode(self, state: McspState, structured: McspWitness) -> Witness:
        k = state.blocks
        w = BitWriter()
        for c in structured.cuts:
            w.write(c, width(state.n + 1))
        for f in structured.order:
            w.write(f, width(k))
        witness = w.to_witness()
        if witness.length != state.length:
            raise WitnessLengthError(f"structured witness has {len(structured.cuts)} blocks, expected {k}")
        return witness

    def sample_witness(self, state: McspState, rng: random.Random) -> Witness:
        k = state.blocks
        cuts: Sequence[int] = sorted(rng.sample(range(1, state.n), k - 1)) + [state.n] if k else []
        order = list(range(k))
        rng.shuffle(order)
        return self.encode(state, McspWitness(tuple(cuts), tuple(order)))
