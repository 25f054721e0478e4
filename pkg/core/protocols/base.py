"""
Witness verification framework.

A protocol has a preprocessor ``A`` (``preprocess``) that turns an instance
into an advice blob and a witness length ``ell``, and a verifier ``B``
(``verify``) that sees only the advice and an ``ell``-bit witness. Witness
fields are fixed-width unsigned integers written most significant bit first;
``width(x)`` bits hold ``0..x-1`` and ``count_width(k)`` bits hold ``0..k``.
"""

import json
import logging
import random
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, ClassVar, Dict, List, Optional, Tuple

from core.exceptions import AuditFailure, BlobFormatError, EnumerationBudgetError, WitnessLengthError
from core.structures.counters import OpCounter
from core.structures.serialization import Decoder, Encoder, pack_sections, unpack_sections
from core.utils.budget import Deadline
from core.utils.config import setting
from core.utils.logging_utils import get_prefixed_logger, log_execution_time

logger = logging.getLogger(__name__)

CODEC_VERSION = 1


def width(x: int) -> int:
    """``ceil(log2(x))`` with ``width(0) = width(1) = 0``."""
    return (x - 1).bit_length() if x > 1 else 0


def count_width(k: int) -> int:
    """Bits for a count in ``0..k``."""
    return width(k + 1)


@dataclass(frozen=True)
class Witness:
    """An ``length``-bit string stored as the integer it spells, MSB first."""

    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0 or self.value < 0 or self.value >> self.length:
            raise WitnessLengthError(f"value does not fit in {self.length} bits")

    @classmethod
    def from_hex(cls, text: str, length: int) -> "Witness":
        """
        Parse a hex witness of exactly ``ceil(length / 4)`` digits.

        Raises:
            WitnessLengthError: Wrong digit count or bits set above ``length``
        """
        text = text.strip().lower()
        if text.startswith("0x"):
            text = text[2:]
        digits = (length + 3) // 4
        if len(text) != digits:
            raise WitnessLengthError(
                f"witness has {len(text)} hex digits, protocol expects {digits} ({length} bits)"
            )
        try:
            value = int(text, 16) if text else 0
        except ValueError as exc:
            raise WitnessLengthError(f"witness is not hexadecimal: {text!r}") from exc
        if value >> length:
            raise WitnessLengthError(f"witness sets bits beyond its {length}-bit length")
        return cls(value, length)

    @classmethod
    def from_bits(cls, bits: str) -> "Witness":
        return cls(int(bits, 2) if bits else 0, len(bits))

    def to_hex(self) -> str:
        digits = (self.length + 3) // 4
        return format(self.value, "x").zfill(digits) if digits else ""

    def bits(self) -> str:
        return format(self.value, "b").zfill(self.length) if self.length else ""


class BitWriter:
    def __init__(self) -> None:
        self.value = 0
        self.length = 0

    def write(self, value: int, bits: int) -> "BitWriter":
        if value < 0 or value >> bits:
            raise WitnessLengthError(f"field value {value} does not fit in {bits} bits")
        self.value = (self.value << bits) | value
        self.length += bits
        return self

    def to_witness(self) -> Witness:
        return Witness(self.value, self.length)


class BitReader:
    """Reads consecutive fields; every read is one verifier step."""

    def __init__(self, witness: Witness, steps: OpCounter) -> None:
        self._witness = witness
        self._pos = 0
        self._steps = steps

    def read(self, bits: int) -> int:
        self._steps.step()
        end = self._pos + bits
        if end > self._witness.length:
            raise WitnessLengthError("witness layout reads past its end")
        shift = self._witness.length - end
        self._pos = end
        return (self._witness.value >> shift) & ((1 << bits) - 1)

    def read_many(self, count: int, bits: int) -> List[int]:
        return [self.read(bits) for _ in range(count)]


class Malformed(Exception):
    """A witness failed decoding; the message is the reject reason."""


class Verdict(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"


@dataclass
class VerifierReport:
    verdict: Verdict
    reason: Optional[str]
    step_count: int
    structure_calls: Dict[str, int]
    witness_bits: int

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT

    @property
    def total_calls(self) -> int:
        return sum(self.structure_calls.values())

    def as_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "reason": self.reason,
            "step_count": self.step_count,
            "structure_calls": dict(sorted(self.structure_calls.items())),
            "witness_bits": self.witness_bits,
        }


class CheckLog:
    """Keeps the identifier of the first failed semantic check."""

    def __init__(self) -> None:
        self.failed: Optional[str] = None

    def expect(self, ok: bool, reason: str) -> bool:
        if not ok and self.failed is None:
            self.failed = reason
        return ok


@dataclass
class Preprocessed:
    """Output of ``A``."""

    advice: bytes
    length: int
    parameter: int
    size: int
    rejected: Optional[str] = None


@dataclass
class VerifierState:
    """Advice parsed once and shared by every verification."""

    length: int
    rejected: Optional[str]
    sections: Dict[str, bytes] = field(repr=False, default_factory=dict)


class Protocol(ABC):
    """
    A (preprocessor, verifier) pair for one problem.

    Subclasses implement ``preprocess``, ``load``, ``run``, ``encode``,
    ``length_formula``, ``call_budget`` and ``sample_witness``.
    """

    name: ClassVar[str]
    variant: ClassVar[str]

    def __init__(self) -> None:
        self.log = get_prefixed_logger(__name__, self.name)

    # A

    @abstractmethod
    def preprocess(self, inst) -> Preprocessed:
        """Build the advice and the witness length for ``inst``."""

    def advice(
        self, length: int, header: Encoder, sections: Dict[str, bytes], rejected: Optional[str] = None
    ) -> bytes:
        head = Encoder().count(CODEC_VERSION).count(length).text(rejected or "")
        head.raw(header.to_bytes())
        return pack_sections(f"advice:{self.name}", {"header": head.to_bytes(), **sections})

    # B

    def open_advice(self, advice: bytes) -> Tuple[VerifierState, Decoder]:
        sections = unpack_sections(advice, f"advice:{self.name}")
        head = Decoder(sections.pop("header"), "advice header")
        version = head.count()
        if version != CODEC_VERSION:
            raise BlobFormatError(f"witness codec version {version} is not supported")
        length = head.count()
        rejected = head.text() or None
        body = Decoder(head.raw(), f"{self.name} advice")
        head.done()
        return VerifierState(length, rejected, sections), body

    @abstractmethod
    def load(self, advice: bytes) -> VerifierState:
        """Parse the advice into a verifier state."""

    @abstractmethod
    def run(
        self, state: VerifierState, reader: BitReader, steps: OpCounter
    ) -> Tuple[Optional[str], Dict[str, OpCounter]]:
        """
        Decode and check one witness.

        Raises ``Malformed`` for decoding failures. Otherwise every structure
        call of the witness is made and the first failed check is returned
        (None on acceptance) with the counters of the structures used.
        """

    def check(self, state: VerifierState, witness: Witness) -> VerifierReport:
        if witness.length != state.length:
            raise WitnessLengthError(
                f"{self.name} expects a {state.length}-bit witness, got {witness.length} bits"
            )
        steps = OpCounter()
        if state.rejected:
            steps.step()
            return VerifierReport(Verdict.REJECT, state.rejected, steps.steps, {}, witness.length)
        reader = BitReader(witness, steps)
        try:
            reason, counters = self.run(state, reader, steps)
        except Malformed as exc:
            return VerifierReport(Verdict.REJECT, f"malformed: {exc}", steps.steps, {}, witness.length)
        calls = {name: c.calls() for name, c in counters.items()}
        total_steps = steps.steps + sum(c.steps for c in counters.values())
        verdict = Verdict.ACCEPT if reason is None else Verdict.REJECT
        return VerifierReport(verdict, reason, total_steps, calls, witness.length)

    def verify(self, advice: bytes, witness: Witness) -> VerifierReport:
        """``B``: a pure function of the advice and the witness."""
        return self.check(self.load(advice), witness)

    # codec and cost model

    @abstractmethod
    def encode(self, state: VerifierState, structured: Any) -> Witness:
        """Write a structured witness in this protocol's layout."""

    @abstractmethod
    def length_formula(self, inst) -> int:
        """Closed-form witness length for ``inst``."""

    @abstractmethod
    def call_budget(self, inst) -> int:
        """Upper bound on structure calls of one verification."""

    @abstractmethod
    def sample_witness(self, state: VerifierState, rng: random.Random) -> Witness:
        """A random witness of well-formed shape."""

    def parameter(self, inst) -> int:
        return inst.parameter


def require(ok: bool, reason: str) -> None:
    """Raise ``Malformed`` with ``reason`` unless ``ok``."""
    if not ok:
        raise Malformed(reason)


def read_increasing(reader: BitReader, used: int, slots: int, bits: int, limit: int, what: str) -> List[int]:
    """
    Read ``slots`` fields, the first ``used`` strictly increasing and below ``limit``, the rest zero.
    """
    values = reader.read_many(slots, bits)
    chosen = values[:used]
    require(all(v < limit for v in chosen), f"{what} index out of range")
    require(all(a < b for a, b in zip(chosen, chosen[1:])), f"{what} not strictly increasing")
    require(not any(values[used:]), f"unused {what} slots must be zero")
    return chosen


@dataclass
class Decision:
    protocol: str
    yes: bool
    witness: Optional[Witness]
    length: int
    checked: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            "protocol": self.protocol,
            "verdict": "yes" if self.yes else "no",
            "witness": self.witness.to_hex() if self.witness is not None else None,
            "ell": self.length,
            "witnesses_checked": self.checked,
        }


def _scan(protocol_name: str, advice: bytes, start: int, stop: int) -> Tuple[Optional[int], int]:
    from core.protocols.registry import get_protocol

    protocol = get_protocol(protocol_name)
    state = protocol.load(advice)
    for value in range(start, stop):
        if protocol.check(state, Witness(value, state.length)).accepted:
            return value, value - start + 1
    return None, stop - start


@log_execution_time()
def enumerate_decide(
    protocol: Protocol,
    inst,
    max_bits: Optional[int] = None,
    workers: Optional[int] = None,
    deadline: Optional[Deadline] = None,
    pre: Optional[Preprocessed] = None,
) -> Decision:
    """
    Decide ``inst`` by running ``A`` once and ``B`` on every ``ell``-bit witness.

    The accepting witness returned is the one with the smallest value. With
    ``workers > 1`` witness ranges are scanned in worker processes.

    Raises:
        EnumerationBudgetError: ``ell`` exceeds ``max_bits`` (default COMPACT_ILP_WITNESS_MAX_BITS)
    """
    if max_bits is None:
        max_bits = int(setting("COMPACT_ILP_WITNESS_MAX_BITS", 24))
    if workers is None:
        workers = int(setting("COMPACT_ILP_ENUMERATION_WORKERS", 1))
    pre = pre or protocol.preprocess(inst)
    if pre.rejected:
        protocol.log.info(f"preprocessing rejected the instance: {pre.rejected}")
        return Decision(protocol.name, False, None, pre.length, 0)
    if pre.length > max_bits:
        raise EnumerationBudgetError(
            f"{protocol.name} witness has {pre.length} bits, enumeration guard is {max_bits}"
        )
    total = 1 << pre.length
    deadline = deadline or Deadline.from_settings(f"{protocol.name} enumeration")

    if workers > 1 and total >= 4096:
        chunk = -(-total // (workers * 4))
        ranges = [(s, min(total, s + chunk)) for s in range(0, total, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan, *zip(*[(protocol.name, pre.advice, s, e) for s, e in ranges])))
        hits = [value for value, _ in results if value is not None]
        checked = sum(n for _, n in results)
        found = min(hits) if hits else None
    else:
        state = protocol.load(pre.advice)
        found, checked = None, 0
        for value in range(total):
            deadline.check(every=256)
            checked += 1
            if protocol.check(state, Witness(value, pre.length)).accepted:
                found = value
                break
    witness = Witness(found, pre.length) if found is not None else None
    protocol.log.debug(f"enumerated {checked} of {total} witnesses, accepted={witness is not None}")
    return Decision(protocol.name, witness is not None, witness, pre.length, checked)


@dataclass
class CostReport:
    protocol: str
    n: int
    k: int
    ell: int
    formula_ell: int
    steps: int
    calls: int
    call_budget: int
    samples: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            "protocol": self.protocol,
            "n": self.n,
            "k": self.k,
            "ell": self.ell,
            "steps": self.steps,
            "calls": self.calls,
        }

    def as_json_line(self) -> str:
        return json.dumps(self.as_dict(), separators=(",", ":"))


@log_execution_time()
def audit_costs(protocol: Protocol, inst, samples: int = 32, seed: Optional[int] = None) -> CostReport:
    """
    Measure ``B`` on sampled well-formed witnesses and check the published formulas.

    Raises:
        AuditFailure: ``ell`` differs from ``length_formula`` or a verification
            makes more structure calls than ``call_budget``
    """
    if seed is None:
        seed = int(setting("COMPACT_ILP_DEFAULT_SEED", 7))
    pre = protocol.preprocess(inst)
    formula = protocol.length_formula(inst)
    if pre.length != formula:
        raise AuditFailure(f"{protocol.name}: ell={pre.length} but length formula gives {formula}")
    budget = protocol.call_budget(inst)
    state = protocol.load(pre.advice)
    rng = random.Random(seed)
    witnesses = [Witness(0, pre.length)] + [protocol.sample_witness(state, rng) for _ in range(samples)]
    steps = calls = 0
    for w in witnesses:
        report = protocol.check(state, w)
        steps = max(steps, report.step_count)
        calls = max(calls, report.total_calls)
    if calls > budget:
        raise AuditFailure(f"{protocol.name}: {calls} structure calls exceed the call budget {budget}")
    report = CostReport(
        protocol.name, pre.size, pre.parameter, pre.length, formula, steps, calls, budget, len(witnesses)
    )
    protocol.log.info(report.as_json_line())
    return report
