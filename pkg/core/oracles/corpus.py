"""
The differential corpus and its cross-module contract.

A manifest is a JSON list of entries, each holding a ``GenSpec``, the expected
verdict and where that verdict comes from. ``check_corpus`` regenerates every
instance and requires, per entry:

- ``decide_exact`` returns the expected verdict;
- for variants with a protocol, ``enumerate_decide`` agrees with it (entries
  whose witness is longer than COMPACT_ILP_CHECK_MAX_WITNESS_BITS are skipped);
- for set cover and weighted vertex cover, the modeled programs are feasible
  exactly when the answer is yes.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, TypeAdapter, ValidationError

from core.exceptions import InstanceParseError
from core.oracles.deciders import decide_exact, min_weight_cover_via_cover
from core.oracles.generators import GenSpec, generate
from core.oracles.instances import ProblemInstance, SetCoverInstance, WvcInstance
from core.utils.config import setting

logger = logging.getLogger(__name__)

PROTOCOL_VARIANTS = ("rway-cut", "multiway-cut", "mcsp", "long-path", "steiner", "discretization")


class CorpusEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    spec: GenSpec
    expected: Literal["yes", "no"]
    provenance: str = "planted"


_MANIFEST = TypeAdapter(List[CorpusEntry])


def load_manifest(path: str | Path) -> List[CorpusEntry]:
    """
    Read and validate a corpus manifest.

    Raises:
        InstanceParseError: The file is not a valid manifest
    """
    try:
        return _MANIFEST.validate_json(Path(path).read_bytes())
    except ValidationError as e:
        raise InstanceParseError(f"invalid corpus manifest {path}: {e}") from e


def dump_manifest(entries: List[CorpusEntry]) -> bytes:
    data = [entry.model_dump(mode="json", exclude_defaults=False) for entry in entries]
    return (json.dumps(data, indent=2) + "\n").encode("utf-8")


@dataclass
class FamilyTally:
    passed: int = 0
    failed: int = 0
    skipped: int = 0


@dataclass
class EntryOutcome:
    name: str
    variant: str
    failures: List[str] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)


@dataclass
class CorpusReport:
    families: Dict[str, FamilyTally] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)
    entries: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, outcome: EntryOutcome) -> None:
        tally = self.families.setdefault(outcome.variant, FamilyTally())
        self.entries += 1
        if outcome.failures:
            tally.failed += 1
            self.failures.extend(f"{outcome.name}: {reason}" for reason in outcome.failures)
        else:
            tally.passed += 1
        if outcome.skipped:
            tally.skipped += 1
            self.skipped.extend(f"{outcome.name}: {reason}" for reason in outcome.skipped)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "entries": self.entries,
            "families": {
                name: {"passed": t.passed, "failed": t.failed, "skipped": t.skipped}
                for name, t in sorted(self.families.items())
            },
            "failures": list(self.failures),
            "skipped": list(self.skipped),
        }


def _verdict(yes: bool) -> str:
    return "yes" if yes else "no"


def _protocol_contract(inst: ProblemInstance, truth: bool, max_bits: int) -> Tuple[Optional[str], Optional[str]]:
    """(failure, skip reason) of ``enumerate_decide`` against the exact answer."""
    from core.protocols.base import enumerate_decide
    from core.protocols.registry import get_protocol

    protocol = get_protocol(inst.variant)
    pre = protocol.preprocess(inst)
    if not pre.rejected and pre.length > max_bits:
        return None, f"protocol witness has {pre.length} bits, check limit is {max_bits}"
    decision = enumerate_decide(protocol, inst, max_bits=max_bits, workers=1, pre=pre)
    if decision.yes != truth:
        return f"enumerate_decide says {_verdict(decision.yes)}, decide_exact says {_verdict(truth)}", None
    return None, None


def _modeler_contract(inst: ProblemInstance, truth: bool) -> List[str]:
    from core.modelers.set_cover import set_cover_to_ilp
    from core.modelers.vertex_cover import vc_2approx, wvc_to_binary_ilp, wvc_to_milp
    from core.solvers.brute_force import brute_force_feasibility
    from core.solvers.milp import milp_feasibility

    problems = []
    if isinstance(inst, SetCoverInstance):
        result = brute_force_feasibility(set_cover_to_ilp(inst, binary=True), box=1)
        if result.feasible != truth:
            problems.append(f"set cover program is {result.status.value}, decide_exact says {_verdict(truth)}")
    elif isinstance(inst, WvcInstance):
        cover = vc_2approx(inst.graph)
        checks = {
            "milp": milp_feasibility(wvc_to_milp(inst, cover)).feasible,
            "binary ilp": brute_force_feasibility(wvc_to_binary_ilp(inst, cover), box=1).feasible,
            "cover search": min_weight_cover_via_cover(inst, cover.vertices) <= inst.budget,
        }
        for label, feasible in checks.items():
            if feasible != truth:
                problems.append(f"{label} says {_verdict(feasible)}, decide_exact says {_verdict(truth)}")
    return problems


def check_entry(entry: CorpusEntry, max_bits: int) -> EntryOutcome:
    """Run every contract that applies to one manifest entry."""
    outcome = EntryOutcome(entry.name, entry.spec.variant)
    inst = generate(entry.spec)
    truth = decide_exact(inst)
    if _verdict(truth) != entry.expected:
        outcome.failures.append(f"expected {entry.expected}, decide_exact says {_verdict(truth)}")
    if inst.variant in PROTOCOL_VARIANTS:
        failure, skipped = _protocol_contract(inst, truth, max_bits)
        if failure:
            outcome.failures.append(failure)
        if skipped:
            outcome.skipped.append(skipped)
    else:
        outcome.failures.extend(_modeler_contract(inst, truth))
    return outcome


def check_corpus(
    entries: List[CorpusEntry],
    max_bits: Optional[int] = None,
    workers: Optional[int] = None,
) -> CorpusReport:
    """
    Check the cross-module contract on every entry of a manifest.

    Args:
        entries: Manifest entries
        max_bits: Protocol enumeration limit (default: COMPACT_ILP_CHECK_MAX_WITNESS_BITS)
        workers: Worker processes; entries are checked independently

    Returns:
        CorpusReport: Per-family counts plus every failure and skip, by entry name
    """
    if max_bits is None:
        max_bits = int(setting("COMPACT_ILP_CHECK_MAX_WITNESS_BITS", 16))
    if workers is None:
        workers = int(setting("COMPACT_ILP_ENUMERATION_WORKERS", 1))
    report = CorpusReport()
    if not entries:
        logger.warning("corpus manifest is empty; nothing was checked")
        return report
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(check_entry, entries, [max_bits] * len(entries)))
    else:
        outcomes = [check_entry(entry, max_bits) for entry in entries]
    for outcome in outcomes:
        report.add(outcome)
    for failure in report.failures:
        logger.error(f"corpus mismatch {failure}")
    logger.info(
        f"corpus: {report.entries} entries, {len(report.failures)} failures, "
        f"{len(report.skipped)} skipped"
    )
    return report
