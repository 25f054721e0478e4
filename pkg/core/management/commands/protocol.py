"""
Run, enumerate or audit a witness verification protocol on an instance file.
"""

import logging

from core.ilp.formats import FORMATS, import_program
from core.management.base import JsonCommand
from core.oracles.parsers import parse_instance
from core.protocols.base import Witness, audit_costs, enumerate_decide
from core.protocols.registry import PROTOCOLS, get_protocol
from core.utils.budget import Deadline
from core.utils.config import setting

logger = logging.getLogger(__name__)

ACTIONS = ("run", "enumerate", "audit")


class Command(JsonCommand):
    help = (
        "run: check one hex witness and print the verifier report; enumerate: decide by trying "
        "every witness; audit: measure witness length and structure calls."
    )

    def add_arguments(self, parser):
        parser.add_argument("action", choices=ACTIONS)
        parser.add_argument("instance", type=str, help="Instance file, or a program file for 'ilp'")
        parser.add_argument("--variant", choices=sorted(PROTOCOLS), required=True)
        parser.add_argument("--witness", type=str, default=None, help="run: witness as hex")
        parser.add_argument("--format", choices=FORMATS, default="canonical-json", help="ilp: program format")
        parser.add_argument("--max-bits", type=int, default=None, help="enumerate: witness length guard")
        parser.add_argument("--workers", type=int, default=None, help="enumerate: worker processes")
        parser.add_argument("--samples", type=int, default=32, help="audit: sampled witnesses")
        parser.add_argument("--seed", type=int, default=None, help="audit: sampling seed")
        parser.add_argument("--budget-ms", type=int, default=None, help="Overrides COMPACT_ILP_BUDGET_MS")
        parser.add_argument("--advice-out", type=str, default=None, help="Also write the advice blob here")

    def perform(self, *args, **options):
        variant = options["variant"]
        protocol = get_protocol(variant)
        data = self.read_input(options["instance"])
        if variant == "ilp":
            inst = import_program(data, options["format"])
        else:
            inst = parse_instance(data, variant)

        action = options["action"]
        if action == "audit":
            seed = options["seed"] if options["seed"] is not None else int(setting("COMPACT_ILP_DEFAULT_SEED", 7))
            report = audit_costs(protocol, inst, samples=options["samples"], seed=seed)
            self.emit(
                {
                    **report.as_dict(),
                    "formula_ell": report.formula_ell,
                    "call_budget": report.call_budget,
                    "samples": report.samples,
                }
            )
            return

        pre = protocol.preprocess(inst)
        if options["advice_out"]:
            self.write_output(options["advice_out"], pre.advice)
        if action == "run":
            if options["witness"] is None:
                raise ValueError("run needs --witness")
            witness = Witness.from_hex(options["witness"], pre.length)
            self.emit({"protocol": variant, **protocol.verify(pre.advice, witness).as_dict()})
            return

        deadline = Deadline.from_settings(f"{variant} enumeration", options["budget_ms"])
        decision = enumerate_decide(
            protocol,
            inst,
            max_bits=options["max_bits"],
            workers=options["workers"],
            deadline=deadline,
            pre=pre,
        )
        self.notice(f"{variant}: {decision.checked} witnesses checked out of 2^{decision.length}")
        self.emit(decision.as_dict())
