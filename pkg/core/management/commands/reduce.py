"""
Model a set cover or weighted vertex cover instance as an integer program.
"""

import json
import logging

from django.core.management.base import CommandError

from core.ilp.formats import FORMATS, export_program
from core.ilp.forms import compute_delta
from core.management.base import EXIT_USAGE, JsonCommand
from core.modelers.set_cover import set_cover_to_ilp
from core.modelers.vertex_cover import formulation_audit, vc_2approx, wvc_to_binary_ilp, wvc_to_milp
from core.oracles.parsers import parse_instance

logger = logging.getLogger(__name__)

VARIANTS = ("set-cover", "wvc-milp", "wvc-binary")


class Command(JsonCommand):
    help = (
        "Reduce an instance file to a program. Writes the program to --output and a "
        "sidecar {m, n, delta, b_inf, k_source} next to it."
    )

    def add_arguments(self, parser):
        parser.add_argument("instance", type=str, help="Instance file")
        parser.add_argument("--variant", choices=VARIANTS, required=True)
        parser.add_argument(
            "--binary",
            action="store_true",
            default=False,
            help="set-cover only: upper bound 1 on every variable",
        )
        parser.add_argument("--format", choices=FORMATS, default="canonical-json")
        parser.add_argument("--fixed", action="store_true", default=False, help="Fixed-column MPS")
        parser.add_argument("--output", "-o", type=str, required=True, help="Program file")
        parser.add_argument(
            "--sidecar",
            type=str,
            default=None,
            help="Sidecar path (default: <output>.meta.json)",
        )

    def perform(self, *args, **options):
        variant = options["variant"]
        if options["binary"] and variant != "set-cover":
            raise CommandError("--binary applies to set-cover only", returncode=EXIT_USAGE)
        data = self.read_input(options["instance"])

        if variant == "set-cover":
            inst = parse_instance(data, "set-cover")
            program = set_cover_to_ilp(inst, binary=options["binary"])
            extra = {"k_source": inst.universe_size}
        else:
            inst = parse_instance(data, "wvc")
            cover = vc_2approx(inst.graph)
            program = (wvc_to_milp if variant == "wvc-milp" else wvc_to_binary_ilp)(inst, cover)
            # |Y| is twice a maximal matching, and a matching bounds the cover number from below.
            extra = {"k_source": len(cover.vertices) // 2, **formulation_audit(inst, cover, program)}

        stats = compute_delta(program)
        sidecar = {
            **extra,
            "variant": variant,
            "format": options["format"],
            "m": program.num_constraints,
            "n": program.num_vars,
            "delta": stats.delta_A,
            "b_inf": stats.b_inf_norm,
        }
        output = options["output"]
        self.write_output(output, export_program(program, options["format"], fixed=options["fixed"]))
        sidecar_path = options["sidecar"] or f"{output}.meta.json"
        self.write_output(sidecar_path, (json.dumps(sidecar, sort_keys=True, indent=2) + "\n").encode("utf-8"))
        logger.info(f"reduced {variant}: m={sidecar['m']}, n={sidecar['n']}, delta={sidecar['delta']}")
        self.emit(sidecar)
