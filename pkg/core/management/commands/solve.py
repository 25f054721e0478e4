"""
Decide feasibility of a program file with one of the three engines.
"""

import json
import logging

from django.core.management.base import CommandError

from core.ilp.formats import FORMATS, import_program
from core.ilp.forms import to_equality_form
from core.ilp.program import Sense
from core.management.base import EXIT_BUDGET, EXIT_USAGE, JsonCommand
from core.solvers.brute_force import brute_force_feasibility
from core.solvers.lattice import lattice_feasibility
from core.solvers.milp import milp_feasibility
from core.solvers.results import SolveResult, SolveStatus
from core.utils.budget import Deadline

logger = logging.getLogger(__name__)

ENGINES = ("brute", "lattice", "milp")


class Command(JsonCommand):
    help = "Solve a program: prints Feasible/Infeasible/BoundExhausted and writes the certificate."

    def add_arguments(self, parser):
        parser.add_argument("program", type=str, help="Program file")
        parser.add_argument("--format", choices=FORMATS, default="canonical-json")
        parser.add_argument("--engine", choices=ENGINES, default="lattice")
        parser.add_argument("--l1-cap", type=int, default=None, help="lattice: cap on the solution norm")
        parser.add_argument("--box", type=int, default=None, help="brute: cap on every variable")
        parser.add_argument("--budget-ms", type=int, default=None, help="Overrides COMPACT_ILP_BUDGET_MS")
        parser.add_argument(
            "--certificate",
            type=str,
            default=None,
            help="Certificate path (default: <program>.cert.json)",
        )

    def perform(self, *args, **options):
        for name in ("l1_cap", "box", "budget_ms"):
            if options[name] is not None and options[name] < 0:
                raise CommandError(f"--{name.replace('_', '-')} must be non-negative", returncode=EXIT_USAGE)
        program = import_program(self.read_input(options["program"]), options["format"])
        deadline = Deadline.from_settings(f"{options['engine']} solve", options["budget_ms"])

        engine = options["engine"]
        if engine == "lattice":
            result = self._lattice(program, options["l1_cap"], deadline)
        elif engine == "milp":
            result = milp_feasibility(program, deadline=deadline)
        else:
            box = options["box"]
            if box is None:
                if all(u is not None for u in program.upper):
                    box = max(program.upper, default=0)
                else:
                    raise CommandError(
                        "brute needs --box when a variable has no upper bound", returncode=EXIT_USAGE
                    )
            result = brute_force_feasibility(program, box, deadline=deadline)

        payload = result.as_dict()
        if result.feasible:
            path = options["certificate"] or f"{options['program']}.cert.json"
            self.write_output(path, (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8"))
            payload["certificate_file"] = path
        self.emit(payload)
        if result.status is SolveStatus.BOUND_EXHAUSTED:
            raise CommandError("search stopped at its cap before deciding", returncode=EXIT_BUDGET)

    def _lattice(self, program, l1_cap, deadline) -> SolveResult:
        if program.sense is Sense.EQ:
            return lattice_feasibility(program, l1_cap=l1_cap, deadline=deadline)
        self.notice(
            f"notice: converted to equality form with {program.num_constraints} slack variables; "
            f"the certificate lists the original {program.num_vars} variables"
        )
        result = lattice_feasibility(to_equality_form(program), l1_cap=l1_cap, deadline=deadline)
        if result.certificate is not None:
            result.certificate = result.certificate[: program.num_vars]
        result.stats["equality_form"] = True
        return result
