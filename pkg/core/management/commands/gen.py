"""
Generate instance files, or a corpus manifest over a range of seeds.
"""

import logging

from django.core.management.base import CommandError

from core.management.base import EXIT_USAGE, JsonCommand
from core.oracles.corpus import CorpusEntry, dump_manifest
from core.oracles.deciders import decide_exact
from core.oracles.generators import GenSpec, generate
from core.oracles.instances import VARIANTS
from core.oracles.parsers import write_instance
from core.utils.config import setting

logger = logging.getLogger(__name__)

MODES = ("random", "planted-yes", "planted-no", "scaled")


class Command(JsonCommand):
    help = (
        "Generate one instance (to --output or stdout), or with --manifest a corpus manifest "
        "whose expected verdicts come from decide_exact."
    )

    def add_arguments(self, parser):
        parser.add_argument("--variant", choices=VARIANTS, required=True)
        parser.add_argument("--mode", choices=MODES, default="random")
        parser.add_argument("--n", type=int, default=6)
        parser.add_argument("--k", type=int, default=2)
        parser.add_argument("--r", type=int, default=2)
        parser.add_argument("--terminals", type=int, default=3)
        parser.add_argument("--sets", type=int, default=6)
        parser.add_argument("--density", type=float, default=0.4)
        parser.add_argument("--alphabet", type=int, default=2)
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--count", type=int, default=1, help="manifest: consecutive seeds")
        parser.add_argument("--output", "-o", type=str, default=None)
        parser.add_argument("--manifest", action="store_true", default=False)

    def perform(self, *args, **options):
        seed = options["seed"] if options["seed"] is not None else int(setting("COMPACT_ILP_DEFAULT_SEED", 7))
        if options["count"] < 1:
            raise CommandError("--count must be positive", returncode=EXIT_USAGE)
        fields = ("variant", "mode", "n", "k", "r", "terminals", "sets", "density", "alphabet")
        base = {name: options[name] for name in fields}
        # pydantic's ValidationError is a ValueError, so bad sizes exit with code 2.
        specs = [GenSpec(**base, seed=seed + i) for i in range(options["count"])]

        if not options["manifest"]:
            if options["count"] != 1:
                raise CommandError("--count needs --manifest", returncode=EXIT_USAGE)
            data = write_instance(generate(specs[0]))
            if options["output"]:
                self.write_output(options["output"], data)
                self.emit({"variant": specs[0].variant, "seed": seed, "output": options["output"]})
            else:
                self.stdout.write(data.decode("utf-8"), ending="")
            return

        entries = []
        for spec in specs:
            verdict = "yes" if decide_exact(generate(spec)) else "no"
            entries.append(
                CorpusEntry(
                    name=f"{spec.variant}-{spec.mode}-n{spec.n}-k{spec.k}-s{spec.seed}",
                    spec=spec,
                    expected=verdict,
                    provenance="decide_exact",
                )
            )
        data = dump_manifest(entries)
        if options["output"]:
            self.write_output(options["output"], data)
            self.emit({"entries": len(entries), "output": options["output"]})
        else:
            self.stdout.write(data.decode("utf-8"), ending="")
