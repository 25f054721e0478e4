"""
The differential gate: deciders, protocols and modelers must agree on every corpus entry.

Named ``check_corpus`` because ``check`` is Django's system-check command.
"""

import logging

from django.conf import settings
from django.core.management.base import CommandError

from core.management.base import EXIT_AUDIT, JsonCommand
from core.oracles.corpus import check_corpus, load_manifest

logger = logging.getLogger(__name__)


class Command(JsonCommand):
    help = "Check a corpus manifest (default: the shipped corpus) and print per-family pass counts."

    def add_arguments(self, parser):
        parser.add_argument("--corpus", type=str, default=None, help="Manifest path")
        parser.add_argument("--max-bits", type=int, default=None, help="Protocol enumeration limit")
        parser.add_argument("--workers", type=int, default=None)

    def perform(self, *args, **options):
        path = options["corpus"] or str(settings.COMPACT_ILP_DEFAULT_CORPUS)
        entries = load_manifest(path)
        report = check_corpus(entries, max_bits=options["max_bits"], workers=options["workers"])

        for family, tally in sorted(report.families.items()):
            self.notice(f"{family}: {tally.passed} passed, {tally.failed} failed, {tally.skipped} skipped")
        if not entries:
            self.notice(f"warning: {path} has no entries")
        self.emit({"corpus": path, **report.as_dict()})
        if not report.ok:
            raise CommandError(
                f"{len(report.failures)} mismatches; first: {report.failures[0]}", returncode=EXIT_AUDIT
            )
