"""
Shared behaviour of the compact-ilp management commands.

Verdicts and reports go to stdout as one JSON object; notices go to stderr.
Library errors become ``CommandError`` with a stable exit code: 2 for usage,
parse and validation errors, 3 for exhausted budgets and 1 for a failed audit.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import AuditFailure, BudgetExceededError, CompactIlpError, EnumerationBudgetError
from core.utils.logging_utils import log_exceptions

logger = logging.getLogger(__name__)

EXIT_AUDIT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class JsonCommand(BaseCommand):
    """Base class: subclasses implement ``perform`` instead of ``handle``."""

    requires_system_checks: list = []

    def perform(self, *args: Any, **options: Any) -> None:
        raise NotImplementedError

    @log_exceptions(logger, expected=(CommandError, CompactIlpError, ValueError, KeyError, OSError))
    def handle(self, *args: Any, **options: Any) -> None:
        try:
            self.perform(*args, **options)
        except CommandError:
            raise
        except (EnumerationBudgetError, BudgetExceededError) as e:
            raise CommandError(str(e), returncode=EXIT_BUDGET) from e
        except AuditFailure as e:
            raise CommandError(f"audit failed: {e}", returncode=EXIT_AUDIT) from e
        except KeyError as e:
            raise CommandError(str(e.args[0]) if e.args else str(e), returncode=EXIT_USAGE) from e
        except (ValueError, OSError) as e:
            raise CommandError(str(e), returncode=EXIT_USAGE) from e

    def emit(self, payload: Dict[str, Any]) -> None:
        self.stdout.write(json.dumps(payload, sort_keys=True))

    def notice(self, message: str) -> None:
        self.stderr.write(message)

    @staticmethod
    def read_input(path: str) -> bytes:
        return Path(path).read_bytes()

    @staticmethod
    def write_output(path: str, data: bytes) -> None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
