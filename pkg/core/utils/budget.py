"""
Wall-clock budgets for long-running searches.
"""

import time
from dataclasses import dataclass, field

from core.exceptions import BudgetExceededError
from core.utils.config import setting


@dataclass
class Deadline:
    """
    A wall-clock cap checked cooperatively by search loops.

    ``budget_ms`` of 0 (or None) means unlimited.
    """

    budget_ms: int | None = None
    label: str = "search"
    started: float = field(default_factory=time.monotonic)
    checks: int = 0

    @classmethod
    def from_settings(cls, label: str = "search", budget_ms: int | None = None) -> "Deadline":
        if budget_ms is None:
            budget_ms = int(setting("COMPACT_ILP_BUDGET_MS", 0))
        return cls(budget_ms=budget_ms, label=label)

    @property
    def elapsed_ms(self) -> float:
        return (time.monotonic() - self.started) * 1000.0

    def check(self, every: int = 1024) -> None:
        """Raise BudgetExceededError once the budget is spent; polls the clock every ``every`` calls."""
        if not self.budget_ms:
            return
        self.checks += 1
        if self.checks % every:
            return
        if self.elapsed_ms > self.budget_ms:
            raise BudgetExceededError(
                f"{self.label} exceeded COMPACT_ILP_BUDGET_MS={self.budget_ms} "
                f"after {self.elapsed_ms:.0f} ms"
            )
