"""
Operation counters for the verifier-side data structures.
"""

from collections import Counter
from typing import Dict, Iterable, Optional


class OpCounter:
    """
    Monotone per-operation tallies.

    ``steps`` counts elementary work inside a structure and is kept apart from
    the public operation names, which are what call budgets are stated in.
    """

    STEPS = "steps"

    def __init__(self) -> None:
        self._counts: Counter = Counter()

    def tick(self, name: str, amount: int = 1) -> None:
        self._counts[name] += amount

    def step(self, amount: int = 1) -> None:
        self._counts[self.STEPS] += amount

    def __getitem__(self, name: str) -> int:
        return self._counts[name]

    @property
    def steps(self) -> int:
        return self._counts[self.STEPS]

    def calls(self, names: Optional[Iterable[str]] = None) -> int:
        """Number of public operations, optionally restricted to ``names``."""
        if names is not None:
            return sum(self._counts[n] for n in names)
        return sum(v for k, v in self._counts.items() if k != self.STEPS)

    def as_dict(self) -> Dict[str, int]:
        return dict(sorted(self._counts.items()))

    def reset(self) -> None:
        self._counts.clear()
