"""Shared search plumbing: budgets, deadlines, cancellation, run accounting.

Every engine checks one SearchLimits object between playouts.  A search
stops early when the wall-clock deadline passes, the playout budget runs
out, or the target score is reached; partial results stay valid because
engines fold child outcomes in before checking.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class SearchLimits:
    """Mutable run-scoped budget tracker shared down the recursion."""

    deadline: Optional[float] = None  # absolute time.perf_counter() value
    max_playouts: Optional[int] = None
    target: Optional[float] = None
    playouts: int = 0
    best_score: float = float("-inf")
    cancelled: bool = False

    @classmethod
    def for_run(
        cls,
        timeout_secs: Optional[float] = None,
        max_playouts: Optional[int] = None,
        target: Optional[float] = None,
    ) -> "SearchLimits":
        deadline = None
        if timeout_secs is not None:
            deadline = time.perf_counter() + timeout_secs
        return cls(deadline=deadline, max_playouts=max_playouts, target=target)

    def charge_playout(self) -> None:
        self.playouts += 1

    def note_best(self, score: float) -> None:
        if score > self.best_score:
            self.best_score = score
        if self.target is not None and score >= self.target:
            self.cancelled = True

    def checkpoint(self) -> bool:
        """Refresh and return the cancelled flag; call between playouts."""
        if self.cancelled:
            return True
        if self.max_playouts is not None and self.playouts >= self.max_playouts:
            self.cancelled = True
        elif self.deadline is not None and time.perf_counter() >= self.deadline:
            self.cancelled = True
        return self.cancelled


def unlimited() -> SearchLimits:
    return SearchLimits()
