"""Structured verdicts for inequality and identity checks.

A report separates 'fails' from 'below numerical resolution': the verdict is
three-way, decided against the sum of the declared error budgets.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

__all__ = ["VerificationReport", "verdict_leq", "verdict_geq"]


def verdict_leq(lhs: float, rhs: float, budget: float) -> str:
    """Verdict for a statement 'lhs <= rhs' with a combined error budget."""
    if lhs <= rhs - budget:
        return "holds"
    if abs(lhs - rhs) <= budget:
        return "inconclusive"
    return "fails"


def verdict_geq(lhs: float, rhs: float, budget: float) -> str:
    """Verdict for a statement 'lhs >= rhs' with a combined error budget."""
    return verdict_leq(rhs, lhs, budget)


@dataclass
class VerificationReport:
    statement: str
    params: dict = field(default_factory=dict)
    lhs: float = 0.0
    rhs: float = 0.0
    margin: float = 0.0
    budgets: dict = field(default_factory=dict)
    verdict: str = "inconclusive"
    notes: list = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def combined_budget(self) -> float:
        return float(sum(self.budgets.values()))

    def decide_leq(self) -> "VerificationReport":
        self.margin = self.rhs - self.lhs
        self.verdict = verdict_leq(self.lhs, self.rhs, self.combined_budget)
        return self

    def decide_geq(self) -> "VerificationReport":
        self.margin = self.lhs - self.rhs
        self.verdict = verdict_geq(self.lhs, self.rhs, self.combined_budget)
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        kwargs.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kwargs)
