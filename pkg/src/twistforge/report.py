"""Verification reports: failures are data, not exceptions."""
from __future__ import annotations

from dataclasses import dataclass, field

from .rational import q_str

MAX_LISTED_TERMS = 4


def diff_summary(diff) -> list:
    """First few nonzero coefficients of a difference tensor or series."""
    items = sorted(diff.terms.items())[:MAX_LISTED_TERMS]
    return [[list(k), q_str(c)] for k, c in items]


@dataclass
class Report:
    check: str
    grid: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    labels: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    children: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(c.passed for c in self.children)

    def fail(self, **info):
        self.failures.append(info)

    def to_dict(self) -> dict:
        out = {"check": self.check, "passed": self.passed}
        if self.labels:
            out["labels"] = dict(self.labels)
        out["grid"] = [list(g) if isinstance(g, tuple) else g for g in self.grid]
        out["failures"] = self.failures
        if self.notes:
            out["notes"] = list(self.notes)
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def summary_lines(self, indent=0, inherited=None) -> list:
        """Indented text lines; labels of enclosing reports carry down to each line."""
        tag = "PASS" if self.passed else "FAIL"
        labels = {**(inherited or {}), **self.labels}
        label = "".join(f" {k}={v}" for k, v in labels.items())
        lines = [f"{'  ' * indent}[{tag}] {self.check}{label} ({len(self.grid)} cases, {len(self.failures)} failures)"]
        for note in self.notes:
            lines.append(f"{'  ' * indent}    note: {note}")
        for f in self.failures[:3]:
            lines.append(f"{'  ' * indent}    failure: {f}")
        for c in self.children:
            lines.extend(c.summary_lines(indent + 1, labels))
        return lines

    def __bool__(self):
        return self.passed
