"""Shared validation report types.

Graph, matrix, policy, and scenario checks all report problems the same
way: a flat list of issues, split into errors (the artifact is unusable)
and warnings (suspicious but workable).  Checks never raise on bad
content; they describe it, so callers can collect everything in one pass.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Issue:
    """One validation finding.

    ``code`` is a stable machine-readable tag (e.g. ``cycle``,
    ``duplicate-edge``), ``message`` the human-readable description
    naming the offending elements, and ``location`` optional context
    such as a scenario field path (``edges[3]``) or a source line.
    """

    code: str
    message: str
    location: str = ""

    def render(self) -> str:
        if self.location:
            return f"{self.location}: [{self.code}] {self.message}"
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code: str, message: str, location: str = "") -> None:
        self.errors.append(Issue(code, message, location))

    def warn(self, code: str, message: str, location: str = "") -> None:
        self.warnings.append(Issue(code, message, location))

    def extend(self, other: "ValidationReport") -> None:
        self.errors.extend(other.errors)
        self.warnings.extend(other.warnings)

    def render(self) -> str:
        lines = [f"error: {i.render()}" for i in self.errors]
        lines += [f"warning: {i.render()}" for i in self.warnings]
        return "\n".join(lines)
