"""Check records shared by the verifiers and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """One verified statement.

    ``deviation`` is the worst residual observed (absolute or relative, as the
    producing verifier documents); ``count`` is how many cases were examined.
    ``witness`` names the first failing case, if any.
    """

    name: str
    anchor: str
    passed: bool
    deviation: float = 0.0
    count: int = 0
    witness: tuple | None = None
    detail: str = ""

    def __post_init__(self):
        if not self.anchor:
            raise ValueError(f"check {self.name!r} needs a non-empty anchor")


@dataclass
class IdentityReport:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def format_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"[{status}] {c.name:<28} {c.anchor:<44} dev={c.deviation:.3e} n={c.count}"
            if c.witness is not None:
                line += f" witness={c.witness}"
            if c.detail:
                line += f" {c.detail}"
            lines.append(line)
        return lines

    def __str__(self) -> str:
        head = f"{self.title}: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head, *self.format_lines()])
