from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class PropertyReport:
    """Outcome of one property suite.

    ``passed`` iff ``worst_violation <= tolerance`` and every sub-report passed.
    Report-only suites (``assertable=False``) always count as passed and never
    affect an exit code.
    """

    property: str
    samples: int
    worst_violation: float
    tolerance: float
    seed: int | None = None
    assertable: bool = True
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    parts: list["PropertyReport"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if not self.assertable:
            return True
        return bool(self.worst_violation <= self.tolerance) and all(p.passed for p in self.parts)

    def as_dict(self) -> dict:
        return {
            "property": self.property,
            "samples": self.samples,
            "worst_violation": float(self.worst_violation),
            "tolerance": float(self.tolerance),
            "seed": self.seed,
            "assertable": self.assertable,
            "passed": self.passed,
            "notes": list(self.notes),
            "details": self.details,
            "parts": [p.as_dict() for p in self.parts],
        }

    def line(self) -> str:
        tag = "INFO" if not self.assertable else ("PASS" if self.passed else "FAIL")
        return (f"[{tag}] {self.property}: worst={self.worst_violation:.3e} "
                f"tol={self.tolerance:.1e} n={self.samples}")


def merge(name: str, parts: list[PropertyReport], seed: int | None = None) -> PropertyReport:
    """Bundle sub-reports; the bundle's violation is the largest assertable one."""
    assertable = [p for p in parts if p.assertable]
    worst = max((p.worst_violation for p in assertable), default=0.0)
    tol = max((p.tolerance for p in assertable), default=0.0)
    return PropertyReport(name, sum(p.samples for p in parts), worst, tol,
                          seed=seed, parts=list(parts))
