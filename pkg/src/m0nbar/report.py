"""Structured pass/fail records for identity and cross-validation checks."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of one exact check.

    ``witness`` carries the first failing coefficient or value when the
    check fails; a passing report always has an empty witness.
    """

    name: str
    params: tuple
    passed: bool
    witness: str = ""
    notes: str = ""

    def __post_init__(self):
        if self.passed and self.witness:
            raise ValueError("a passing report cannot carry a witness")

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        head = f"{status} {self.name}{self.params!r}"
        if self.witness:
            head += f" witness: {self.witness}"
        if self.notes:
            head += f" [{self.notes}]"
        return head


def combine(name: str, params: tuple, reports: list[VerifyReport]) -> VerifyReport:
    """Aggregate subreports: passes iff all pass; first failure is the witness."""
    for r in reports:
        if not r.passed:
            return VerifyReport(name, params, False, witness=str(r))
    return VerifyReport(name, params, True)
