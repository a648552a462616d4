"""Uniform pass/fail records shared by the verification routines and the CLI."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .scalars import ScalarExpr

# Generic point used to put a size on a failed exact identity.
REFERENCE_BINDINGS = {"alpha": 1.3, "eps": 0.7, "R": 1.9, "kappa": 0.6, "lam": 0.4}


@dataclass
class CheckReport:
    check: str
    params: dict
    status: str
    max_deviation: float
    details: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        d = asdict(self)
        if not d["details"]:
            d.pop("details")
        if not d["extra"]:
            d.pop("extra")
        return d


def _size(x) -> float:
    if isinstance(x, ScalarExpr):
        return abs(x.eval(REFERENCE_BINDINGS))
    # NCPoly: largest coefficient
    return max((abs(c.eval(REFERENCE_BINDINGS)) for c in x.terms().values()), default=0.0)


def exact_report(check: str, params: dict, lhs, rhs) -> CheckReport:
    """Compare two exact objects; a failure records their difference."""
    diff = lhs - rhs
    if diff.is_zero():
        return CheckReport(check, params, "pass", 0.0)
    return CheckReport(
        check,
        params,
        "fail",
        _size(diff),
        details=f"lhs = {lhs}; rhs = {rhs}",
    )


def numeric_report(check: str, params: dict, deviation: float, tol: float, details: str = "") -> CheckReport:
    return CheckReport(check, params, "pass" if deviation <= tol else "fail", float(deviation), details)
