from __future__ import annotations
import itertools
from typing import Callable, Dict, List

from pydantic import BaseModel, Field

from src.algebra.encoding import enc_and, enc_and_n, enc_not, enc_or, enc_or_n

TRUE = 1
FALSE = -1


class AxiomReport(BaseModel):
    passed: bool
    checks: Dict[str, bool] = Field(default_factory=dict)
    failures: List[str] = Field(default_factory=list)


def _laws() -> Dict[str, Callable[[int, int, int], bool]]:
    a, o, n = enc_and, enc_or, enc_not
    return {
        "or_commutative": lambda f, g, h: o(f, g) == o(g, f),
        "and_commutative": lambda f, g, h: a(f, g) == a(g, f),
        "or_associative": lambda f, g, h: o(o(f, g), h) == o(f, o(g, h)),
        "and_associative": lambda f, g, h: a(a(f, g), h) == a(f, a(g, h)),
        "absorption_or": lambda f, g, h: o(a(f, g), g) == g,
        "absorption_and": lambda f, g, h: a(o(f, g), g) == g,
        "distributive_and_over_or": lambda f, g, h: a(f, o(g, h)) == o(a(f, g), a(f, h)),
        "distributive_or_over_and": lambda f, g, h: o(f, a(g, h)) == a(o(f, g), o(f, h)),
        "complement_or": lambda f, g, h: o(f, n(f)) == TRUE,
        "complement_and": lambda f, g, h: a(f, n(f)) == FALSE,
        "square_is_one": lambda f, g, h: f * f == 1,
        "nary_and_folds": lambda f, g, h: enc_and_n([f, g, h]) == a(a(f, g), h),
        "nary_or_folds": lambda f, g, h: enc_or_n([f, g, h]) == o(o(f, g), h),
    }


def boolean_axiom_suite() -> AxiomReport:
    """Check the connective encodings against the Boolean-algebra laws on every
    point of {+1,-1}^3."""
    checks: Dict[str, bool] = {}
    failures: List[str] = []
    for name, law in _laws().items():
        ok = True
        for f, g, h in itertools.product((TRUE, FALSE), repeat=3):
            if not law(f, g, h):
                ok = False
                failures.append(f"{name} at (f,g,h)=({f},{g},{h})")
        checks[name] = ok
    return AxiomReport(passed=not failures, checks=checks, failures=failures)
