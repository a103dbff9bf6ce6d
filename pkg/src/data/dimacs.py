"""DIMACS CNF reading and writing.

Only pure 2-SAT or pure 3-SAT instances are accepted. Repeated literals and
tautological clauses are kept as written; the relaxation renames every
occurrence on its own.
"""
from __future__ import annotations
import logging
from typing import Iterable, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.errors import (
    ClauseCountMismatch,
    ClauseWidthUnsupported,
    CnfParseError,
    MissingHeader,
    MixedWidths,
    VariableOutOfRange,
)

logger = logging.getLogger(__name__)

SUPPORTED_WIDTHS = (2, 3)


class Literal(BaseModel):
    model_config = ConfigDict(frozen=True)

    variable: int = Field(..., ge=1, description="1-based original variable index")
    positive: bool = Field(True, description="False for a negated occurrence")

    @property
    def sign(self) -> int:
        return 1 if self.positive else -1

    def to_int(self) -> int:
        return self.variable if self.positive else -self.variable

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        return cls(variable=abs(lit), positive=lit > 0)


class CnfFormula(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_variables: int = Field(..., ge=1)
    clauses: Tuple[Tuple[Literal, ...], ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "CnfFormula":
        if not self.clauses:
            raise ClauseCountMismatch("formula has no clauses")
        widths = set()
        for j, clause in enumerate(self.clauses, start=1):
            if len(clause) not in SUPPORTED_WIDTHS:
                raise ClauseWidthUnsupported(
                    f"clause {j} has width {len(clause)}; only 2 or 3 supported"
                )
            widths.add(len(clause))
            for lit in clause:
                if lit.variable > self.num_variables:
                    raise VariableOutOfRange(
                        f"clause {j}: variable {lit.variable} exceeds declared N={self.num_variables}"
                    )
        if len(widths) > 1:
            raise MixedWidths(f"clause widths {sorted(widths)} mixed in one instance")
        return self

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def clause_width(self) -> int:
        return len(self.clauses[0])

    def occurring_variables(self) -> List[int]:
        return sorted({lit.variable for clause in self.clauses for lit in clause})

    def as_int_clauses(self) -> List[List[int]]:
        return [[lit.to_int() for lit in clause] for clause in self.clauses]

    @classmethod
    def from_int_clauses(cls, num_variables: int, clauses: Iterable[Iterable[int]]) -> "CnfFormula":
        return cls(
            num_variables=num_variables,
            clauses=tuple(tuple(Literal.from_int(x) for x in c) for c in clauses),
        )


def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("%"):
            # SATLIB files end with a `%` line followed by a stray `0`
            return
        if stripped.startswith("p"):
            yield lineno, "header", stripped.split()
            continue
        for tok in stripped.split():
            yield lineno, "lit", tok


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text into a CnfFormula."""
    header = None
    clauses: List[List[int]] = []
    current: List[int] = []
    for lineno, kind, payload in _tokens(text):
        if kind == "header":
            if header is not None:
                raise CnfParseError(f"line {lineno}: duplicate problem line")
            if len(payload) != 4 or payload[1] != "cnf":
                raise MissingHeader(f"line {lineno}: malformed problem line {' '.join(payload)!r}")
            try:
                header = (int(payload[2]), int(payload[3]))
            except ValueError:
                raise MissingHeader(f"line {lineno}: non-integer counts in problem line") from None
            continue
        if header is None:
            raise MissingHeader(f"line {lineno}: clause data before `p cnf N M` header")
        try:
            lit = int(payload)
        except ValueError:
            raise CnfParseError(f"line {lineno}: bad literal {payload!r}") from None
        if lit == 0:
            clauses.append(current)
            current = []
            continue
        if abs(lit) > header[0]:
            raise VariableOutOfRange(
                f"line {lineno}: variable {abs(lit)} exceeds declared N={header[0]}"
            )
        current.append(lit)
    if header is None:
        raise MissingHeader("no `p cnf N M` header found")
    if current:
        clauses.append(current)
    num_variables, num_clauses = header
    if len(clauses) != num_clauses:
        raise ClauseCountMismatch(f"header declares {num_clauses} clauses, found {len(clauses)}")
    cnf = CnfFormula.from_int_clauses(num_variables, clauses)
    logger.debug("parsed CNF N=%d M=%d width=%d", num_variables, num_clauses, cnf.clause_width)
    return cnf


def load_dimacs(path: str) -> CnfFormula:
    with open(path) as f:
        return parse_dimacs(f.read())


def to_dimacs(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.num_variables} {cnf.num_clauses}"]
    for clause in cnf.as_int_clauses():
        lines.append(" ".join(str(x) for x in clause) + " 0")
    return "\n".join(lines) + "\n"
