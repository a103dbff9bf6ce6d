"""Identity relaxation: one fresh variable per literal occurrence plus
Identical-OR groups tying the copies of each original variable together.

A relaxed clause is the plain OR of its fresh variables; the polarity of the
original literal moves into the sign e of its IOR occurrence, so the copy
x = e * X for a consistent ("real") assignment.
"""
from __future__ import annotations
import logging
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.errors import DimensionMismatch
from src.data.dimacs import CnfFormula

logger = logging.getLogger(__name__)


class IorGroup(BaseModel):
    model_config = ConfigDict(frozen=True)

    original_variable: int = Field(..., ge=1)
    occurrences: Tuple[Tuple[int, int], ...] = Field(
        ..., description="(new_variable, sign) pairs, new variables 1-based and increasing"
    )

    @model_validator(mode="after")
    def _check(self) -> "IorGroup":
        if not self.occurrences:
            raise ValueError("IOR group needs at least one occurrence")
        news = [v for v, _ in self.occurrences]
        if any(b <= a for a, b in zip(news, news[1:])):
            raise ValueError("new-variable indices must be strictly increasing")
        if any(e not in (1, -1) for _, e in self.occurrences):
            raise ValueError("IOR signs must be +1 or -1")
        return self

    @property
    def r(self) -> int:
        return len(self.occurrences)

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(v for v, _ in self.occurrences)

    @property
    def signs(self) -> Tuple[int, ...]:
        return tuple(e for _, e in self.occurrences)


class RelaxedFormula(BaseModel):
    model_config = ConfigDict(frozen=True)

    clause_width: int
    num_new_variables: int
    clauses: Tuple[Tuple[int, ...], ...]
    ior_groups: Tuple[IorGroup, ...]
    num_original_variables: int = Field(..., description="declared N, including variables that never occur")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def num_occurring_variables(self) -> int:
        return len(self.ior_groups)

    @property
    def free_variables(self) -> int:
        return self.num_original_variables - len(self.ior_groups)


def relax(cnf: CnfFormula) -> RelaxedFormula:
    width = cnf.clause_width
    clauses: List[Tuple[int, ...]] = []
    groups: Dict[int, List[Tuple[int, int]]] = {}
    for j, clause in enumerate(cnf.clauses):
        fresh = []
        for t, lit in enumerate(clause, start=1):
            x = width * j + t
            fresh.append(x)
            groups.setdefault(lit.variable, []).append((x, lit.sign))
        clauses.append(tuple(fresh))
    ior = tuple(
        IorGroup(original_variable=v, occurrences=tuple(groups[v])) for v in sorted(groups)
    )
    rf = RelaxedFormula(
        clause_width=width,
        num_new_variables=width * cnf.num_clauses,
        clauses=tuple(clauses),
        ior_groups=ior,
        num_original_variables=cnf.num_variables,
    )
    logger.debug("relaxed M=%d into n=%d variables, %d IOR groups", cnf.num_clauses, rf.num_new_variables, len(ior))
    return rf


def _as_matrix(rf: RelaxedFormula, assignments) -> np.ndarray:
    a = np.asarray(assignments, dtype=np.int8)
    if a.ndim == 1:
        a = a[None, :]
    if a.shape[1] != rf.num_new_variables:
        raise DimensionMismatch(
            f"assignment has {a.shape[1]} entries, relaxed formula has n={rf.num_new_variables}",
            stage="relax",
        )
    return a


def eval_relaxed_many(rf: RelaxedFormula, assignments) -> np.ndarray:
    """Vectorized eval_relaxed over the rows of a (k, n) matrix of +/-1 values."""
    a = _as_matrix(rf, assignments)
    ok = np.ones(a.shape[0], dtype=bool)
    for clause in rf.clauses:
        cols = [x - 1 for x in clause]
        ok &= (a[:, cols] == 1).any(axis=1)
    for g in rf.ior_groups:
        cols = [x - 1 for x in g.variables]
        signed = a[:, cols] * np.asarray(g.signs, dtype=np.int8)
        ok &= (signed == signed[:, :1]).all(axis=1)
    return np.where(ok, 1, -1).astype(np.int8)


def eval_relaxed(rf: RelaxedFormula, assignment) -> int:
    return int(eval_relaxed_many(rf, assignment)[0])


def real_assignment(rf: RelaxedFormula, original) -> np.ndarray:
    """Lift a +/-1 assignment over the N original variables to the relaxed
    variables (x = e * X)."""
    orig = np.asarray(original, dtype=np.int8)
    if orig.shape[-1] != rf.num_original_variables:
        raise DimensionMismatch(
            f"assignment has {orig.shape[-1]} entries, formula declares N={rf.num_original_variables}",
            stage="relax",
        )
    out = np.zeros(orig.shape[:-1] + (rf.num_new_variables,), dtype=np.int8)
    for g in rf.ior_groups:
        for x, e in g.occurrences:
            out[..., x - 1] = e * orig[..., g.original_variable - 1]
    return out
