"""Ground-truth model counters used to cross-check the lattice counter."""
from __future__ import annotations
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.algebra.encoding import apply_inverse_relaxation, encode
from src.core.errors import TooLarge
from src.data.dimacs import CnfFormula
from src.relax.identity import RelaxedFormula, eval_relaxed_many, relax

from .polynomial import (
    SparsePolynomial,
    constant_of_inverse_expansion,
    dump_polynomial,
    expand,
    idempotent_reduce,
    interpolation_identity_check,
    parse_polynomial,
)

logger = logging.getLogger(__name__)

MAX_ENUMERATION_VARIABLES = 25
_CHUNK = 1 << 20


class OracleResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    method: str
    count: int = Field(..., ge=0)
    constant_term: Fraction
    total_assignments: int
    num_new_variables: int
    free_variables: int = 0


def constant_for_count(occurring_count: int, n: int) -> Fraction:
    """(2k - 2^n) / 2^n, with k counted over the occurring variables."""
    return Fraction(2 * occurring_count - 2**n, 2**n)


def count_from_constant(constant: Fraction, n: int) -> int:
    k = (constant + 1) * 2 ** (n - 1)
    if k.denominator != 1:
        raise ValueError(f"constant term {constant} is not on the count lattice for n={n}")
    return int(k)


def _bits(start: int, stop: int, width: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(width, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(bool)


def _count_range(clauses, width: int, start: int, stop: int) -> int:
    bits = _bits(start, stop, width)
    sat = np.ones(stop - start, dtype=bool)
    for clause in clauses:
        hit = np.zeros_like(sat)
        for lit in clause:
            col = bits[:, abs(lit) - 1]
            hit |= col if lit > 0 else ~col
        sat &= hit
    return int(sat.sum())


def count_by_enumeration(cnf: CnfFormula, threads: int = 1) -> OracleResult:
    """Count satisfying assignments over all 2^N original assignments."""
    big_n = cnf.num_variables
    if big_n > MAX_ENUMERATION_VARIABLES:
        raise TooLarge(f"enumeration limited to N <= {MAX_ENUMERATION_VARIABLES} (got N={big_n})")
    clauses = cnf.as_int_clauses()
    total = 1 << big_n
    ranges = [(s, min(total, s + _CHUNK)) for s in range(0, total, _CHUNK)]
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            count = sum(pool.map(lambda r: _count_range(clauses, big_n, *r), ranges))
    else:
        count = sum(_count_range(clauses, big_n, s, e) for s, e in ranges)
    rf = relax(cnf)
    n = rf.num_new_variables
    occurring = count >> rf.free_variables
    result = OracleResult(
        method="enumeration",
        count=count,
        constant_term=constant_for_count(occurring, n),
        total_assignments=total,
        num_new_variables=n,
        free_variables=rf.free_variables,
    )
    logger.info("enumeration: N=%d k=%d", big_n, count)
    return result


def count_relaxed_by_enumeration(rf: RelaxedFormula) -> int:
    """Number of +/-1 assignments to the n relaxed variables that satisfy
    both the clauses and every IOR group."""
    n = rf.num_new_variables
    if n > MAX_ENUMERATION_VARIABLES:
        raise TooLarge(f"enumeration limited to n <= {MAX_ENUMERATION_VARIABLES} (got n={n})")
    total = 1 << n
    count = 0
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        signs = np.where(_bits(start, stop, n), 1, -1).astype(np.int8)
        count += int((eval_relaxed_many(rf, signs) == 1).sum())
    return count


def _from_constant(method: str, cnf: CnfFormula, rf: RelaxedFormula, constant: Fraction) -> OracleResult:
    occurring = count_from_constant(constant, rf.num_new_variables)
    return OracleResult(
        method=method,
        count=occurring << rf.free_variables,
        constant_term=constant,
        total_assignments=1 << cnf.num_variables,
        num_new_variables=rf.num_new_variables,
        free_variables=rf.free_variables,
    )


def count_by_expansion(cnf: CnfFormula) -> OracleResult:
    """Expand the plain product form, reduce x^2 -> 1, read the constant."""
    rf = relax(cnf)
    reduced = idempotent_reduce(expand(encode(rf)))
    return _from_constant("expansion", cnf, rf, reduced.constant_term)


def count_by_inverse_expansion(cnf: CnfFormula) -> OracleResult:
    """Expand the inverse-relaxed product form and read its constant directly."""
    rf = relax(cnf)
    poly = expand(apply_inverse_relaxation(encode(rf)))
    return _from_constant("inverse_expansion", cnf, rf, constant_of_inverse_expansion(poly))


__all__ = [
    "OracleResult",
    "SparsePolynomial",
    "constant_for_count",
    "constant_of_inverse_expansion",
    "count_by_enumeration",
    "count_by_expansion",
    "count_by_inverse_expansion",
    "count_from_constant",
    "count_relaxed_by_enumeration",
    "dump_polynomial",
    "expand",
    "idempotent_reduce",
    "interpolation_identity_check",
    "parse_polynomial",
]
