"""Elementary-algebraic product form of a relaxed CNF.

Truth values are +1 (true) and -1 (false). The connectives are

    f AND g  = 1/2 (f+1)(g+1) - 1
    f OR g   = -1/2 (f-1)(g-1) + 1
    NOT f    = -f

and their r-ary forms 1/2^(r-1) prod(f+1) - 1 and 1/(-2)^(r-1) prod(f-1) + 1.
Composing the top-level AND over M clauses and N IOR groups and folding every
power of two into one prefactor gives

    f = 2^-(2n-1) * prod_clauses (s * prod(x-1) + 2^w)
                  * prod_groups (prod(e x + 1) + prod(-e x + 1)) - 1

with s = (-1)^(w-1), w the clause width and n = w*M the relaxed variable
count (6M-1 for 3-SAT). The product is never expanded here.
"""
from __future__ import annotations
import logging
from typing import Callable, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.core.errors import AlreadyRelaxed, DimensionMismatch
from src.relax.identity import RelaxedFormula

logger = logging.getLogger(__name__)


# --- connectives on +/-1 values (scalars or numpy arrays) ---

def enc_and(f, g):
    return 0.5 * (f + 1) * (g + 1) - 1


def enc_or(f, g):
    return -0.5 * (f - 1) * (g - 1) + 1


def enc_not(f):
    return -f


def enc_and_n(values: Sequence):
    prod = 1
    for f in values:
        prod = prod * (f + 1)
    return prod / 2 ** (len(values) - 1) - 1


def enc_or_n(values: Sequence):
    prod = 1
    for f in values:
        prod = prod * (f - 1)
    return prod / (-2) ** (len(values) - 1) + 1


def enc_ior(values: Sequence, signs: Sequence[int]):
    """Identical OR: +1 iff all e*x agree."""
    pos = 1
    neg = 1
    for x, e in zip(values, signs):
        pos = pos * (e * x + 1)
        neg = neg * (-e * x + 1)
    return (pos + neg) / 2 ** (len(values) - 1) - 1


# --- product form ---

class ClauseFactor(BaseModel):
    """s * prod(x - 1) + 2^w over the clause's fresh variables."""

    model_config = ConfigDict(frozen=True)

    variables: Tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.variables)

    @property
    def sign(self) -> int:
        return -1 if self.width % 2 == 0 else 1

    @property
    def constant(self) -> int:
        return 2 ** self.width


class IorFactor(BaseModel):
    """prod(e y + 1) + prod(-e y + 1), y = x or 1/x when `inverse` is set."""

    model_config = ConfigDict(frozen=True)

    original_variable: int
    variables: Tuple[int, ...]
    signs: Tuple[int, ...]
    inverse: bool = False


class AlgebraicFormula(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_variables: int = Field(..., description="n, relaxed variable count")
    prefactor_exponent: int = Field(..., description="f = 2^-exp * prod(factors) + constant_offset")
    clause_factors: Tuple[ClauseFactor, ...]
    ior_factors: Tuple[IorFactor, ...]
    constant_offset: int = -1
    free_variables: int = 0

    @property
    def inverse_relaxed(self) -> bool:
        return bool(self.ior_factors) and all(g.inverse for g in self.ior_factors)

    @property
    def factor_count(self) -> int:
        return len(self.clause_factors) + len(self.ior_factors)

    @property
    def magnitude_bound(self) -> float:
        """Upper bound on |f| at unit-magnitude points."""
        return 2.0 ** (len(self.clause_factors) + len(self.ior_factors) + 1) + 1


class ComplexPoint:
    """n unit-magnitude complex values substituted for the x_j."""

    __slots__ = ("values",)

    def __init__(self, values, atol: float = 1e-12):
        arr = np.asarray(values, dtype=np.complex128).ravel()
        if arr.size and np.max(np.abs(np.abs(arr) - 1.0)) > atol:
            raise ValueError("ComplexPoint entries must have unit magnitude")
        self.values = arr

    def __len__(self) -> int:
        return self.values.size


def encode(rf: RelaxedFormula) -> AlgebraicFormula:
    w = rf.clause_width
    m = rf.num_clauses
    groups = rf.ior_groups
    # 2^-(M+N-1) from the top-level AND, 2^-(w-1) per clause, 2^-(r-1) per group
    exponent = (m + len(groups) - 1) + m * (w - 1) + sum(g.r - 1 for g in groups)
    af = AlgebraicFormula(
        num_variables=rf.num_new_variables,
        prefactor_exponent=exponent,
        clause_factors=tuple(ClauseFactor(variables=c) for c in rf.clauses),
        ior_factors=tuple(
            IorFactor(original_variable=g.original_variable, variables=g.variables, signs=g.signs)
            for g in groups
        ),
        free_variables=rf.free_variables,
    )
    logger.debug("encoded %d factors, prefactor 2^-%d", af.factor_count, exponent)
    return af


def apply_inverse_relaxation(af: AlgebraicFormula) -> AlgebraicFormula:
    if any(g.inverse for g in af.ior_factors):
        raise AlreadyRelaxed("IOR part already uses inverse elements")
    return af.model_copy(
        update={"ior_factors": tuple(g.model_copy(update={"inverse": True}) for g in af.ior_factors)}
    )


Accessor = Callable[[int], np.ndarray]


def evaluate_factors(af: AlgebraicFormula, value_of: Accessor, inverse_of: Accessor) -> np.ndarray:
    """Vectorized product-form evaluation.

    `value_of(j)` / `inverse_of(j)` return the column of x_j / 1/x_j values
    (1-based j) for a batch of points.
    """
    prod = None
    for cf in af.clause_factors:
        term = None
        for x in cf.variables:
            col = value_of(x) - 1
            term = col if term is None else term * col
        term = cf.sign * term + cf.constant
        prod = term if prod is None else prod * term
    for g in af.ior_factors:
        get = inverse_of if g.inverse else value_of
        pos = None
        neg = None
        for x, e in zip(g.variables, g.signs):
            y = get(x)
            p = e * y + 1
            q = -e * y + 1
            pos = p if pos is None else pos * p
            neg = q if neg is None else neg * q
        term = pos + neg
        prod = term if prod is None else prod * term
    return np.ldexp(1.0, -af.prefactor_exponent) * prod + af.constant_offset


def evaluate(af: AlgebraicFormula, point) -> complex:
    if not isinstance(point, ComplexPoint):
        point = ComplexPoint(point)
    if len(point) != af.num_variables:
        raise DimensionMismatch(
            f"point has {len(point)} entries, formula has n={af.num_variables}"
        )
    vals = point.values
    inv = 1.0 / vals
    out = evaluate_factors(af, lambda j: vals[j - 1 : j], lambda j: inv[j - 1 : j])
    return complex(out[0])
