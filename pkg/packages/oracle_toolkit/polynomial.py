"""Exact sparse (Laurent) polynomials for the symbolic side of the oracle.

Expansion works on packed integer keys: the exponent vector is stored as
sum_j e_j * 8^j with balanced digits, so multiplying monomials is integer
addition. Every factor of the product form has integer coefficients; the
power-of-two prefactor is applied once at the end.
"""
from __future__ import annotations
import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from src.algebra.encoding import AlgebraicFormula
from src.core.errors import NegativeExponent, NotMultilinear, TooLarge

logger = logging.getLogger(__name__)

MAX_EXPAND_VARIABLES = 16
MAX_INTERPOLATION_VARIABLES = 12

_BASE = 8
_HALF = _BASE // 2

Exponents = Tuple[int, ...]


@dataclass(frozen=True)
class SparsePolynomial:
    num_variables: int
    terms: Dict[Exponents, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: Fraction(v) for k, v in self.terms.items() if v != 0}
        for k in clean:
            if len(k) != self.num_variables:
                raise ValueError(f"exponent vector {k} does not have {self.num_variables} entries")
        object.__setattr__(self, "terms", clean)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.num_variables == other.num_variables and self.terms == other.terms

    def coefficient(self, exponents: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exponents), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.num_variables)

    def max_exponent(self) -> int:
        return max((max(k) for k in self.terms if k), default=0)

    def min_exponent(self) -> int:
        return min((min(k) for k in self.terms if k), default=0)

    def is_multilinear(self) -> bool:
        return all(e in (0, 1) for k in self.terms for e in k)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def evaluate(self, points) -> np.ndarray:
        """Float evaluation at the rows of a (k, n) array."""
        x = np.atleast_2d(np.asarray(points, dtype=np.complex128 if np.iscomplexobj(points) else np.float64))
        out = np.zeros(x.shape[0], dtype=x.dtype)
        for exps, coef in self.terms.items():
            mono = np.full(x.shape[0], float(coef), dtype=x.dtype)
            for j, e in enumerate(exps):
                if e:
                    mono = mono * x[:, j] ** e
            out += mono
        return out


# --- packed keys ---

def _pack(exps: Iterable[Tuple[int, int]]) -> int:
    key = 0
    for var, e in exps:
        key += e * _BASE ** (var - 1)
    return key


def _unpack(key: int, n: int) -> Exponents:
    out = []
    for _ in range(n):
        d = key % _BASE
        if d > _HALF:
            d -= _BASE
        out.append(d)
        key = (key - d) // _BASE
    return tuple(out)


def _clause_terms(cf) -> Dict[int, int]:
    # s * prod(x - 1) + 2^w
    terms: Dict[int, int] = {}
    w = cf.width
    for size in range(w + 1):
        for subset in itertools.combinations(cf.variables, size):
            key = _pack((v, 1) for v in subset)
            coef = cf.sign * (-1) ** (w - size)
            terms[key] = terms.get(key, 0) + coef
    terms[0] = terms.get(0, 0) + cf.constant
    return {k: c for k, c in terms.items() if c}


def _ior_terms(g) -> Dict[int, int]:
    # prod(e y + 1) + prod(-e y + 1): odd-size products cancel, even ones double
    step = -1 if g.inverse else 1
    occ = list(zip(g.variables, g.signs))
    terms: Dict[int, int] = {}
    for size in range(0, len(occ) + 1, 2):
        for subset in itertools.combinations(occ, size):
            key = _pack((v, step) for v, _ in subset)
            coef = 2
            for _, e in subset:
                coef *= e
            terms[key] = terms.get(key, 0) + coef
    return terms


def _multiply(a: Dict[int, int], b: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            out[k] = out.get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def expand(af: AlgebraicFormula) -> SparsePolynomial:
    """Fully distribute the product form into exact rational coefficients."""
    n = af.num_variables
    if n > MAX_EXPAND_VARIABLES:
        raise TooLarge(f"expansion limited to n <= {MAX_EXPAND_VARIABLES} (got n={n})")
    acc: Dict[int, int] = {0: 1}
    for cf in af.clause_factors:
        acc = _multiply(acc, _clause_terms(cf))
    for g in af.ior_factors:
        acc = _multiply(acc, _ior_terms(g))
    scale = Fraction(1, 2 ** af.prefactor_exponent)
    terms = {_unpack(k, n): c * scale for k, c in acc.items()}
    zero = (0,) * n
    terms[zero] = terms.get(zero, Fraction(0)) + af.constant_offset
    logger.debug("expanded n=%d into %d terms", n, len(terms))
    return SparsePolynomial(n, terms)


def idempotent_reduce(p: SparsePolynomial, variables: Optional[Iterable[int]] = None) -> SparsePolynomial:
    """Apply x_i^2 -> 1 to the given 1-based variables (all by default)."""
    if p.min_exponent() < 0:
        raise NegativeExponent("idempotent reduction needs nonnegative exponents")
    targets = set(range(p.num_variables)) if variables is None else {v - 1 for v in variables}
    out: Dict[Exponents, Fraction] = {}
    for exps, coef in p.terms.items():
        key = tuple(e % 2 if j in targets else e for j, e in enumerate(exps))
        out[key] = out.get(key, Fraction(0)) + coef
    return SparsePolynomial(p.num_variables, out)


def constant_of_inverse_expansion(p: SparsePolynomial) -> Fraction:
    """Constant term left once every non-constant monomial is sent to zero."""
    return p.constant_term


class InterpolationReport(BaseModel):
    passed: bool
    max_error: float
    constant_error: float
    samples: int

    def __bool__(self) -> bool:
        return self.passed


def interpolation_identity_check(
    p: SparsePolynomial, samples: int = 100, seed: int = 0, tol: float = 1e-9
) -> InterpolationReport:
    """Check p(x) = 2^-n sum_e p(e) prod(1 + e_j x_j) at random points of [-1,1]^n,
    and p(0) = 2^-n sum_e p(e)."""
    if not p.is_multilinear():
        raise NotMultilinear("interpolation identity needs exponents in {0, 1}")
    n = p.num_variables
    if n > MAX_INTERPOLATION_VARIABLES:
        raise TooLarge(f"interpolation check limited to n <= {MAX_INTERPOLATION_VARIABLES} (got n={n})")
    corners = np.array(list(itertools.product((-1.0, 1.0), repeat=n)), dtype=np.float64).reshape(-1, n)
    values = p.evaluate(corners)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-1.0, 1.0, size=(samples, n))
    lhs = p.evaluate(xs)
    weights = np.prod(1.0 + corners[None, :, :] * xs[:, None, :], axis=2)
    rhs = weights @ values / 2.0**n
    max_error = float(np.max(np.abs(lhs - rhs))) if samples else 0.0
    constant_error = abs(float(p.constant_term) - float(values.mean()))
    return InterpolationReport(
        passed=max_error <= tol and constant_error <= tol,
        max_error=max_error,
        constant_error=constant_error,
        samples=samples,
    )


# --- text format ---

def _format_term(exps: Exponents, coef: Fraction) -> str:
    parts = [f"{coef.numerator}/{coef.denominator}"]
    parts += [f"x{j}^{e}" for j, e in enumerate(exps, start=1) if e]
    return " ".join(parts)


def dump_polynomial(p: SparsePolynomial) -> str:
    return "".join(_format_term(k, c) + "\n" for k, c in p.sorted_terms())


_VAR = re.compile(r"^x(\d+)\^(-?\d+)$")


def parse_polynomial(text: str, num_variables: int) -> SparsePolynomial:
    terms: Dict[Exponents, Fraction] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, *monos = line.split()
        exps = [0] * num_variables
        for mono in monos:
            m = _VAR.match(mono)
            if not m:
                raise ValueError(f"line {lineno}: bad monomial {mono!r}")
            exps[int(m.group(1)) - 1] += int(m.group(2))
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + Fraction(head)
    return SparsePolynomial(num_variables, terms)
