"""Lattice-sum model counter.

Every relaxed variable x_j becomes the root of unity w^(sum_ax z_j,ax m_ax mod l),
w = exp(2 pi i / l), and the inverse-relaxed product form is summed over
(m_1..m_d) in {1..l}^d. Each non-constant monomial has a nonzero integer
frequency of magnitude below l on some axis, so its sum vanishes and only
l^d * C survives. C = (2k - 2^n) / 2^n then gives the count k.

The lattice is walked as outer tuples (leading axes) times a precomputed
table of inner phases (trailing axes); one block is a batch of outer tuples
whose phases are the inner table shifted by the outer contribution mod l.
Each block is summed with math.fsum (correctly rounded), and block sums are
reduced in block order with compensated summation, so the result does not
depend on the thread count. A modulus at or below 1 + the largest axis sum
of |z| is scanned for aliasing first and refused unless forced.
"""
from __future__ import annotations
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

from src.algebra.encoding import AlgebraicFormula, apply_inverse_relaxation, encode, evaluate_factors
from src.core.errors import BudgetExceeded, DimensionMismatch, ResidualTooLarge
from src.core.utils import max_lattice_points
from src.counter.summation import ComplexAccumulator
from src.data.dimacs import CnfFormula
from src.relax.identity import relax
from src.spectrum.frequencies import (
    DEFAULT_ENUMERATION_LIMIT,
    FrequencyAssignment,
    FrequencyScheme,
    assign_frequencies,
    check_modulus,
)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-6
_BLOCK_POINTS = 1 << 18


class CountResult(BaseModel):
    constant_term: float
    count: int
    satisfiable: bool
    raw_sum_real: float
    raw_sum_imag: float
    lattice_size: int
    axes: int
    num_points: int
    imaginary_residual: float
    lattice_residual: float
    tolerance: float
    num_new_variables: int
    occurring_count: int
    free_variables: int = 0
    diagnostics: Dict[str, object] = Field(default_factory=dict)
    wall_time_seconds: Optional[float] = None

    @property
    def raw_sum(self) -> complex:
        return complex(self.raw_sum_real, self.raw_sum_imag)


def roots_of_unity_sum_check(t: int, l: int) -> complex:
    """sum_{m=1..l} exp(2 pi i t m / l), evaluated term by term with t m reduced mod l."""
    if l < 1:
        raise ValueError("l must be >= 1")
    k = (int(t) * np.arange(1, l + 1, dtype=np.int64)) % l
    return _block_total(np.exp(2j * np.pi * k / l))


def _roots(l: int) -> np.ndarray:
    k = np.arange(l, dtype=np.float64)
    return np.exp(2j * np.pi * k / l)


def _block_total(vals: np.ndarray) -> complex:
    return complex(math.fsum(vals.real.tolist()), math.fsum(vals.imag.tolist()))


def _axis_digits(start: int, stop: int, l: int, axes: int) -> np.ndarray:
    """Lattice coordinates 1..l of flat indices start..stop-1, last axis fastest."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, axes), dtype=np.int64)
    for ax in range(axes - 1, -1, -1):
        idx, r = np.divmod(idx, l)
        out[:, ax] = r + 1
    return out


def lattice_count(
    af: AlgebraicFormula,
    fa: FrequencyAssignment,
    modulus: Optional[int] = None,
    threads: int = 1,
    tolerance: float = DEFAULT_TOLERANCE,
    force: bool = False,
    max_points: Optional[int] = None,
    progress: bool = False,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> CountResult:
    if not af.inverse_relaxed:
        raise ValueError("lattice_count needs an inverse-relaxed formula")
    n = af.num_variables
    if fa.n != n:
        raise DimensionMismatch(f"frequency assignment covers {fa.n} variables, formula has {n}", stage="lattice")
    l = int(modulus if modulus is not None else fa.modulus)
    d = fa.axes
    points = l**d
    budget = max_points if max_points is not None else max_lattice_points()
    if points > budget and not force:
        raise BudgetExceeded(f"lattice has {points} points (l={l}, d={d}), budget {budget}; use --force")
    if not force:
        check_modulus(fa.integer_matrix(), l, limit=limit, threads=threads)

    z = fa.integer_matrix() % l
    roots = _roots(l)
    d_in = 0
    while d_in < d and l ** (d_in + 1) <= _BLOCK_POINTS:
        d_in += 1
    d_out = d - d_in
    inner = _axis_digits(0, l**d_in, l, d_in) if d_in else np.zeros((1, 0), dtype=np.int64)
    inner_phase = (inner @ z[:, d_out:].T if d_in else np.zeros((1, n), dtype=np.int64)) % l
    inner_phase = inner_phase.reshape(-1, n)
    n_outer = l**d_out
    per_block = max(1, _BLOCK_POINTS // inner_phase.shape[0])
    blocks = [(s, min(n_outer, s + per_block)) for s in range(0, n_outer, per_block)]
    logger.info("lattice sum: l=%d d=%d points=%d blocks=%d", l, d, points, len(blocks))

    def block_sum(block) -> complex:
        s, e = block
        if d_out:
            outer = _axis_digits(s, e, l, d_out)
            outer_phase = (outer @ z[:, :d_out].T) % l
        else:
            outer_phase = np.zeros((1, n), dtype=np.int64)
        phase = ((outer_phase[:, None, :] + inner_phase[None, :, :]) % l).reshape(-1, n)
        vals = evaluate_factors(
            af,
            lambda j: roots[phase[:, j - 1]],
            lambda j: roots[(-phase[:, j - 1]) % l],
        )
        return _block_total(vals)

    acc = ComplexAccumulator()
    bar = tqdm(total=len(blocks), disable=not progress, file=sys.stderr, desc="lattice")
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(block_sum, blocks):
                acc.add(part)
                bar.update(1)
    else:
        for block in blocks:
            acc.add(block_sum(block))
            bar.update(1)
    bar.close()

    s_f = acc.value
    constant = s_f.real / points
    imag_residual = abs(s_f.imag) / points
    occurring = int(round((constant + 1) * 2 ** (n - 1)))
    lattice_residual = abs(constant - (occurring / 2 ** (n - 1) - 1))
    n_occ = len(af.ior_factors)
    result = CountResult(
        constant_term=constant,
        count=max(occurring, 0) << af.free_variables,
        satisfiable=occurring >= 1,
        raw_sum_real=s_f.real,
        raw_sum_imag=s_f.imag,
        lattice_size=l,
        axes=d,
        num_points=points,
        imaginary_residual=imag_residual,
        lattice_residual=lattice_residual,
        tolerance=tolerance,
        num_new_variables=n,
        occurring_count=occurring,
        free_variables=af.free_variables,
    )
    logger.info("lattice C=%.12g k=%d residuals imag=%.3g lattice=%.3g", constant, result.count, imag_residual, lattice_residual)
    if imag_residual > tolerance or lattice_residual > tolerance:
        raise ResidualTooLarge(
            f"lattice sum off the count lattice (imag {imag_residual:.3g}, lattice {lattice_residual:.3g})",
            result=result,
        )
    if not 0 <= occurring <= 2**n_occ:
        raise ResidualTooLarge(
            f"recovered count {occurring} outside [0, 2^{n_occ}]; modulus {l} aliases",
            result=result,
        )
    return result


def count(
    cnf: CnfFormula,
    scheme: FrequencyScheme,
    multiplier: Optional[int] = None,
    modulus: Optional[int] = None,
    threads: int = 1,
    tolerance: float = DEFAULT_TOLERANCE,
    force: bool = False,
    max_points: Optional[int] = None,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    progress: bool = False,
    include_timing: bool = False,
) -> CountResult:
    """relax -> encode -> inverse relaxation -> frequencies -> lattice sum."""
    started = time.perf_counter()
    rf = relax(cnf)
    af = apply_inverse_relaxation(encode(rf))
    n = rf.num_new_variables
    fa, report = assign_frequencies(
        n, scheme, multiplier=multiplier, modulus=modulus, limit=limit, threads=threads
    )
    result = lattice_count(
        af, fa, modulus=modulus, threads=threads, tolerance=tolerance,
        force=force, max_points=max_points, progress=progress, limit=limit,
    )
    diagnostics = {
        "scheme": scheme.name,
        "num_variables": cnf.num_variables,
        "num_clauses": cnf.num_clauses,
        "clause_width": cnf.clause_width,
        "num_new_variables": n,
        "prefactor_exponent": af.prefactor_exponent,
        "min_max_frequency": report.min_max_frequency,
        "argmin_signs": report.argmin.as_csv() if report.argmin else None,
        "multiplier": fa.multiplier,
        "modulus": result.lattice_size,
        "integer_frequencies": [list(row) for row in fa.integer_freqs],
    }
    update = {"diagnostics": diagnostics}
    if include_timing:
        update["wall_time_seconds"] = time.perf_counter() - started
    return result.model_copy(update=update)
