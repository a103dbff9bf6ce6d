"""Frequency assignments for the trigonometric substitution and their
integerization.

Variable j (1-based) gets the sines

    a_j = sin((u+j) p)          b_j = sin((u+j)(p+h))
    c_j = sin((u+j)(p+v))       d_j = sin((u+j)(p+v+h))

of which the first `axes` are used. For a sign vector e in {-1,0,1}^n the
axis sums A = sum e_j a_j, ... form its frequency tuple; the minimal maximum
frequency (m.m.f) is min over nonzero e of max over axes |sum|.

The scan splits the variables into a leading and a trailing half, builds all
3^(n/2) partial sums of each half once, and combines them blockwise, so each
tuple costs one vector add. Sign vectors are indexed with the first variable
most significant and digit 0, 1, 2 meaning 0, +1, -1.
"""
from __future__ import annotations
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.core.errors import DegenerateSpectrum, IntegerizationUnsafe, TooLarge

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_LIMIT = 16
_DIGITS = (0, 1, -1)
_BLOCK_BYTES = 1 << 26


class FrequencyScheme(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = "custom"
    kind: Literal["sine", "ternary"] = "sine"
    axes: Literal[1, 2, 4] = 4
    u_mode: Literal["n2", "n3", "explicit"] = "n2"
    u: Optional[float] = Field(None, description="bias, used when u_mode is explicit")
    p: float = 1.0
    v: Optional[float] = Field(None, description="axis-pair offset, default 3*pi/(u+1)")
    h: Optional[float] = Field(None, description="quarter-period offset, default (pi/2)/(u+1)")

    def resolve_u(self, n: int) -> float:
        if self.u_mode == "n2":
            return float(n * n)
        if self.u_mode == "n3":
            return float(n**3)
        if self.u is None or self.u < 1:
            raise ValueError("explicit u_mode needs u >= 1")
        return float(self.u)

    def resolve_v(self, n: int) -> float:
        return self.v if self.v is not None else 3 * math.pi / (self.resolve_u(n) + 1)

    def resolve_h(self, n: int) -> float:
        return self.h if self.h is not None else (math.pi / 2) / (self.resolve_u(n) + 1)


class SignVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    e: Tuple[int, ...]

    @field_validator("e")
    @classmethod
    def _check(cls, e):
        if any(x not in (-1, 0, 1) for x in e):
            raise ValueError("sign entries must be -1, 0 or 1")
        if not any(e):
            raise ValueError("sign vector must have a nonzero entry")
        return e

    def as_csv(self) -> str:
        return ";".join(str(x) for x in self.e)


class SpectrumReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    scheme: str = "custom"
    axes: int
    min_max_frequency: Optional[float] = Field(..., description="None when the scan was skipped above the enumeration limit")
    max_max_frequency: Optional[float] = None
    argmin: Optional[SignVector] = None


class FrequencyAssignment(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    axes: int
    real_freqs: Tuple[Tuple[float, ...], ...]
    integer_freqs: Tuple[Tuple[int, ...], ...]
    multiplier: int = Field(..., ge=1)
    modulus: int = Field(..., ge=1)

    def integer_matrix(self) -> np.ndarray:
        return np.asarray(self.integer_freqs, dtype=np.int64).reshape(self.n, self.axes)


def build_frequencies(n: int, scheme: FrequencyScheme) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    if scheme.kind == "ternary":
        z = 3.0 ** np.arange(n)
        return (z / z[-1]).reshape(n, 1)
    u = scheme.resolve_u(n)
    p = scheme.p
    v = scheme.resolve_v(n)
    h = scheme.resolve_h(n)
    k = u + np.arange(1, n + 1, dtype=np.float64)
    offsets = (p, p + h, p + v, p + v + h)[: scheme.axes]
    return np.stack([np.sin(k * t) for t in offsets], axis=1)


# --- sign-vector scan ---

def _half_sums(rows: np.ndarray) -> np.ndarray:
    k, d = rows.shape
    if k == 0:
        return np.zeros((1, d), dtype=rows.dtype)
    signs = np.array(list(itertools.product(_DIGITS, repeat=k)), dtype=rows.dtype).reshape(-1, k)
    acc = np.zeros((signs.shape[0], d), dtype=rows.dtype)
    for j in range(k):
        acc = acc + signs[:, j : j + 1] * rows[j]
    return acc


def _split(n: int) -> int:
    return n // 2


def _index_to_signs(index: int, n: int) -> Tuple[int, ...]:
    out = []
    for _ in range(n):
        index, digit = divmod(index, 3)
        out.append(_DIGITS[digit])
    return tuple(reversed(out))


def _canonical(signs: Tuple[int, ...]) -> Tuple[int, ...]:
    first = next(x for x in signs if x)
    return signs if first < 0 else tuple(-x for x in signs)


def _scan(matrix: np.ndarray, threads: int = 1, modulus: Optional[int] = None):
    """Return (min, argmin index, max) of max-axis |sum| over nonzero sign vectors.

    With a modulus, |sum| is replaced by the distance of the sum to the nearest
    multiple of the modulus, so a zero minimum means every axis sum is 0 mod l.
    """
    n, d = matrix.shape
    n1 = _split(n)
    lead = _half_sums(matrix[:n1])
    trail = _half_sums(matrix[n1:])
    n_trail = trail.shape[0]
    rows_per_block = max(1, _BLOCK_BYTES // (n_trail * d * 8))
    blocks = [(s, min(lead.shape[0], s + rows_per_block)) for s in range(0, lead.shape[0], rows_per_block)]

    def work(block):
        s, e = block
        tot = lead[s:e, None, :] + trail[None, :, :]
        if modulus is None:
            tot = np.abs(tot)
        else:
            tot = tot % modulus
            tot = np.minimum(tot, modulus - tot)
        tot = tot.max(axis=2)
        hi = tot.max()
        if s == 0:
            tot = tot.astype(np.float64) if tot.dtype.kind == "i" else tot
            tot[0, 0] = np.inf
        flat = int(np.argmin(tot))
        return tot.flat[flat], s * n_trail + flat, hi

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    best, best_idx, worst = parts[0]
    for lo, idx, hi in parts[1:]:
        if lo < best:
            best, best_idx = lo, idx
        worst = max(worst, hi)
    return best, best_idx, worst


def _check_limit(n: int, limit: int) -> None:
    if n > limit:
        raise TooLarge(f"sign-vector enumeration limited to n <= {limit} (got n={n})", stage="spectrum")


def min_max_frequency(
    freqs: np.ndarray,
    scheme: str = "custom",
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    threads: int = 1,
) -> SpectrumReport:
    freqs = np.asarray(freqs, dtype=np.float64)
    n, d = freqs.shape
    _check_limit(n, limit)
    best, idx, worst = _scan(freqs, threads=threads)
    signs = _canonical(_index_to_signs(idx, n))
    logger.info("m.m.f n=%d axes=%d: %.6g", n, d, best)
    return SpectrumReport(
        n=n,
        scheme=scheme,
        axes=d,
        min_max_frequency=float(best),
        max_max_frequency=float(worst),
        argmin=SignVector(e=signs),
    )


def frequency_tuple(freqs: np.ndarray, signs: Sequence[int]) -> np.ndarray:
    """Per-axis sums for one sign vector, summed in scan order."""
    freqs = np.asarray(freqs)
    e = np.asarray(signs, dtype=freqs.dtype)
    n1 = _split(freqs.shape[0])
    lead = np.zeros(freqs.shape[1], dtype=freqs.dtype)
    for j in range(n1):
        lead = lead + e[j] * freqs[j]
    trail = np.zeros(freqs.shape[1], dtype=freqs.dtype)
    for j in range(n1, freqs.shape[0]):
        trail = trail + e[j] * freqs[j]
    return lead + trail


def integer_frequency_tuple(int_freqs: np.ndarray, signs: Sequence[int]) -> np.ndarray:
    return np.asarray(signs, dtype=np.int64) @ np.asarray(int_freqs, dtype=np.int64)


# --- integerization ---

def integerize(freqs, multiplier: int) -> np.ndarray:
    """sign(x) * ceil(|m x|): round away from zero, zero stays zero."""
    if multiplier < 1:
        raise ValueError("multiplier must be >= 1")
    scaled = np.asarray(freqs, dtype=np.float64) * multiplier
    return (np.sign(scaled) * np.ceil(np.abs(scaled))).astype(np.int64)


def choose_multiplier(report: SpectrumReport, n: int, override: Optional[int] = None) -> int:
    if override is not None:
        if override < 1:
            raise ValueError("multiplier override must be >= 1")
        return int(override)
    if report.min_max_frequency <= 0:
        raise DegenerateSpectrum("minimal maximum frequency is zero; no multiplier separates the tuples")
    return int(math.ceil((n + 1) / report.min_max_frequency))


def check_integerization(int_freqs, limit: int = DEFAULT_ENUMERATION_LIMIT, threads: int = 1) -> None:
    """Raise IntegerizationUnsafe if some nonzero sign vector has every integer axis sum zero."""
    mat = np.asarray(int_freqs, dtype=np.int64)
    n = mat.shape[0]
    _check_limit(n, limit)
    best, idx, _ = _scan(mat, threads=threads)
    if best < 1:
        signs = _canonical(_index_to_signs(idx, n))
        raise IntegerizationUnsafe(f"sign vector {signs} integerizes to the zero frequency", signs=signs)


def choose_modulus(int_freqs, override: Optional[int] = None) -> int:
    if override is not None:
        return int(override)
    mat = np.asarray(int_freqs, dtype=np.int64)
    if mat.size == 0:
        return 2
    return 2 + int(np.abs(mat).sum(axis=0).max())


def check_modulus(int_freqs, modulus: int, limit: int = DEFAULT_ENUMERATION_LIMIT, threads: int = 1) -> None:
    """Raise IntegerizationUnsafe if some nonzero sign vector has every axis sum = 0 mod l.

    Moduli of at least 2 + the largest axis sum of |z| (the default choice)
    are accepted without a scan.
    """
    mat = np.asarray(int_freqs, dtype=np.int64)
    n = mat.shape[0]
    if mat.size == 0 or modulus > int(np.abs(mat).sum(axis=0).max()) + 1:
        return
    if n > limit:
        raise IntegerizationUnsafe(
            f"modulus {modulus} is within the frequency bound and n={n} is above the enumeration limit {limit}; "
            "aliasing cannot be ruled out"
        )
    best, idx, _ = _scan(mat, threads=threads, modulus=modulus)
    if best < 1:
        signs = _canonical(_index_to_signs(idx, n))
        raise IntegerizationUnsafe(f"modulus {modulus} aliases sign vector {signs} onto the constant term", signs=signs)


def ternary_assignment(n: int) -> FrequencyAssignment:
    """Exact d=1 assignment z_j = 3^(j-1); every nonzero sign vector has a nonzero sum."""
    z = [3**j for j in range(n)]
    return FrequencyAssignment(
        n=n,
        axes=1,
        real_freqs=tuple((x / z[-1],) for x in z),
        integer_freqs=tuple((x,) for x in z),
        multiplier=z[-1],
        modulus=choose_modulus(np.asarray(z).reshape(n, 1)),
    )


def ternary_report(n: int, scheme: str = "ternary") -> SpectrumReport:
    top = 3 ** (n - 1)
    return SpectrumReport(
        n=n,
        scheme=scheme,
        axes=1,
        min_max_frequency=1.0 / top,
        max_max_frequency=(3**n - 1) / 2 / top,
        argmin=SignVector(e=(-1,) + (0,) * (n - 1)),
    )


def assign_frequencies(
    n: int,
    scheme: FrequencyScheme,
    multiplier: Optional[int] = None,
    modulus: Optional[int] = None,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    threads: int = 1,
    check: bool = True,
) -> Tuple[FrequencyAssignment, SpectrumReport]:
    """build_frequencies -> min_max_frequency -> choose_multiplier -> integerize -> choose_modulus."""
    if scheme.kind == "ternary":
        fa = ternary_assignment(n)
        report = ternary_report(n, scheme.name)
        if multiplier is None:
            if modulus is not None:
                fa = fa.model_copy(update={"modulus": choose_modulus(fa.integer_matrix(), override=modulus)})
            return fa, report
        real = build_frequencies(n, scheme)
        m = multiplier
    else:
        real = build_frequencies(n, scheme)
        if multiplier is not None and n > limit:
            logger.warning("n=%d above enumeration limit; m.m.f not computed, using multiplier %d", n, multiplier)
            report = SpectrumReport(n=n, scheme=scheme.name, axes=real.shape[1], min_max_frequency=None)
        else:
            report = min_max_frequency(real, scheme=scheme.name, limit=limit, threads=threads)
        m = choose_multiplier(report, n, override=multiplier)
    ints = integerize(real, m)
    if check:
        if n <= limit:
            check_integerization(ints, limit=limit, threads=threads)
        else:
            logger.warning("n=%d above enumeration limit; integerization safety not checked", n)
    l = choose_modulus(ints, override=modulus)
    logger.info("frequencies n=%d axes=%d multiplier=%d modulus=%d", n, real.shape[1], m, l)
    fa = FrequencyAssignment(
        n=n,
        axes=real.shape[1],
        real_freqs=tuple(tuple(float(x) for x in row) for row in real),
        integer_freqs=tuple(tuple(int(x) for x in row) for row in ints),
        multiplier=m,
        modulus=l,
    )
    return fa, report


def spectrum_table(
    scheme: FrequencyScheme,
    n_range: Sequence[int],
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    threads: int = 1,
) -> List[SpectrumReport]:
    reports = []
    for n in n_range:
        _check_limit(n, limit)
        reports.append(min_max_frequency(build_frequencies(n, scheme), scheme=scheme.name, limit=limit, threads=threads))
    return reports


def spectrum_frame(reports: Sequence[SpectrumReport]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "n": [r.n for r in reports],
            "min_max_frequency": [r.min_max_frequency for r in reports],
            "max_max_frequency": [r.max_max_frequency for r in reports],
            "argmin_signs": [r.argmin.as_csv() if r.argmin else "" for r in reports],
        }
    )
