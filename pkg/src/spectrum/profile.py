from __future__ import annotations
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.spectrum.frequencies import FrequencyScheme, SignVector


def axis_profile(
    n: int,
    scheme: FrequencyScheme,
    signs: Union[SignVector, Sequence[int]],
    t_range: Tuple[float, float],
    samples: int,
) -> List[Tuple[float, float]]:
    """Sample g(t) = sum_j e_j sin((u+j) t) uniformly over t_range (endpoints included)."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    e = signs if isinstance(signs, SignVector) else SignVector(e=tuple(int(x) for x in signs))
    if len(e.e) != n:
        raise ValueError(f"sign vector has {len(e.e)} entries, expected {n}")
    k = scheme.resolve_u(n) + np.arange(1, n + 1, dtype=np.float64)
    ts = np.linspace(t_range[0], t_range[1], samples)
    g = np.sin(np.outer(ts, k)) @ np.asarray(e.e, dtype=np.float64)
    return [(float(t), float(v)) for t, v in zip(ts, g)]


def profile_frame(points: Sequence[Tuple[float, float]]) -> pd.DataFrame:
    return pd.DataFrame(list(points), columns=["t", "g"])
