"""Separation quality metrics."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

__all__ = ["AmariScore", "amari_error", "kurtosis"]


class AmariScore(NamedTuple):
    value: float
    value_x100: float


def amari_error(w, a):
    """Amari performance index of the global system ``P = w @ a``.

    Normalised by ``2M(M-1)`` so that the value lies in [0, 1] and is zero
    exactly when ``P`` is a scaled permutation. ``w`` must be the total
    demixing map applied to the raw mixtures (including any whitener).

    Each row of ``|P|`` is divided by its largest entry first. The row sum
    term is unaffected, and the column sum term becomes invariant to the
    scale of the rows of ``w``, which ICA cannot identify.
    """
    w = np.asarray(w, dtype=float)
    a = np.asarray(a, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape != a.shape:
        raise ValueError(f"need square matrices of equal size, got {w.shape} and {a.shape}")
    m = w.shape[0]
    if m < 2:
        raise ValueError("Amari error needs M >= 2")
    p = np.abs(w @ a)
    p = p / p.max(axis=1, keepdims=True)
    # correctly rounded sums make the value independent of row order
    rows = math.fsum(math.fsum(r) - 1.0 for r in p)
    cols = math.fsum(math.fsum(c) / c.max() - 1.0 for c in p.T)
    value = float((rows + cols) / (2.0 * m * (m - 1)))
    return AmariScore(value, 100.0 * value)


def kurtosis(s):
    """Excess kurtosis ``E[s^4] / E[s^2]^2 - 3`` with 1/T moments of the centred signal."""
    s = np.asarray(s, dtype=float).ravel()
    if s.size < 4:
        raise ValueError("kurtosis needs at least 4 samples")
    c = s - s.mean()
    m2 = np.mean(c * c)
    if m2 == 0:
        raise ArithmeticError("kurtosis undefined for a constant signal")
    return float(np.mean(c**4) / m2**2 - 3.0)
