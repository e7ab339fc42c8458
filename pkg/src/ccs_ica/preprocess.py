"""Centering and PCA whitening."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficiencyError

__all__ = ["Whitener", "fit_whitener", "apply_whitener", "whiten"]

EIG_FLOOR = 1e-12


@dataclass(frozen=True)
class Whitener:
    """Affine whitening map ``x -> v @ (x - mean)``.

    ``v = diag(eigvals)**-1/2 @ E.T`` with eigenvalues sorted descending.
    """

    v: np.ndarray
    mean: np.ndarray
    eigvals: np.ndarray

    @property
    def dims(self) -> int:
        return self.v.shape[0]


def fit_whitener(x):
    """Fit a :class:`Whitener` to an (M, T) observation matrix.

    The covariance uses 1/T normalisation. Eigenvectors are sign-fixed so
    that the entry of largest magnitude in each is positive, which makes
    the result independent of the LAPACK driver.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"expected an (M, T) matrix, got shape {x.shape}")
    m, t = x.shape
    if t <= m:
        raise ValueError(f"need more samples than channels (M={m}, T={t})")
    mean = x.mean(axis=1)
    xc = x - mean[:, None]
    cov = xc @ xc.T / t
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]
    if evals[-1] < EIG_FLOOR:
        raise RankDeficiencyError(
            f"covariance is rank deficient (smallest eigenvalue {evals[-1]:.3e})"
        )
    idx = np.argmax(np.abs(evecs), axis=0)
    signs = np.sign(evecs[idx, np.arange(m)])
    evecs = evecs * signs
    v = evecs.T / np.sqrt(evals)[:, None]
    return Whitener(v=v, mean=mean, eigvals=evals)


def apply_whitener(w, x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != w.dims:
        raise ValueError(f"whitener expects {w.dims} channels, got shape {x.shape}")
    return w.v @ (x - w.mean[:, None])


def whiten(x):
    """Fit and apply in one go; returns ``(x_white, whitener)``."""
    w = fit_whitener(x)
    return apply_whitener(w, x), w
