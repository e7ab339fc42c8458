"""Gaussian Parzen-window density estimators."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "SQRT_2PI",
    "default_bandwidth",
    "kernel_uni",
    "kernel_uni_deriv",
    "kernel_multi",
    "ParzenModel",
    "pdf_uni",
    "pdf_uni_deriv",
    "pdf_multi",
]

SQRT_2PI = np.sqrt(2.0 * np.pi)


def default_bandwidth(t_count):
    """Rule-of-thumb bandwidth ``1.06 * T**(-1/5)`` for unit-variance data."""
    if t_count < 1:
        raise ValueError("t_count must be positive")
    return 1.06 * float(t_count) ** (-0.2)


def kernel_uni(u):
    """Standard normal density."""
    u = np.asarray(u, dtype=float)
    return np.exp(-0.5 * u * u) / SQRT_2PI


def kernel_uni_deriv(u):
    """Derivative of :func:`kernel_uni`, ``-u * phi(u)``."""
    u = np.asarray(u, dtype=float)
    return -u * kernel_uni(u)


def kernel_multi(u):
    """Isotropic standard normal density in ``N`` dimensions.

    The last axis of ``u`` indexes the dimension.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    n = u.shape[-1]
    return np.exp(-0.5 * np.sum(u * u, axis=-1)) / (2.0 * np.pi) ** (n / 2.0)


@dataclass(frozen=True)
class ParzenModel:
    """Kernel density model over the columns of ``anchors`` (M x T).

    Only every ``stride``-th column (starting at 0) is used as a kernel
    centre. When ``h`` is None the bandwidth follows
    :func:`default_bandwidth` evaluated at the effective anchor count.
    """

    anchors: np.ndarray
    h: Optional[float] = None
    stride: int = 1

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.anchors, dtype=float))
        object.__setattr__(self, "anchors", a)
        if int(self.stride) != self.stride or self.stride < 1:
            raise ValueError(f"stride must be a positive integer, got {self.stride}")
        if self.n_anchors < 2:
            raise ValueError("Parzen model needs at least 2 effective anchors")
        if self.h is not None and not self.h > 0:
            raise ValueError(f"bandwidth must be positive, got {self.h}")

    @property
    def dims(self) -> int:
        return self.anchors.shape[0]

    @property
    def centres(self) -> np.ndarray:
        return self.anchors[:, :: self.stride]

    @property
    def n_anchors(self) -> int:
        return -(-self.anchors.shape[1] // self.stride)

    @property
    def bandwidth(self) -> float:
        return default_bandwidth(self.n_anchors) if self.h is None else float(self.h)


def _channel_centres(model, channel):
    if not 0 <= channel < model.dims:
        raise IndexError(f"channel {channel} out of range for {model.dims} channels")
    return model.centres[channel]


def pdf_uni(model, channel, y):
    """Univariate Parzen estimate for one channel, evaluated at ``y``."""
    c = _channel_centres(model, channel)
    h = model.bandwidth
    y_arr = np.asarray(y, dtype=float)
    u = (y_arr[..., None] - c) / h
    out = kernel_uni(u).sum(axis=-1) / (c.size * h)
    return float(out) if out.ndim == 0 else out


def pdf_uni_deriv(model, channel, y):
    """d/dy of :func:`pdf_uni` with the anchors held fixed."""
    c = _channel_centres(model, channel)
    h = model.bandwidth
    y_arr = np.asarray(y, dtype=float)
    u = (y_arr[..., None] - c) / h
    out = kernel_uni_deriv(u).sum(axis=-1) / (c.size * h * h)
    return float(out) if out.ndim == 0 else out


def pdf_multi(model, y):
    """Multivariate Parzen estimate at ``y``.

    ``y`` is a length-M vector or an (M, n) array of query columns.
    """
    y_arr = np.asarray(y, dtype=float)
    single = y_arr.ndim == 1
    if single:
        y_arr = y_arr[:, None]
    if y_arr.shape[0] != model.dims:
        raise ValueError(
            f"query has dimension {y_arr.shape[0]}, model has {model.dims}"
        )
    c = model.centres
    h = model.bandwidth
    sq = _sq_dists(y_arr, c)
    m = model.dims
    out = np.exp(-0.5 * sq / (h * h)).sum(axis=1)
    out /= c.shape[1] * h**m * (2.0 * np.pi) ** (m / 2.0)
    return float(out[0]) if single else out


def _sq_dists(a, b):
    """Squared Euclidean distances between columns of a (M, n) and b (M, k)."""
    d = np.zeros((a.shape[1], b.shape[1]))
    for row_a, row_b in zip(a, b):
        diff = row_a[:, None] - row_b[None, :]
        d += diff * diff
    return d
