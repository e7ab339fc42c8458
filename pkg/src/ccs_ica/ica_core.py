"""Full-matrix gradient-descent ICA on the CCS-DIV contrast."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .density import SQRT_2PI, default_bandwidth
from .divergence import DENSITY_FLOOR, ccs_div_terms, convex_f_prime
from .errors import SingularMatrixError
from .preprocess import Whitener, whiten

__all__ = [
    "ContrastConfig",
    "OptimizerConfig",
    "DemixingState",
    "GradientTerms",
    "CCSContrast",
    "eval_contrast",
    "eval_gradient",
    "run_gradient_ica",
]

log = logging.getLogger(__name__)

MAX_COND = 1e12


@dataclass(frozen=True)
class ContrastConfig:
    """Parameters of the sample CCS-DIV contrast.

    ``bandwidth=None`` selects ``1.06 * T'**(-1/5)`` where ``T'`` is the
    number of samples left after striding.
    """

    alpha: float = -0.99999
    bandwidth: Optional[float] = None
    stride: int = 1
    floor: float = DENSITY_FLOOR

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if int(self.stride) != self.stride or self.stride < 1:
            raise ValueError(f"stride must be a positive integer, got {self.stride}")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")


@dataclass(frozen=True)
class OptimizerConfig:
    gamma: float = 0.3
    epsilon: float = 1e-4
    max_iter: int = 100
    # consecutive contrast increases tolerated before giving up
    patience: int = 10


@dataclass
class DemixingState:
    """Result of a separation run.

    ``w`` acts on whitened data; ``demixing`` is the total map applied to
    raw (uncentred) observations, i.e. ``w @ whitener.v``.
    """

    w: np.ndarray
    iteration: int = 0
    last_div: float = float("nan")
    converged: bool = False
    whitener: Optional[Whitener] = None
    history: List[float] = field(default_factory=list)
    message: str = ""
    skipped_pairs: int = 0
    sweep_state: Optional[object] = None

    @property
    def demixing(self) -> np.ndarray:
        if self.whitener is None:
            return self.w
        return self.w @ self.whitener.v

    def unmix(self, x):
        x = np.asarray(x, dtype=float)
        if self.whitener is None:
            return self.w @ x
        return self.demixing @ (x - self.whitener.mean[:, None])


@dataclass
class GradientTerms:
    v1: float
    v2: float
    v3: float
    v1p: np.ndarray
    v2p: np.ndarray
    v3p: np.ndarray

    @property
    def gradient(self) -> np.ndarray:
        return self.v1p / self.v1 + self.v2p / self.v2 - 2.0 * self.v3p / self.v3


class CCSContrast:
    """CCS-DIV contrast of ``y = W x`` for fixed whitened data.

    The joint density uses the determinant form ``p_x(x_t) / |det W|``
    where ``p_x`` is a multivariate Parzen estimate on the (strided)
    whitened samples; it does not depend on W and is computed once. The
    marginal product uses univariate Parzen estimates whose kernel
    centres are the current outputs ``w_m x_i``.

    Parameters
    ----------
    x_white : ndarray, shape (M, T)
        Whitened observations.
    cfg : ContrastConfig
    """

    def __init__(self, x_white, cfg=ContrastConfig()):
        x = np.atleast_2d(np.asarray(x_white, dtype=float))
        self.cfg = cfg
        self.x = np.ascontiguousarray(x[:, :: cfg.stride])
        self.m, self.n = self.x.shape
        if self.n < 2:
            raise ValueError("need at least 2 samples after striding")
        self.h = default_bandwidth(self.n) if cfg.bandwidth is None else float(cfg.bandwidth)
        self.px = self._joint_density(self.x)

    def _joint_density(self, x):
        sq = np.zeros((self.n, self.n))
        for row in x:
            diff = row[:, None] - row[None, :]
            sq += diff * diff
        k = np.exp(sq * (-0.5 / self.h**2)).sum(axis=1)
        return k / (self.n * self.h**self.m * (2.0 * np.pi) ** (self.m / 2.0))

    def _check_w(self, w):
        w = np.asarray(w, dtype=float)
        if w.shape != (self.m, self.m):
            raise ValueError(f"W must be {self.m}x{self.m}, got {w.shape}")
        if not np.all(np.isfinite(w)) or np.linalg.cond(w) > MAX_COND:
            raise SingularMatrixError("demixing matrix is singular")
        return w

    def densities(self, w):
        """Return ``(P_J, Q_M, marginals)`` at the strided samples."""
        w = self._check_w(w)
        pj = self.px / abs(np.linalg.det(w))
        y = w @ self.x
        marg = np.empty_like(y)
        scale = 1.0 / (self.n * self.h * SQRT_2PI)
        for k, row in enumerate(y):
            u = (row[:, None] - row[None, :]) / self.h
            marg[k] = np.exp(-0.5 * u * u).sum(axis=1) * scale
        marg = np.maximum(marg, self.cfg.floor)
        return pj, np.prod(marg, axis=0), marg

    def value(self, w):
        pj, qm, _ = self.densities(w)
        _, _, v1, v2, v3 = ccs_div_terms(pj, qm, self.cfg.alpha, self.cfg.floor)
        return max(float(np.log(v1) + np.log(v2) - 2.0 * np.log(abs(v3))), 0.0)

    def terms(self, w):
        """Sums and their element-wise partial derivatives w.r.t. ``w``."""
        w = self._check_w(w)
        alpha, floor = self.cfg.alpha, self.cfg.floor
        h, n = self.h, self.n
        pj = np.maximum(self.px / abs(np.linalg.det(w)), floor)
        y = w @ self.x

        # Marginals and d p_m(y_mt) / d w_ml, including the dependence of
        # the kernel centres y_mi = w_m x_i on w.
        marg = np.empty_like(y)
        dmarg = np.empty((self.m, n, self.m))
        scale = 1.0 / (n * h * SQRT_2PI)
        xt = self.x.T
        for k, row in enumerate(y):
            u = (row[:, None] - row[None, :]) / h
            kern = np.exp(-0.5 * u * u)
            marg[k] = kern.sum(axis=1) * scale
            dk = -u * kern
            dmarg[k] = (dk.sum(axis=1)[:, None] * xt - dk @ xt) * (scale / h)
        marg = np.maximum(marg, floor)
        qm = np.prod(marg, axis=0)

        fp, fq, v1, v2, v3 = ccs_div_terms(pj, qm, alpha, floor)
        dfp = convex_f_prime(pj, alpha)
        dfq = convex_f_prime(np.maximum(qm, floor), alpha)

        # dP_J/dw_ml = -P_J * inv(W).T[m, l]
        winv_t = np.linalg.inv(w).T
        # dQ_M/dw_ml = (Q_M / p_m) * dp_m/dw_ml
        dq = (qm / marg)[:, :, None] * dmarg

        def contract(weights):
            return np.einsum("t,mtl->ml", weights, dq)

        s1 = np.dot(2.0 * fp * dfp, pj)
        s3p = np.dot(dfp * fq, pj)
        v1p = -s1 * winv_t
        v2p = contract(2.0 * fq * dfq)
        v3p = -s3p * winv_t + contract(fp * dfq)
        return GradientTerms(v1, v2, v3, v1p, v2p, v3p)

    def gradient(self, w):
        return self.terms(w).gradient

    def value_and_gradient(self, w):
        t = self.terms(w)
        value = max(float(np.log(t.v1) + np.log(t.v2) - 2.0 * np.log(abs(t.v3))), 0.0)
        return value, t.gradient


def eval_contrast(x_white, w, cfg=ContrastConfig()):
    """CCS-DIV of ``W @ x_white``; see :class:`CCSContrast`."""
    return CCSContrast(x_white, cfg).value(w)


def eval_gradient(x_white, w, cfg=ContrastConfig()):
    """Analytic gradient of :func:`eval_contrast` with respect to ``W``."""
    return CCSContrast(x_white, cfg).gradient(w)


def _normalize_rows(w):
    return w / np.linalg.norm(w, axis=1, keepdims=True)


def descend(contrast, w0, opt=OptimizerConfig()):
    """Plain gradient descent with row normalisation on a prepared contrast.

    Stops when the absolute change of the contrast is at most
    ``opt.epsilon``, after ``opt.max_iter`` updates, or when the contrast
    has grown for ``opt.patience`` consecutive updates.
    """
    w = _normalize_rows(np.array(w0, dtype=float))
    value, grad = contrast.value_and_gradient(w)
    state = DemixingState(w=w, last_div=value, history=[value])
    rising = 0
    for it in range(1, opt.max_iter + 1):
        w_new = _normalize_rows(w - opt.gamma * grad)
        new_value, new_grad = contrast.value_and_gradient(w_new)
        delta = new_value - value
        rising = rising + 1 if delta > 0 else 0
        w, value, grad = w_new, new_value, new_grad
        state.history.append(value)
        state.iteration = it
        if abs(delta) <= opt.epsilon:
            state.converged = True
            break
        if rising >= opt.patience:
            state.message = f"contrast increased for {rising} consecutive steps"
            log.warning("gradient ICA diverging: %s", state.message)
            break
    else:
        state.message = "iteration cap reached"
    state.w = w
    state.last_div = value
    return state


def run_gradient_ica(x, cfg=ContrastConfig(), opt=OptimizerConfig()):
    """Whiten ``x`` and minimise CCS-DIV over the full demixing matrix.

    Parameters
    ----------
    x : ndarray, shape (M, T)
        Raw mixtures, ``T > M >= 2``.
    cfg : ContrastConfig
    opt : OptimizerConfig

    Returns
    -------
    DemixingState
        ``state.w`` acts on whitened data, ``state.demixing`` on raw data.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("gradient ICA needs at least two channels")
    xw, whitener = whiten(x)
    contrast = CCSContrast(xw, cfg)
    state = descend(contrast, np.eye(x.shape[0]), opt)
    state.whitener = whitener
    return state
