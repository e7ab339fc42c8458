"""Pairwise schemes for M > 2: Jacobi grid search and pairwise gradient descent.

Both schemes reduce the M-channel problem to a sequence of 2-channel
sub-problems, one per pair ``(i, j)`` with ``i < j`` visited in
lexicographic order, and accumulate the 2x2 solutions into the full
demixing matrix.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .ica_core import (
    CCSContrast,
    ContrastConfig,
    DemixingState,
    OptimizerConfig,
    descend,
)
from .preprocess import whiten

__all__ = [
    "RotationGrid",
    "SweepState",
    "rotation2",
    "pairwise_contrast",
    "scan_pair",
    "jacobi_sweep",
    "run_jacobi_ica",
    "run_pairwise_gradient_ica",
]

log = logging.getLogger(__name__)

CM_SENTINEL = 1.0


def rotation2(theta):
    """Planar rotation ``[[cos, -sin], [sin, cos]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class RotationGrid:
    """Candidate angles ``theta_min, theta_min + step, ..., theta_max``.

    Angles are generated as integer multiples of ``step`` so that 0 is hit
    exactly whenever it lies inside the range.
    """

    theta_min: float = -np.pi / 4
    theta_max: float = np.pi / 4
    step: float = np.pi / 64

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        if self.theta_max < self.theta_min:
            raise ValueError("theta_max must not be below theta_min")

    def angles(self) -> np.ndarray:
        lo = int(np.ceil(self.theta_min / self.step - 1e-9))
        hi = int(np.floor(self.theta_max / self.step + 1e-9))
        return np.arange(lo, hi + 1) * self.step


@dataclass
class SweepState:
    """Bookkeeping of the Jacobi scheme.

    ``cm[i, j]`` (``i < j``) holds the last angle applied to pair
    ``(i, j)`` in degrees; a zero entry makes later sweeps skip the pair.
    """

    cm: np.ndarray
    w_accum: np.ndarray
    sweep: int = 0
    pair_evals: int = 0

    @classmethod
    def initial(cls, m):
        cm = np.triu(np.full((m, m), CM_SENTINEL), k=1)
        return cls(cm=cm, w_accum=np.eye(m))

    @property
    def residual(self) -> float:
        """Sum of ``|cm_ij|`` over ``i < j`` in degrees."""
        return float(np.abs(np.triu(self.cm, k=1)).sum())


def pairwise_contrast(x2, w2, cfg=ContrastConfig()):
    """CCS-DIV of a 2-channel signal after applying the 2x2 matrix ``w2``."""
    x2 = np.asarray(x2, dtype=float)
    if x2.ndim != 2 or x2.shape[0] != 2:
        raise ValueError(f"expected a 2 x T signal, got shape {x2.shape}")
    return CCSContrast(x2, cfg).value(w2)


def scan_pair(x2, grid=RotationGrid(), cfg=ContrastConfig()):
    """Evaluate the pair contrast on every grid angle.

    Returns ``(best_theta, angles, values)``. Ties are resolved towards the
    smallest ``|theta|`` and then towards the negative angle.
    """
    contrast = CCSContrast(x2, cfg)
    angles = grid.angles()
    values = np.array([contrast.value(rotation2(t)) for t in angles])
    best = values.min()
    tied = angles[values == best]
    best_theta = min(tied, key=lambda t: (abs(t), t))
    return float(best_theta), angles, values


def jacobi_sweep(x, state, grid=RotationGrid(), cfg=ContrastConfig()):
    """One pass of the Jacobi scheme over all pairs.

    Parameters
    ----------
    x : ndarray, shape (M, T)
        Whitened data. The current outputs are ``state.w_accum @ x``.
    state : SweepState
    grid : RotationGrid
    cfg : ContrastConfig

    Returns
    -------
    SweepState
        A new state; ``state`` is not modified.
    """
    x = np.asarray(x, dtype=float)
    m = x.shape[0]
    cm = state.cm.copy()
    w_acc = state.w_accum.copy()
    y = w_acc @ x
    evals = state.pair_evals
    for i in range(m - 1):
        for j in range(i + 1, m):
            if cm[i, j] == 0:
                continue
            theta, _, _ = scan_pair(y[[i, j]], grid, cfg)
            evals += 1
            r = rotation2(theta)
            y[[i, j]] = r @ y[[i, j]]
            w_acc[[i, j]] = r @ w_acc[[i, j]]
            cm[i, j] = np.degrees(theta)
    return SweepState(cm=cm, w_accum=w_acc, sweep=state.sweep + 1, pair_evals=evals)


def run_jacobi_ica(x, grid=RotationGrid(), cfg=ContrastConfig(), max_sweeps=10):
    """Whiten ``x`` and run Jacobi sweeps until ``sum |cm| <= 1`` degree.

    Returns a :class:`DemixingState` whose ``w`` is the accumulated
    rotation and whose ``demixing`` is that rotation times the whitener.
    ``state.sweep_state`` holds the final :class:`SweepState`.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("Jacobi ICA needs at least two channels")
    xw, whitener = whiten(x)
    sweep = SweepState.initial(x.shape[0])
    residuals = []
    converged = False
    while sweep.sweep < max_sweeps:
        sweep = jacobi_sweep(xw, sweep, grid, cfg)
        residuals.append(sweep.residual)
        if sweep.residual <= 1.0:
            converged = True
            break
    state = DemixingState(
        w=sweep.w_accum,
        iteration=sweep.sweep,
        converged=converged,
        whitener=whitener,
        history=residuals,
        message="" if converged else f"no convergence after {max_sweeps} sweeps",
        sweep_state=sweep,
    )
    try:
        state.last_div = CCSContrast(xw, cfg).value(sweep.w_accum)
    except ArithmeticError:
        pass
    return state


def run_pairwise_gradient_ica(
    x, cfg=ContrastConfig(), opt=OptimizerConfig(), max_outer=5, tol=1e-3
):
    """Pairwise gradient-descent scheme.

    For every outer iteration and pair ``(i, j)`` a 2x2 gradient descent
    (started from the identity) is run on the current outputs of the pair;
    its result is embedded into an identity matrix ``R`` at rows/columns
    ``(i, j)`` and accumulated as ``W = R @ W``. The data are whitened
    once up front.

    ``converged`` is True when a whole outer pass changed no pair matrix by
    more than ``tol`` (max-abs deviation from the identity).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("pairwise ICA needs at least two channels")
    m = x.shape[0]
    xw, whitener = whiten(x)
    w = np.eye(m)
    y = xw.copy()
    skipped = 0
    converged = False
    outer = 0
    for outer in range(1, max_outer + 1):
        change = 0.0
        for i in range(m - 1):
            for j in range(i + 1, m):
                pair = y[[i, j]]
                inner = descend(CCSContrast(pair, cfg), np.eye(2), opt)
                if not inner.converged:
                    skipped += 1
                    log.warning("pair (%d, %d) did not converge: %s", i, j, inner.message)
                    continue
                w2 = inner.w
                change = max(change, float(np.abs(w2 - np.eye(2)).max()))
                r = np.eye(m)
                r[np.ix_([i, j], [i, j])] = w2
                w = r @ w
                y[[i, j]] = w2 @ pair
        if change <= tol:
            converged = True
            break
    state = DemixingState(
        w=w,
        iteration=outer,
        converged=converged,
        whitener=whitener,
        skipped_pairs=skipped,
    )
    try:
        state.last_div = CCSContrast(xw, cfg).value(w)
    except ArithmeticError:
        pass
    return state
