"""Convex Cauchy-Schwarz divergence (CCS-DIV).

The divergence composes a convex function ``f`` (parametrised by the
convexity parameter ``alpha``) with the Cauchy-Schwarz inequality::

    D = log( <f(P), f(P)> <f(Q), f(Q)> / <f(P), f(Q)>^2 )

For ``alpha`` in ``{-1, +1}`` the generic form of ``f`` is 0/0 and the
l'Hopital limits are used instead.
"""
from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .errors import DegenerateContrastError, DomainError

__all__ = [
    "DENSITY_FLOOR",
    "convex_f",
    "convex_f_prime",
    "ccs_div",
    "ccs_div_terms",
    "ccs_div_integral_2d",
]

DENSITY_FLOOR = 1e-300


def _check_alpha(alpha):
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha}")
    return alpha


def convex_f(t, alpha):
    """Evaluate the convex generator ``f(t; alpha)``.

    Parameters
    ----------
    t : float or ndarray
        Non-negative argument(s).
    alpha : float
        Convexity parameter.

    Returns
    -------
    float or ndarray
        ``f(t) >= 0`` with equality only at ``t = 1``.

    Notes
    -----
    The generic branch is evaluated as
    ``2/(1-alpha) * [(t - 1) - expm1(b log t) / b]`` with ``b = (1+alpha)/2``,
    which is algebraically identical to the textbook form but does not lose
    digits when ``alpha`` is within ``1e-5`` of -1. At ``alpha = -1`` the
    non-negative limit ``t - 1 - log t`` is returned.
    """
    alpha = _check_alpha(alpha)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(np.isnan(t_arr)):
        raise DomainError("convex_f requires t >= 0")
    b = 0.5 * (1.0 + alpha)

    if alpha == 1.0:
        out = xlogy(t_arr, t_arr) - t_arr + 1.0
    elif alpha == -1.0:
        if np.any(t_arr == 0):
            raise DomainError("convex_f at alpha=-1 requires t > 0")
        out = t_arr - 1.0 - np.log(t_arr)
    else:
        zero = t_arr == 0
        if np.any(zero) and b <= 0:
            raise DomainError(f"convex_f at alpha={alpha} requires t > 0")
        safe = np.where(zero, 1.0, t_arr)
        out = (safe - 1.0) - np.expm1(b * np.log(safe)) / b
        # t = 0: (t - 1) - (0 - 1)/b
        out = np.where(zero, -1.0 + 1.0 / b, out)
        out = out * (2.0 / (1.0 - alpha))
    if np.ndim(t) == 0:
        return float(out)
    return out


def convex_f_prime(t, alpha):
    """Derivative ``f'(t; alpha)`` for ``t > 0``.

    ``2/(1-alpha) * (1 - t**((alpha-1)/2))`` in general, ``log t`` at
    ``alpha = 1`` and ``1 - 1/t`` at ``alpha = -1``.
    """
    alpha = _check_alpha(alpha)
    t_arr = np.asarray(t, dtype=float)
    if np.any(~(t_arr > 0)):
        raise DomainError("convex_f_prime requires t > 0")
    if alpha == 1.0:
        out = np.log(t_arr)
    elif alpha == -1.0:
        out = 1.0 - 1.0 / t_arr
    else:
        out = -(2.0 / (1.0 - alpha)) * np.expm1(0.5 * (alpha - 1.0) * np.log(t_arr))
    if np.ndim(t) == 0:
        return float(out)
    return out


def ccs_div_terms(pj, qm, alpha, floor=DENSITY_FLOOR):
    """Return ``(fP, fQ, v1, v2, v3)`` for the sample CCS-DIV.

    ``fP``/``fQ`` are ``f`` applied to the floored density vectors,
    ``v1 = sum fP**2``, ``v2 = sum fQ**2`` and ``v3 = sum fP*fQ``.
    """
    pj = np.asarray(pj, dtype=float)
    qm = np.asarray(qm, dtype=float)
    if pj.ndim != 1 or pj.shape != qm.shape or pj.size == 0:
        raise ValueError(
            f"density vectors must be 1-D of equal nonzero length, got {pj.shape} and {qm.shape}"
        )
    fp = convex_f(np.maximum(pj, floor), alpha)
    fq = convex_f(np.maximum(qm, floor), alpha)
    v1 = float(np.dot(fp, fp))
    v2 = float(np.dot(fq, fq))
    v3 = float(np.dot(fp, fq))
    if v1 == 0.0 or v2 == 0.0 or v3 == 0.0:
        raise DegenerateContrastError(
            "CCS-DIV undefined: f(P_J) or f(Q_M) vanishes at every sample"
        )
    return fp, fq, v1, v2, v3


def ccs_div(pj, qm, alpha, floor=DENSITY_FLOOR):
    """Sample (Lebesgue-sum) CCS-DIV between joint and marginal-product densities.

    Parameters
    ----------
    pj, qm : array_like, shape (T,)
        Joint density and product of marginals evaluated at the same T
        sample points.
    alpha : float
        Convexity parameter.
    floor : float
        Lower clamp applied to densities before ``f``.

    Returns
    -------
    float
        ``log(v1 * v2 / v3**2) >= 0``; zero when ``f(pj)`` and ``f(qm)``
        are proportional.

    Raises
    ------
    DegenerateContrastError
        If either ``f`` vector is identically zero.
    """
    _, _, v1, v2, v3 = ccs_div_terms(pj, qm, alpha, floor)
    value = np.log(v1) + np.log(v2) - 2.0 * np.log(abs(v3))
    # Cauchy-Schwarz guarantees >= 0; only rounding can push it below.
    return max(float(value), 0.0)


def ccs_div_integral_2d(p_joint, p_marg1, p_marg2, alpha, cell_area=1.0):
    """Quadrature CCS-DIV on a rectangular 2-D grid.

    ``p_joint[i, j]`` is the joint density at ``(z1_i, z2_j)`` and
    ``p_marg1``/``p_marg2`` are the marginals on the same axes. The
    marginal product is formed as their outer product. Intended as a
    cross-check for :func:`ccs_div`, not as an estimator.
    """
    p_joint = np.asarray(p_joint, dtype=float)
    p_marg1 = np.asarray(p_marg1, dtype=float)
    p_marg2 = np.asarray(p_marg2, dtype=float)
    if p_joint.ndim != 2 or p_marg1.ndim != 1 or p_marg2.ndim != 1:
        raise ValueError("expected a 2-D joint grid and two 1-D marginal grids")
    if p_joint.shape != (p_marg1.size, p_marg2.size):
        raise ValueError(
            f"joint grid {p_joint.shape} does not match marginals "
            f"({p_marg1.size}, {p_marg2.size})"
        )
    if not cell_area > 0:
        raise ValueError("cell_area must be positive")
    q = np.outer(p_marg1, p_marg2)
    fp = convex_f(np.maximum(p_joint, DENSITY_FLOOR), alpha)
    fq = convex_f(np.maximum(q, DENSITY_FLOOR), alpha)
    num1 = np.sum(fp * fp) * cell_area
    num2 = np.sum(fq * fq) * cell_area
    den = np.sum(fp * fq) * cell_area
    if num1 == 0 or num2 == 0 or den == 0:
        raise DegenerateContrastError("CCS-DIV integral is degenerate on this grid")
    value = np.log(num1) + np.log(num2) - 2.0 * np.log(abs(den))
    return max(float(value), 0.0)
