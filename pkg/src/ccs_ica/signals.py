"""Synthetic sources, random mixing matrices and the linear mixing model.

Seeds
-----
Every random draw goes through :func:`derive_seed`, which maps
``(master_seed, trial, stream)`` to a :class:`numpy.random.SeedSequence`
with ``entropy=master_seed`` and ``spawn_key=(trial, stream)``. Source
channel ``k`` uses ``stream = k``; the mixing matrix of an M-channel trial
uses ``stream = M`` and the additive noise ``stream = M + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SOURCE_KINDS",
    "SourceSpec",
    "MixingModel",
    "derive_seed",
    "gen_source",
    "gen_sources",
    "gen_mixing",
    "mix",
    "parse_source_plan",
]

SOURCE_KINDS = ("uniform", "rayleigh", "laplacian", "lognormal")


@dataclass(frozen=True)
class SourceSpec:
    """One source family.

    ``tau1`` is the half-width of the uniform family and ``tau2`` the
    Laplacian scale; both are irrelevant for the other kinds.
    """

    kind: str
    tau1: float = 3.0
    tau2: float = 1.0
    standardize: bool = True

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}; expected one of {SOURCE_KINDS}")
        if not (self.tau1 > 0 and self.tau2 > 0):
            raise ValueError("tau1 and tau2 must be positive")


@dataclass(frozen=True)
class MixingModel:
    a: np.ndarray
    noise_std: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"mixing matrix must be square, got {a.shape}")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")
        object.__setattr__(self, "a", a)

    @property
    def dims(self) -> int:
        return self.a.shape[0]


def derive_seed(master_seed, trial=0, stream=0):
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(trial), int(stream)))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_source(spec, t_count, seed=None):
    """Draw ``t_count`` i.i.d. samples of one source family.

    uniform
        constant density on ``(-tau1, tau1)``
    rayleigh
        density ``s exp(-s^2/2)`` on ``s >= 0``
    laplacian
        density ``exp(-|s|/tau2) / (2 tau2)``
    lognormal
        ``exp(z)`` with ``z`` standard normal
    """
    if t_count < 1:
        raise ValueError("t_count must be at least 1")
    rng = _rng(seed)
    if spec.kind == "uniform":
        s = rng.uniform(-spec.tau1, spec.tau1, t_count)
    elif spec.kind == "rayleigh":
        s = rng.rayleigh(1.0, t_count)
    elif spec.kind == "laplacian":
        s = rng.laplace(0.0, spec.tau2, t_count)
    else:
        s = rng.lognormal(0.0, 1.0, t_count)
    if spec.standardize and t_count > 1:
        s = (s - s.mean()) / s.std()
    return s


def gen_sources(plan, t_count, master_seed, trial=0):
    """Stack one source per entry of ``plan`` into an (M, T) matrix."""
    return np.vstack(
        [gen_source(spec, t_count, derive_seed(master_seed, trial, k)) for k, spec in enumerate(plan)]
    )


def gen_mixing(m, seed=None, max_cond=1e3):
    """Random mixing matrix with i.i.d. U(-1, 1) entries.

    Draws are repeated until the 2-norm condition number is at most
    ``max_cond``.
    """
    if m < 2:
        raise ValueError("mixing needs m >= 2")
    rng = _rng(seed)
    while True:
        a = rng.uniform(-1.0, 1.0, (m, m))
        if np.linalg.cond(a) <= max_cond:
            return MixingModel(a)


def mix(model, s, seed=None):
    """Observations ``x = A s + v`` with Gaussian noise of std ``model.noise_std``."""
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != model.dims:
        raise ValueError(f"sources of shape {s.shape} do not match a {model.dims}x{model.dims} mixing")
    x = model.a @ s
    if model.noise_std > 0:
        x = x + _rng(seed).normal(0.0, model.noise_std, x.shape)
    return x


def parse_source_plan(text):
    """Parse ``"uniform,laplacian,..."`` into a list of :class:`SourceSpec`."""
    kinds = [k.strip() for k in text.split(",") if k.strip()]
    if not kinds:
        raise ValueError("empty source plan")
    return [SourceSpec(k) for k in kinds]
