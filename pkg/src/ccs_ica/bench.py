"""Monte-Carlo benchmark harness, CSV tables and SVG bar charts."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from itertools import groupby
from typing import List, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .ica_core import ContrastConfig, OptimizerConfig, run_gradient_ica
from .metrics import amari_error
from .pairwise import RotationGrid, run_jacobi_ica, run_pairwise_gradient_ica
from .signals import SourceSpec, derive_seed, gen_mixing, gen_sources, mix

__all__ = [
    "ALGORITHMS",
    "RunConfig",
    "TrialRecord",
    "separate",
    "run_trial",
    "run_benchmark",
    "emit_table",
    "emit_figure",
    "worker_count",
]

log = logging.getLogger(__name__)

ALGORITHMS = ("gradient", "pairwise_gradient", "jacobi")
THREADS_ENV = "CCS_ICA_THREADS"
TABLE_KEYS = ("dims", "samples", "algorithm", "t_s")


@dataclass
class RunConfig:
    """One benchmark cell.

    ``source_plan`` lists source kinds (or :class:`SourceSpec` field
    dicts); it is cycled to ``dims`` channels when shorter.
    """

    algorithm: str = "jacobi"
    alpha: float = -0.99999
    gamma: float = 0.3
    epsilon: float = 1e-4
    t_s: int = 1
    grid: RotationGrid = field(default_factory=RotationGrid)
    dims: int = 2
    samples: int = 1000
    trials: int = 20
    master_seed: int = 0
    source_plan: List[SourceSpec] = field(default_factory=lambda: [SourceSpec("uniform")])
    max_iter: int = 100
    max_sweeps: int = 10
    max_outer: int = 5

    def __post_init__(self):
        if isinstance(self.grid, dict):
            self.grid = RotationGrid(**self.grid)
        self.source_plan = [_as_spec(s) for s in self.source_plan]
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.dims < 2:
            raise ValueError("dims must be >= 2")
        if self.samples <= self.dims:
            raise ValueError("samples must exceed dims")
        if self.t_s < 1:
            raise ValueError("t_s must be >= 1")
        if not self.source_plan:
            raise ValueError("source_plan must not be empty")

    @property
    def plan(self) -> List[SourceSpec]:
        return [self.source_plan[k % len(self.source_plan)] for k in range(self.dims)]

    @property
    def contrast(self) -> ContrastConfig:
        return ContrastConfig(alpha=self.alpha, stride=self.t_s)

    @property
    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(gamma=self.gamma, epsilon=self.epsilon, max_iter=self.max_iter)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown RunConfig fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        d = asdict(self)
        d["source_plan"] = [asdict(s) for s in self.source_plan]
        return d


def _as_spec(item):
    if isinstance(item, SourceSpec):
        return item
    if isinstance(item, str):
        return SourceSpec(item)
    return SourceSpec(**item)


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    seed: int
    amari_x100: float
    wall_seconds: float
    converged: bool
    algorithm: str
    dims: int
    samples: int
    t_s: int
    error: str = ""


def separate(x, algorithm, cfg=ContrastConfig(), opt=OptimizerConfig(),
             grid=RotationGrid(), max_sweeps=10, max_outer=5):
    """Dispatch to one of the three separation algorithms."""
    if algorithm == "gradient":
        return run_gradient_ica(x, cfg, opt)
    if algorithm == "pairwise_gradient":
        return run_pairwise_gradient_ica(x, cfg, opt, max_outer=max_outer)
    if algorithm == "jacobi":
        return run_jacobi_ica(x, grid, cfg, max_sweeps=max_sweeps)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _trial_seed(master_seed, index):
    return int(np.random.SeedSequence(int(master_seed), spawn_key=(int(index),)).generate_state(1)[0])


def run_trial(cfg, index):
    """Generate, mix, separate and score trial ``index`` of ``cfg``.

    Only the separation call is timed. Failures inside the algorithm are
    recorded (``converged=False``, ``error`` set, score of the identity
    map) instead of raised.
    """
    s = gen_sources(cfg.plan, cfg.samples, cfg.master_seed, index)
    model = gen_mixing(cfg.dims, derive_seed(cfg.master_seed, index, cfg.dims))
    x = mix(model, s, derive_seed(cfg.master_seed, index, cfg.dims + 1))
    error = ""
    t0 = time.perf_counter()
    try:
        state = separate(x, cfg.algorithm, cfg.contrast, cfg.optimizer, cfg.grid,
                         cfg.max_sweeps, cfg.max_outer)
        demixing, converged = state.demixing, state.converged
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        log.warning("trial %d failed: %s", index, exc)
        demixing, converged, error = np.eye(cfg.dims), False, f"{type(exc).__name__}: {exc}"
    wall = time.perf_counter() - t0
    return TrialRecord(
        trial_index=index,
        seed=_trial_seed(cfg.master_seed, index),
        amari_x100=amari_error(demixing, model.a).value_x100,
        wall_seconds=wall,
        converged=bool(converged),
        algorithm=cfg.algorithm,
        dims=cfg.dims,
        samples=cfg.samples,
        t_s=cfg.t_s,
        error=error,
    )


def worker_count(trials, workers=None):
    """Pool size: ``workers`` or the CPU count, capped by ``$CCS_ICA_THREADS``."""
    n = workers if workers is not None else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, min(n, trials))


def run_benchmark(cfg, workers=None):
    """Run all trials of ``cfg``; records come back sorted by trial index."""
    n = worker_count(cfg.trials, workers)
    indices = range(cfg.trials)
    if n == 1:
        records = [run_trial(cfg, i) for i in indices]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            records = list(pool.map(run_trial, [cfg] * cfg.trials, indices))
    return sorted(records, key=lambda r: r.trial_index)


def _fmt(v):
    return repr(float(v))


def _key(record, keys):
    return tuple(getattr(record, k) for k in keys)


def emit_table(records: Sequence[TrialRecord], group_by=TABLE_KEYS, include_timing=True):
    """Aggregate records into an RFC-4180 CSV string.

    One row per distinct ``group_by`` key, sorted by key, with the trial
    count, mean and population variance of ``amari_x100`` and (optionally)
    the mean wall time.
    """
    records = list(records)
    if not records:
        raise ValueError("cannot build a table from zero records")
    group_by = tuple(group_by)
    header = list(group_by) + ["trials", "mean_amari_x100", "var_amari_x100"]
    if include_timing:
        header.append("mean_wall_seconds")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    ordered = sorted(records, key=lambda r: (_key(r, group_by), r.trial_index))
    for key, group in groupby(ordered, key=lambda r: _key(r, group_by)):
        group = list(group)
        scores = np.array([r.amari_x100 for r in group])
        row = [str(k) for k in key] + [
            str(len(group)),
            _fmt(math.fsum(scores) / len(scores)),
            _fmt(np.var(scores)),
        ]
        if include_timing:
            row.append(_fmt(math.fsum(r.wall_seconds for r in group) / len(group)))
        writer.writerow(row)
    return buf.getvalue()


def _nice_ceiling(v):
    if v <= 0:
        return 1.0
    exp = 10 ** math.floor(math.log10(v))
    for mult in (1, 2, 2.5, 5, 10):
        if mult * exp >= v:
            return mult * exp
    return 10 * exp


def emit_figure(records: Sequence[TrialRecord], title="Average Amari error (x100)",
                width=480, height=320):
    """Static SVG bar chart of the mean ``amari_x100`` per algorithm."""
    records = list(records)
    if not records:
        raise ValueError("cannot draw a figure from zero records")
    means = {}
    for algo in sorted({r.algorithm for r in records}):
        vals = [r.amari_x100 for r in records if r.algorithm == algo]
        means[algo] = math.fsum(vals) / len(vals)
    left, right, top, bottom = 56, 16, 40, 48
    plot_w = width - left - right
    plot_h = height - top - bottom
    ymax = _nice_ceiling(max(means.values()))
    slot = plot_w / len(means)
    bar_w = slot * 0.6
    base = top + plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<text x="{width / 2:.3f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{base}" stroke="black"/>',
        f'<line x1="{left}" y1="{base}" x2="{width - right}" y2="{base}" stroke="black"/>',
    ]
    for k in range(5):
        val = ymax * k / 4
        y = base - plot_h * k / 4
        out.append(
            f'<text x="{left - 6}" y="{y + 4:.3f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="10">{val:g}</text>'
        )
    for idx, (algo, mean) in enumerate(means.items()):
        bar_h = plot_h * mean / ymax
        x = left + idx * slot + (slot - bar_w) / 2
        out.append(
            f'<rect class="bar" data-algorithm="{escape(algo)}" x="{x:.3f}" '
            f'y="{base - bar_h:.3f}" width="{bar_w:.3f}" height="{bar_h:.3f}" fill="#4c72b0"/>'
        )
        out.append(
            f'<text x="{x + bar_w / 2:.3f}" y="{base + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{escape(algo)}</text>'
        )
        out.append(
            f'<text x="{x + bar_w / 2:.3f}" y="{base - bar_h - 4:.3f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{mean:.2f}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
