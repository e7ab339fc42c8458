"""Command line entry point: ``ccs-ica {gen,separate,bench}``.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bench import ALGORITHMS, RunConfig, emit_figure, emit_table, run_benchmark, separate
from .ica_core import ContrastConfig, OptimizerConfig
from .metrics import amari_error
from .pairwise import RotationGrid
from .signals import MixingModel, derive_seed, gen_mixing, gen_sources, mix, parse_source_plan

log = logging.getLogger("ccs_ica")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n\n{self.format_help()}")


def sidecar_path(path):
    return Path(path).with_suffix(".json")


def write_signals(path, data):
    """Write an (M, T) matrix as CSV, one row per time sample."""
    data = np.atleast_2d(data)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow([f"channel_{k}" for k in range(data.shape[0])])
        for row in data.T:
            writer.writerow([repr(float(v)) for v in row])


def read_signals(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or not all(h == f"channel_{k}" for k, h in enumerate(header)):
            raise ValueError(f"{path}: header must be channel_0..channel_{{M-1}}")
        rows = [[float(v) for v in row] for row in reader if row]
    return np.asarray(rows, dtype=float).T


def cmd_gen(args):
    plan = parse_source_plan(args.spec)
    m = len(plan)
    if m < 2:
        raise UsageError("gen needs at least two sources")
    s = gen_sources(plan, args.samples, args.seed)
    model = gen_mixing(m, derive_seed(args.seed, 0, m))
    model = MixingModel(model.a, args.noise_std)
    x = mix(model, s, derive_seed(args.seed, 0, m + 1))
    out = Path(args.out)
    sources = out.with_name(out.stem + ".sources.csv")
    write_signals(out, x)
    write_signals(sources, s)
    meta = {
        "mixing": model.a.tolist(),
        "noise_std": args.noise_std,
        "seed": args.seed,
        "samples": args.samples,
        "source_plan": [spec.kind for spec in plan],
        "sources_file": sources.name,
    }
    sidecar_path(out).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_separate(args):
    x = read_signals(args.input)
    cfg = ContrastConfig(alpha=args.alpha, stride=args.ts)
    opt = OptimizerConfig(gamma=args.gamma, epsilon=args.epsilon, max_iter=args.max_iter)
    state = separate(x, args.algo, cfg, opt, RotationGrid(), args.max_sweeps, args.max_outer)
    y = state.unmix(x)
    write_signals(args.out, y)
    meta = {
        "algorithm": args.algo,
        "alpha": args.alpha,
        "t_s": args.ts,
        "converged": bool(state.converged),
        "iterations": state.iteration,
        "demixing": state.demixing.tolist(),
        "mean": state.whitener.mean.tolist(),
    }
    source_meta = sidecar_path(args.input)
    if source_meta.exists():
        mixing = np.asarray(json.loads(source_meta.read_text())["mixing"])
        if mixing.shape == state.demixing.shape:
            meta["amari_x100"] = amari_error(state.demixing, mixing).value_x100
    Path(args.matrix or sidecar_path(args.out)).write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n"
    )
    return 0


def cmd_bench(args):
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    overrides = {
        "algorithm": args.algo,
        "trials": args.trials,
        "samples": args.samples,
        "dims": args.dims,
        "master_seed": args.seed,
        "t_s": args.ts,
        "alpha": args.alpha,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.spec:
        data["source_plan"] = [s.kind for s in parse_source_plan(args.spec)]
    try:
        cfg = RunConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid run configuration: {exc}") from exc
    records = run_benchmark(cfg, workers=args.workers)
    Path(args.out).write_text(emit_table(records, include_timing=args.timing), newline="")
    if args.svg:
        Path(args.svg).write_text(emit_figure(records))
    return 0


def build_parser():
    parser = _Parser(prog="ccs-ica", description="CCS-DIV independent component analysis")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("gen", help="generate sources and a random mixture")
    g.add_argument("--spec", required=True, help="comma separated source kinds")
    g.add_argument("--samples", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--noise-std", type=float, default=0.0)
    g.add_argument("--out", default="dataset.csv")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("separate", help="separate a mixture CSV")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--algo", choices=ALGORITHMS, default="jacobi")
    s.add_argument("--alpha", type=float, default=-0.99999)
    s.add_argument("--gamma", type=float, default=0.3)
    s.add_argument("--epsilon", type=float, default=1e-4)
    s.add_argument("--ts", type=int, default=1)
    s.add_argument("--max-iter", type=int, default=100)
    s.add_argument("--max-sweeps", type=int, default=10)
    s.add_argument("--max-outer", type=int, default=5)
    s.add_argument("--out", required=True, help="estimated sources CSV")
    s.add_argument("--matrix", help="demixing JSON (default: next to --out)")
    s.set_defaults(func=cmd_separate)

    b = sub.add_parser("bench", help="run a Monte-Carlo benchmark")
    b.add_argument("--config")
    b.add_argument("--out", required=True)
    b.add_argument("--svg")
    b.add_argument("--algo", choices=ALGORITHMS)
    b.add_argument("--trials", type=int)
    b.add_argument("--samples", type=int)
    b.add_argument("--dims", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--ts", type=int)
    b.add_argument("--alpha", type=float)
    b.add_argument("--spec", help="comma separated source kinds")
    b.add_argument("--workers", type=int)
    b.add_argument("--timing", action="store_true", help="add mean wall time column")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - reported as runtime failure
        print(f"ccs-ica: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
