"""
A small Monte-Carlo benchmark
=============================

The harness draws fresh sources and a mixing matrix per trial, runs an
algorithm and scores it. Tables come out as CSV and the summary chart as
SVG. The same runs are available from the shell via ``ccs-ica bench``.
"""

import sys
from pathlib import Path

from ccs_ica import RunConfig, emit_figure, emit_table, run_benchmark

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
records = []
for algorithm in ("jacobi", "pairwise_gradient", "gradient"):
    cfg = RunConfig(algorithm=algorithm, samples=500, trials=4, t_s=5)
    records += run_benchmark(cfg, workers=1)

print(emit_table(records))
(out / "benchmark.svg").write_text(emit_figure(records))
print("wrote", out / "benchmark.svg")
