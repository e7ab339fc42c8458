"""
Separating two uniform sources with the Jacobi scheme
=====================================================

After whitening, the remaining unknown is a rotation. The Jacobi scheme
evaluates the contrast on a grid of angles and keeps the smallest one.
"""

import numpy as np

from ccs_ica import (
    ContrastConfig,
    SourceSpec,
    amari_error,
    gen_mixing,
    gen_sources,
    mix,
    run_jacobi_ica,
    whiten,
)
from ccs_ica.pairwise import scan_pair

s = gen_sources([SourceSpec("uniform")] * 2, 1000, master_seed=1)
model = gen_mixing(2, seed=1)
x = mix(model, s)

###############################################################################
# The contrast as a function of the rotation angle of the whitened data.
xw, _ = whiten(x)
best, angles, values = scan_pair(xw, cfg=ContrastConfig(stride=2))
for a, v in zip(angles[::4], values[::4]):
    bar = "#" * int(60 * v / values.max())
    print(f"{np.degrees(a):7.2f} deg  {v:.5f} {bar}")
print(f"minimum at {np.degrees(best):.2f} deg")

###############################################################################
# The full run sweeps until the applied angles add up to under one degree.
state = run_jacobi_ica(x)
print("sweeps:", state.iteration, "sum of |angles| per sweep (deg):", state.history)
print("Amari error x100:", round(amari_error(state.demixing, model.a).value_x100, 3))
