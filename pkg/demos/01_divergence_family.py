"""
The convex divergence family
============================

The contrast is built from a one-parameter family of convex functions
``f(t; alpha)`` that vanish at ``t = 1``. Its two ends are the
Kullback-Leibler generators ``t log t - t + 1`` and ``t - 1 - log t``.
"""

import numpy as np

from ccs_ica import ccs_div, ccs_div_integral_2d, convex_f

# f is zero at 1 and grows on both sides, for every alpha
t = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
for alpha in (-1.0, -0.5, 0.0, 0.5, 1.0):
    print(f"alpha={alpha:+.1f}  f(t) =", np.round(convex_f(t, alpha), 4))

# near the ends the generic formula hands over smoothly to the limits
print("alpha -> -1:", convex_f(3.0, -1 + 1e-6), convex_f(3.0, -1.0))

###############################################################################
# On a grid, the divergence between a correlated Gaussian and the product
# of its marginals grows with the correlation and is zero without it.

z = np.linspace(-5, 5, 201)
dz = z[1] - z[0]
z1, z2 = np.meshgrid(z, z, indexing="ij")
marg = np.exp(-0.5 * z**2) / np.sqrt(2 * np.pi)
for rho in (0.0, 0.3, 0.6, 0.9):
    det = 1 - rho**2
    joint = np.exp(-(z1**2 - 2 * rho * z1 * z2 + z2**2) / (2 * det)) / (2 * np.pi * np.sqrt(det))
    print(f"rho={rho:.1f}  CCS-DIV={ccs_div_integral_2d(joint, marg, marg, -0.99999, dz * dz):.5f}")

###############################################################################
# The sample form only sees two vectors of density values.
print("sample form:", ccs_div([0.5, 0.5], [0.2, 0.8], 0.5))
