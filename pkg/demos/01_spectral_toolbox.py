"""Tour of the spectral toolbox: transforms, operators, projections, norms.

Run with:  python3 demos/01_spectral_toolbox.py
"""

import numpy as np

from hallmhd import (
    advect,
    curl,
    derivative,
    divergence,
    fractional_power,
    gradient,
    inner_l2,
    leray_project,
    make_grid,
    norm_l2,
    random_scalar,
    random_solenoidal,
    sobolev_norm,
    to_physical,
    to_spectral,
)

rng = np.random.default_rng(0)

# A periodic cube: 32 points per axis on [0, 2*pi)^3, so dk = 1.
grid = make_grid(32, 2.0 * np.pi)
print(f"grid: n = {grid.n}, box = {grid.box_side:.4f}, dk = {grid.dk:.4f}")

# Transforms are an exact round trip.
samples = rng.standard_normal(grid.shape)
field = to_spectral(grid, samples)
print("round trip max error:", np.max(np.abs(to_physical(field) - samples)))

# Spectral derivatives are exact for band-limited data.
x = np.arange(grid.n) * grid.dx
X = x[:, None, None] * np.ones(grid.shape)
sine = to_spectral(grid, np.sin(3.0 * X))
dsine = derivative(sine, 1)
exact = 3.0 * np.cos(3.0 * X)
print("derivative max error:", np.max(np.abs(dsine.to_physical() - exact)))

# The classic vector identities hold to roundoff.
phi = random_scalar(grid, rng)
print("||curl grad phi|| =", norm_l2(curl(gradient(phi))))

# The divergence-free projection annihilates gradients and fixes solenoidal
# fields; together with dealiased products this gives exact skew symmetry of
# advection: the nonlinear term moves energy around without creating it.
w = random_solenoidal(grid, rng)
u = random_solenoidal(grid, rng)
print("||P grad phi|| =", norm_l2(leray_project(gradient(phi))))
print("div(P(w + grad phi)) residual:",
      leray_project(w + gradient(phi)).solenoidal_residual())
transport = advect(u, w)
print("advection energy pairing <(u.grad)w, w> =", inner_l2(transport, w))

# Fractional dissipation powers compose like exponents.
once = fractional_power(fractional_power(w, 0.6), 0.4)
direct = fractional_power(w, 1.0)
print("fractional composition max error:",
      np.max(np.abs(once.coeffs - direct.coeffs)))

# Sobolev norms: s = 0 is Parseval; higher s weighs small scales.
for s in (0.0, 1.0, 3.0):
    print(f"||w||_H^{s:g} = {sobolev_norm(w, s):.6f}")
print("physical-space L2 quadrature:",
      np.sqrt(np.sum(w.to_physical() ** 2) * grid.cell_volume))
