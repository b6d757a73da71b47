"""The identity and estimate suite behind the ``verify`` subcommand.

Each check returns a measured value, its threshold and a pass flag; the suite
is seeded and deterministic for a fixed configuration.  Thresholds are the
package-wide contract values: identities must hold to near roundoff, while
estimate checks report measured constants and assert only boundedness.
"""

from __future__ import annotations

import statistics

import numpy as np

from .config import RunConfig
from .diagnostics import (
    cancellation_residuals,
    commutator_check,
    energy_rate_decomposition,
    forcing_bound_table,
    hall_commutator_term,
    hall_energy_residual,
)
from .evolution import (
    PhysicalParams,
    SchemeParams,
    State,
    TermToggles,
    background,
    background_residual,
    beltrami_forcing,
    integrate,
    recover_pressure,
    rhs_full,
    rhs_perturbation,
)
from .fields import (
    SpectralVectorField,
    random_scalar,
    random_solenoidal,
    to_spectral,
)
from .grid import make_grid
from .initial_data import DataRecipe, build_beltrami_data, build_seed, structure_residuals
from .operators import (
    advect,
    curl,
    divergence,
    fractional_power,
    gradient,
    inner_l2,
    leray_project,
    norm_l2,
    pointwise_product,
    sobolev_norm,
)

__all__ = ["run_verification"]


def _check(value: float, threshold: float) -> dict:
    return {"value": float(value), "threshold": float(threshold),
            "pass": bool(value <= threshold)}


def run_verification(config: RunConfig) -> dict:
    """Run the full identity/estimate suite; returns {check_name: verdict}."""
    grid = make_grid(config.grid.n, config.grid.box_side)
    params = PhysicalParams(config.params.mu, config.params.nu, config.params.alpha)
    recipe = DataRecipe(config.recipe.epsilon, config.recipe.profile)
    rng = np.random.default_rng(config.io.seed)
    checks: dict[str, dict] = {}

    # transforms and linear operators
    s = random_scalar(grid, rng)
    phys = s.to_physical()
    rt = to_spectral(grid, phys)
    scale = max(np.max(np.abs(s.coeffs)), 1e-300)
    checks["fft_roundtrip"] = _check(np.max(np.abs(rt.coeffs - s.coeffs)) / scale, 1e-13)

    quad = float(np.sqrt(np.sum(phys**2) * grid.cell_volume))
    checks["parseval"] = _check(abs(sobolev_norm(s, 0.0) - quad) / max(quad, 1e-300), 1e-12)

    phi = random_scalar(grid, rng)
    g_phi = gradient(phi)
    checks["curl_grad_zero"] = _check(norm_l2(curl(g_phi)) / max(norm_l2(g_phi), 1e-300), 1e-12)

    w = random_solenoidal(grid, rng)
    raw = SpectralVectorField(grid, np.stack([s.coeffs, phi.coeffs, (s + phi).coeffs]))
    checks["div_curl_zero"] = _check(
        norm_l2(divergence(curl(raw))) / max(norm_l2(raw), 1e-300), 1e-12)

    mixed = w + g_phi
    proj = leray_project(mixed)
    leray_res = max(
        proj.solenoidal_residual(),
        norm_l2(leray_project(proj) - proj) / max(norm_l2(proj), 1e-300),
        norm_l2(leray_project(g_phi)) / max(norm_l2(g_phi), 1e-300),
        norm_l2(leray_project(w) - w) / max(norm_l2(w), 1e-300),
    )
    checks["leray_projection"] = _check(leray_res, 1e-12)

    comp = fractional_power(fractional_power(s, 1.0), -1.0)
    checks["fractional_composition"] = _check(
        np.max(np.abs(comp.coeffs - s.coeffs)) / scale, 1e-12)

    u = random_solenoidal(grid, rng)
    adv = advect(u, w)
    checks["advection_skew_symmetry"] = _check(
        abs(inner_l2(adv, w)) / max(norm_l2(adv) * norm_l2(w), 1e-300), 1e-11)

    checks["hall_energy_neutrality"] = _check(hall_energy_residual(w), 1e-11)

    prod = pointwise_product(s, phi)
    checks["hermitian_symmetry"] = _check(prod.hermitian_residual(), 1e-13)

    # data structure
    u0 = build_beltrami_data(build_seed(recipe, grid))
    div_res, bel_res = structure_residuals(u0)
    checks["data_divergence"] = _check(div_res, 1e-12)
    checks["data_curl_eigenfield"] = _check(bel_res, 1e-12)

    # background system
    res_u, res_b = background_residual(u0, 1.3, params)
    checks["background_residual"] = _check(max(res_u, res_b), 1e-12)

    # residual forcing: multiplier form vs defining advective form (distinct
    # decay rates so neither form degenerates to zero)
    t_probe = 0.4
    probe = PhysicalParams(0.7, 1.3, params.alpha)
    U, B = background(u0, t_probe, probe)
    f_mult, _ = beltrami_forcing(U, B)
    grad_part = gradient(0.5 * (pointwise_product(B.component(0), B.component(0))
                                + pointwise_product(B.component(1), B.component(1))
                                + pointwise_product(B.component(2), B.component(2))
                                - pointwise_product(U.component(0), U.component(0))
                                - pointwise_product(U.component(1), U.component(1))
                                - pointwise_product(U.component(2), U.component(2))))
    f_def = advect(B, B) - advect(U, U) - grad_part
    pf_mult = leray_project(f_mult)
    pf_def = leray_project(f_def)
    denom = max(norm_l2(pf_def), norm_l2(pf_mult), 1e-300)
    checks["forcing_two_forms"] = _check(norm_l2(pf_mult - pf_def) / denom, 1e-10)

    table = forcing_bound_table(u0, recipe, params, (0.0, 1.0, 2.0, 4.0))
    span = max(table.ratio_span[k] / max(1.0, table.max_ratios[k]) for k in "FG")
    fg_span = max(table.ratio_span[k] / max(1.0, table.max_ratios[k]) for k in "fg")
    checks["forcing_shape_factorization"] = _check(max(span, fg_span), 1e-8)
    checks["forcing_multiplier_bound"] = {
        "value": float(max(r.F_h3 for r in table.rows)),
        "threshold": table.F_alpha_bound,
        "pass": table.F_alpha_bound_ok,
    }

    # cancellations
    c_rand = random_solenoidal(grid, rng)
    canc = cancellation_residuals(c_rand, 2.5 * c_rand)
    checks["cancellation_identities"] = _check(
        max(canc.triple_product, canc.max_dbeta, canc.parallel_advection), 1e-11)
    canc_bg = cancellation_residuals(U, B)
    checks["background_parallel_advection"] = _check(canc_bg.parallel_advection, 1e-11)

    # commutator estimate: sampled constants stay bounded
    ratios = []
    for _ in range(20):
        gf = random_scalar(grid, rng)
        ff = random_scalar(grid, rng)
        ratios.append(commutator_check(gf, ff, 3).ratio)
    med = statistics.median(ratios)
    checks["commutator_constant_bounded"] = _check(max(ratios) / max(med, 1e-300), 10.0)

    # energy-rate decomposition on random states
    worst = 0.0
    for _ in range(5):
        v = random_solenoidal(grid, rng, amplitude=0.3)
        c = random_solenoidal(grid, rng, amplitude=0.2)
        t = float(rng.uniform(0.0, 2.0))
        worst = max(worst, energy_rate_decomposition(v, c, t, u0, params).residual_rel)
    checks["energy_rate_identity"] = _check(worst, 1e-9)

    # the Hall energy term through its two routes
    rate = energy_rate_decomposition(c_rand, c_rand, 0.0, None, params)
    direct = rate.terms[2]
    comm = hall_commutator_term(c_rand)
    rscale = max(abs(direct), abs(comm), max(abs(x) for x in rate.terms), 1e-300)
    checks["hall_term_two_routes"] = _check(abs(direct - comm) / rscale, 1e-10)

    # full system vs split system, one right-hand side
    v = random_solenoidal(grid, rng, amplitude=0.3)
    c = random_solenoidal(grid, rng, amplitude=0.2)
    t = 0.7
    U, B = background(u0, t, params)
    du, db = rhs_full(v + U, c + B, params)
    dv, dc = rhs_perturbation(v, c, t, u0, params)
    dev = (norm_l2(du - (dv - params.mu * U)) + norm_l2(db - (dc - params.nu * B)))
    checks["split_consistency"] = _check(
        dev / max(norm_l2(du) + norm_l2(db), 1e-300), 1e-10)

    # pressure recovery completes the projection
    uu = random_solenoidal(grid, rng)
    bb = random_solenoidal(grid, rng)
    p = recover_pressure(uu, bb)
    x = advect(bb, bb) - advect(uu, uu)
    rec = gradient(p) + leray_project(x)
    checks["pressure_completeness"] = _check(
        norm_l2(rec - x) / max(norm_l2(x), 1e-300), 1e-10)

    # integrating factor reproduces the dissipative semigroup exactly
    off = TermToggles(advection=False, hall=False, coupling=False, forcing=False)
    st = State(0.0, uu.copy(), bb.copy(), kind="full")
    traj = integrate(st, 1.0, params, SchemeParams(dt=0.25), terms=off)
    lam2a = grid.fractional_multiplier(2.0 * params.alpha)
    exact_a = SpectralVectorField(grid, uu.coeffs * np.exp(-params.mu * lam2a) * grid.dealias_mask)
    exact_b = SpectralVectorField(grid, bb.coeffs * np.exp(-params.nu * grid.k2) * grid.dealias_mask)
    lin_dev = (norm_l2(traj.final.a - exact_a) / max(norm_l2(exact_a), 1e-300)
               + norm_l2(traj.final.b - exact_b) / max(norm_l2(exact_b), 1e-300))
    checks["integrator_linear_exactness"] = _check(lin_dev, 1e-12)

    # short two-system evolution agreement
    dt = 0.02
    steps = 10
    v0 = random_solenoidal(grid, rng, amplitude=0.05)
    c0 = random_solenoidal(grid, rng, amplitude=0.05)
    full0 = State(0.0, v0 + u0, c0 + u0, kind="full")
    pert0 = State(0.0, v0, c0, kind="perturbation")
    ftr = integrate(full0, steps * dt, params, SchemeParams(dt=dt), store_stride=steps)
    ptr = integrate(pert0, steps * dt, params, SchemeParams(dt=dt), U0=u0, store_stride=steps)
    Uf, Bf = background(u0, ftr.final.t, params)
    ev_dev = (sobolev_norm(ftr.final.a - (ptr.final.a + Uf), 3.0)
              + sobolev_norm(ftr.final.b - (ptr.final.b + Bf), 3.0))
    checks["split_evolution_agreement"] = _check(
        ev_dev / max(sobolev_norm(ftr.final.a, 3.0), 1e-300), 1e-8)

    return checks
