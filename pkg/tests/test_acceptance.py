"""Acceptance suite: one test per contract criterion, each printing a verdict.

Grid conventions for the fixtures:

* 64^3 with box 8*pi/0.2 (dk = eps/4): the fine norm-grade grid for the
  structural check.
* 32^3 with box 16*pi (dk = 0.125): the shell sits fully inside the 2/3
  dealias band, the evolution fixture grid.
* 16^3 with box 8*pi (dk = 0.25): the cheap identity-check grid.
"""

import csv

import numpy as np
import pytest

from hallmhd import (
    DataRecipe,
    PhysicalParams,
    SchemeParams,
    SeriesCollector,
    State,
    background,
    background_residual,
    bootstrap_monitor,
    build_beltrami_data,
    build_seed,
    cancellation_residuals,
    check_grid_for_recipe,
    data_norms,
    energy_rate_decomposition,
    forcing_bound_table,
    hall_energy_residual,
    integrate,
    make_grid,
    norm_l2,
    random_solenoidal,
    reformulation_check,
    sobolev_norm,
    structure_residuals,
    zeros_vector,
)
from hallmhd.cli import main as cli_main


def _verdict(name: str, passed: bool, detail: str) -> None:
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"{name}: {detail}"


# -- 1. structural hypotheses of the constructed datum -------------------------------


def test_acceptance_structural_hypotheses():
    grid = make_grid(64, 8.0 * np.pi / 0.2)
    recipe = DataRecipe(0.2)
    assert check_grid_for_recipe(grid, recipe)["fine"]
    u0 = build_beltrami_data(build_seed(recipe, grid))
    div_res, bel_res = structure_residuals(u0)
    _verdict(
        "structural hypotheses (64^3, eps = 0.2)",
        div_res <= 1e-12 and bel_res <= 1e-12,
        f"div_res = {div_res:.3e}, curl-eigenfield res = {bel_res:.3e} (<= 1e-12)",
    )


# -- 2. background oracle ---------------------------------------------------------------


def test_acceptance_background_oracle(grid32, u0_32):
    params = PhysicalParams(mu=0.7, nu=1.3, alpha=1.0)
    worst_dev = 0.0
    for dt in (0.5, 0.2, 1.0 / 3.0, 0.01):
        st = State(0.0, u0_32.copy(), u0_32.copy(), kind="background")
        traj = integrate(st, 2.0, params, SchemeParams(dt=dt))
        U, B = background(u0_32, traj.final.t, params)
        worst_dev = max(
            worst_dev,
            norm_l2(traj.final.a - U) / norm_l2(U),
            norm_l2(traj.final.b - B) / norm_l2(B),
        )
    worst_res = 0.0
    for t in (0.0, 0.9, 2.0):
        worst_res = max(worst_res, *background_residual(u0_32, t, params))
    _verdict(
        "background oracle",
        worst_dev <= 1e-12 and worst_res <= 1e-12,
        f"stepper deviation = {worst_dev:.3e}, system residual = {worst_res:.3e} "
        f"(<= 1e-12, dt in {{0.5, 0.2, 1/3, 0.01}})",
    )


# -- 3. reformulation equivalence ---------------------------------------------------------


@pytest.fixture(scope="module")
def reformulation_runs(grid32, u0_32):
    params = PhysicalParams(mu=1.0, nu=1.0, alpha=1.0)
    rng = np.random.default_rng(314159)
    v0 = random_solenoidal(grid32, rng, amplitude=1.0)
    c0 = random_solenoidal(grid32, rng, amplitude=1.0)
    scheme = SchemeParams(dt=5e-4)
    full = integrate(State(0.0, v0 + u0_32, c0 + u0_32, kind="full"),
                     1.0, params, scheme, store_stride=200)
    pert = integrate(State(0.0, v0, c0, kind="perturbation"),
                     1.0, params, scheme, U0=u0_32, store_stride=200)
    return params, full, pert


def test_acceptance_reformulation_equivalence(reformulation_runs, u0_32):
    params, full, pert = reformulation_runs
    deviation = reformulation_check(full, pert, u0_32, params)
    _verdict(
        "reformulation equivalence (32^3, dt = 5e-4, T = 1)",
        deviation <= 1e-6,
        f"max_t ||u-(v+U)||_H3 + ||b-(c+B)||_H3 = {deviation:.3e} (<= 1e-6)",
    )


# -- 4. identity suite ----------------------------------------------------------------------


def test_acceptance_identity_suite(grid16, u0_16, params_unit):
    rng = np.random.default_rng(271828)

    worst_hall = max(
        hall_energy_residual(random_solenoidal(grid16, rng)) for _ in range(10)
    )

    worst_cancel = 0.0
    for _ in range(5):
        c = random_solenoidal(grid16, rng)
        rep = cancellation_residuals(c, 1.7 * c)
        worst_cancel = max(worst_cancel, rep.triple_product, rep.max_dbeta,
                           rep.parallel_advection)
    U, B = background(u0_16, 0.8, params_unit)
    worst_cancel = max(worst_cancel, cancellation_residuals(U, B).parallel_advection)

    worst_energy = 0.0
    for _ in range(50):
        v = random_solenoidal(grid16, rng, amplitude=float(rng.uniform(0.05, 0.6)))
        c = random_solenoidal(grid16, rng, amplitude=float(rng.uniform(0.05, 0.6)))
        t = float(rng.uniform(0.0, 3.0))
        worst_energy = max(
            worst_energy,
            energy_rate_decomposition(v, c, t, u0_16, params_unit).residual_rel,
        )

    _verdict(
        "identity suite (16^3)",
        worst_hall <= 1e-11 and worst_cancel <= 1e-11 and worst_energy <= 1e-9,
        f"hall = {worst_hall:.3e} (<= 1e-11), cancellations = {worst_cancel:.3e} "
        f"(<= 1e-11), energy-rate residual over 50 states = {worst_energy:.3e} "
        f"(<= 1e-9)",
    )


# -- 5. forcing decay shapes -------------------------------------------------------------------


def test_acceptance_forcing_bound_shapes(u0_32, recipe, params_unit):
    table = forcing_bound_table(u0_32, recipe, params_unit, (0.0, 1.0, 2.0, 4.0))
    worst_span = max(
        table.ratio_span[k] / max(1.0, table.max_ratios[k]) for k in "FGfg"
    )
    f_h3 = table.rows[0].F_h3
    _verdict(
        "forcing decay shapes",
        worst_span <= 1e-10 and table.F_alpha_bound_ok,
        f"ratio spread over t in {{0,1,2,4}} = {worst_span:.3e} (<= 1e-10); "
        f"||F||_H3 = {f_h3:.4g} <= 2 mu eps (1+eps) ||U0||_H3 = "
        f"{table.F_alpha_bound:.4g}",
    )


# -- 6. self-convergence order ------------------------------------------------------------------


def test_acceptance_convergence_order(grid32, u0_32):
    params = PhysicalParams(mu=0.1, nu=0.1, alpha=1.0)
    rng = np.random.default_rng(161803)
    v0 = random_solenoidal(grid32, rng, amplitude=0.5)
    c0 = random_solenoidal(grid32, rng, amplitude=0.5)
    finals = []
    for dt in (0.05, 0.025, 0.0125):
        st = State(0.0, v0 + u0_32, c0 + u0_32, kind="full")
        finals.append(integrate(st, 0.5, params, SchemeParams(dt=dt)).final)
    e1 = norm_l2(finals[0].a - finals[1].a) + norm_l2(finals[0].b - finals[1].b)
    e2 = norm_l2(finals[1].a - finals[2].a) + norm_l2(finals[1].b - finals[2].b)
    order = float(np.log2(e1 / e2))
    _verdict(
        "self-convergence order (32^3, T = 0.5)",
        3.7 <= order <= 4.3,
        f"order = {order:.3f} from e(dt) = {e1:.3e}, e(dt/2) = {e2:.3e} (4 +/- 0.3)",
    )


# -- 7. decay-regime trend -----------------------------------------------------------------------


def test_acceptance_decay_regime_trend(grid32, u0_32, recipe):
    params = PhysicalParams(mu=1.0, nu=1.0, alpha=1.0)
    h3_u0 = sobolev_norm(u0_32, 3.0)
    ceiling = 1e-2 * h3_u0**2

    collector = SeriesCollector(params, U0=u0_32, stride=10)
    dense = []
    w3 = grid32.h3_weight

    def observer(state):
        collector(state)
        e = float(grid32.volume * np.sum(w3 * (
            np.sum(np.abs(state.a.coeffs) ** 2, axis=0)
            + np.sum(np.abs(state.b.coeffs) ** 2, axis=0))))
        dense.append((state.t, e))

    z = zeros_vector(grid32)
    integrate(State(0.0, z, z.copy(), kind="perturbation"), 5.0, params,
              SchemeParams(dt=0.02), U0=u0_32, observer=observer)

    max_energy = max(e for _, e in dense)
    final_energy = dense[-1][1]
    monitor = bootstrap_monitor(dense, eta=4.0 * max_energy)
    below = max_energy < ceiling
    _verdict(
        "decay-regime trend (eps = 0.2, T = 5)",
        below and monitor.held and final_energy < max_energy,
        f"max ||v||^2+||c||^2 = {max_energy:.4g} < 1e-2 ||U0||_H3^2 = "
        f"{ceiling:.4g}; final = {final_energy:.4g}; bootstrap held at "
        f"eta = {monitor.eta:.4g}",
    )


def test_acceptance_scaling_ratio_band():
    ratios_l1, ratios_l2 = [], []
    for eps, n in ((0.28, 48), (0.2, 56), (0.12, 88)):
        grid = make_grid(n, 8.0 * np.pi / eps)
        rec = DataRecipe(eps)
        u0 = build_beltrami_data(build_seed(rec, grid))
        rep = data_norms(u0, rec)
        ratios_l1.append(rep.ratio_l1)
        ratios_l2.append(rep.ratio_l2)
    band_l1 = max(ratios_l1) / min(ratios_l1)
    band_l2 = max(ratios_l2) / min(ratios_l2)
    _verdict(
        "scaling ratios across eps in {0.28, 0.2, 0.12}",
        band_l1 <= 4.0 and band_l2 <= 4.0,
        f"l1 ratio band = {band_l1:.3f}, l2 ratio band = {band_l2:.3f} (<= 4)",
    )


# -- 8. determinism ------------------------------------------------------------------------------


def test_acceptance_determinism(tmp_path):
    out = tmp_path / "run"
    argv = ["run-perturbation", "--n", "16", "--box-side", str(8.0 * np.pi),
            "--epsilon", "0.2", "--mu", "1.0", "--nu", "1.0", "--alpha", "1.0",
            "--dt", "0.01", "-T", "0.05", "-o", str(out),
            "--observer-stride", "1", "--seed", "11"]
    assert cli_main(argv) == 0
    first = (out / "series.csv").read_bytes()
    assert cli_main(argv) == 0
    second = (out / "series.csv").read_bytes()
    with open(out / "series.csv") as fh:
        n_rows = sum(1 for _ in csv.reader(fh)) - 1
    _verdict(
        "determinism",
        first == second and n_rows == 6,
        f"repeated runs produced byte-identical series.csv ({len(first)} bytes, "
        f"{n_rows} rows)",
    )
