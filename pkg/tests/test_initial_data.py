import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hallmhd import (
    EPSILON_MAX,
    DataRecipe,
    GridResolutionError,
    annular_bump,
    build_beltrami_data,
    build_seed,
    bump_profile,
    check_condition,
    check_grid_for_recipe,
    data_norms,
    helical_project,
    make_grid,
    norm_l2,
    random_solenoidal,
    structure_residuals,
    zeros_vector,
)
from hallmhd.initial_data import DataNormReport

from oracles import helical_mode


# -- recipe ---------------------------------------------------------------------


@given(st.floats(min_value=1e-6, max_value=EPSILON_MAX - 1e-9))
def test_recipe_amplitude_recomputable(eps):
    recipe = DataRecipe(epsilon=eps)
    expected = np.sqrt(np.log(np.log(1.0 / eps))) / eps
    assert abs(recipe.amplitude - expected) <= 1e-14 * expected


@given(st.one_of(
    st.floats(max_value=0.0),
    st.floats(min_value=EPSILON_MAX, max_value=1.0),
))
def test_recipe_rejects_out_of_range(eps):
    with pytest.raises(ValueError):
        DataRecipe(epsilon=eps)


def test_recipe_rejects_unknown_profile():
    with pytest.raises(ValueError, match="profile"):
        DataRecipe(epsilon=0.2, profile="linear-ramp")


# -- bump profile ------------------------------------------------------------------


def test_profile_plateau_and_support():
    eps = 0.2
    assert bump_profile(1.0, eps) == 1.0
    assert bump_profile(1.0 - eps / 2, eps) == 1.0
    assert bump_profile(1.0 + eps / 2, eps) == 1.0
    assert bump_profile(1.5, eps) == 0.0
    assert bump_profile(1.0 - eps, eps) == 0.0
    assert bump_profile(0.0, eps) == 0.0


def test_profile_transition_value():
    # midpoint of the falling transition: the mollifier blend is 1/2 by the
    # symmetry phi(x)/(phi(x)+phi(1-x)); only argument roundoff remains
    assert bump_profile(1.15, 0.2) == pytest.approx(0.5, abs=1e-14)
    mid_rise = bump_profile(1.0 - 0.2 * 0.75, 0.2)
    assert 0.0 < mid_rise < 1.0
    assert mid_rise == pytest.approx(0.5, abs=1e-14)


@settings(max_examples=30)
@given(st.floats(min_value=0.0, max_value=2.0),
       st.floats(min_value=0.01, max_value=EPSILON_MAX - 1e-6))
def test_profile_range_and_support(r, eps):
    value = float(bump_profile(r, eps))
    assert 0.0 <= value <= 1.0
    if r < 1.0 - eps or r > 1.0 + eps:
        assert value == 0.0


def test_bump_is_radial(grid16, recipe):
    bump = annular_bump(recipe, grid16)
    kmag = grid16.kmag
    values = {}
    for idx in np.argwhere(np.abs(bump.coeffs) > 0)[:500]:
        r = round(float(kmag[tuple(idx)]), 12)
        v = float(np.real(bump.coeffs[tuple(idx)]))
        if r in values:
            assert abs(v - values[r]) <= 1e-13 * max(abs(v), 1.0)
        else:
            values[r] = v


def test_bump_refuses_unrepresentable_grid(recipe):
    tiny = make_grid(8, 8.0 * np.pi / 0.2)  # k_max = 0.2 < 1.2
    with pytest.raises(GridResolutionError):
        annular_bump(recipe, tiny)


def test_grid_report_flags(recipe):
    fine = make_grid(64, 8.0 * np.pi / 0.2)
    rep = check_grid_for_recipe(fine, recipe)
    assert rep["representable"] and rep["fine"] and not rep["dealias_headroom"]
    coarse = make_grid(32, 16.0 * np.pi)
    rep = check_grid_for_recipe(coarse, recipe)
    assert rep["representable"] and not rep["fine"] and rep["dealias_headroom"]


# -- seed and curl eigenfield ----------------------------------------------------------


def test_seed_first_component_vanishes(grid16, recipe):
    seed = build_seed(recipe, grid16)
    assert np.max(np.abs(seed.coeffs[0])) == 0.0


def test_seed_is_solenoidal_and_real(grid16, recipe):
    seed = build_seed(recipe, grid16)
    assert seed.solenoidal_residual() <= 1e-12
    assert seed.hermitian_residual() <= 1e-13


def test_seed_matches_symbol(grid16, recipe):
    # coefficients must be amplitude * (0, i k3, -i k2) * bump(k)
    seed = build_seed(recipe, grid16)
    bump = annular_bump(recipe, grid16).coeffs
    kx, ky, kz = grid16.deriv_axes
    amp = recipe.amplitude
    assert np.allclose(seed.coeffs[1], amp * 1j * kz * bump, atol=1e-15)
    assert np.allclose(seed.coeffs[2], -amp * 1j * ky * bump, atol=1e-15)


def test_beltrami_fixed_point_and_kernel(grid16):
    plus = helical_mode(grid16, (1, 2, 0), sign=+1)
    from hallmhd import SpectralVectorField
    w = SpectralVectorField(grid16, plus)
    out = build_beltrami_data(w)
    assert norm_l2(out - 2.0 * w) <= 1e-12 * norm_l2(w)
    minus = SpectralVectorField(grid16, helical_mode(grid16, (1, 2, 0), sign=-1))
    assert norm_l2(build_beltrami_data(minus)) <= 1e-13 * norm_l2(minus)


def test_beltrami_from_random_seed(grid16, rng):
    w = random_solenoidal(grid16, rng)
    u0 = build_beltrami_data(w)
    div_res, bel_res = structure_residuals(u0)
    assert div_res <= 1e-12
    assert bel_res <= 1e-12


def test_beltrami_rejects_mean(grid16, rng):
    w = random_solenoidal(grid16, rng)
    coeffs = w.coeffs.copy()
    coeffs[0, 0, 0, 0] = 1.0
    from hallmhd import SpectralVectorField
    with pytest.raises(ValueError, match="mean-free"):
        build_beltrami_data(SpectralVectorField(grid16, coeffs))


def test_helical_projector_idempotent(grid16, rng):
    w = random_solenoidal(grid16, rng)
    p = helical_project(w, +1)
    assert norm_l2(helical_project(p, +1) - p) <= 1e-12 * norm_l2(p)
    q = helical_project(w, -1)
    assert norm_l2((p + q) - w) <= 1e-12 * norm_l2(w)


def test_structure_residuals_edge_cases(grid16, rng):
    zero = zeros_vector(grid16)
    assert structure_residuals(zero) == (0.0, 0.0)
    generic = random_solenoidal(grid16, rng)
    _, bel = structure_residuals(generic)
    assert bel > 0.1


# -- norms of the constructed datum ------------------------------------------------------


def test_data_norms_zero_field(grid16, recipe):
    rep = data_norms(zeros_vector(grid16), recipe)
    assert rep.l1_hat == rep.l2 == rep.linf_first == rep.h3 == 0.0


def test_linf_first_attained_at_origin(u0_32, recipe):
    # the first component's transform is nonnegative, so the sup sits at x = 0
    phys = u0_32.component(0).to_physical()
    rep = data_norms(u0_32, recipe)
    assert phys[0, 0, 0] == pytest.approx(rep.linf_first, rel=1e-12)
    assert rep.linf_first <= rep.l1_hat


def test_first_component_transform_nonnegative(u0_32):
    first = u0_32.coeffs[0]
    assert np.min(np.real(first)) >= -1e-15 * np.max(np.abs(first))
    assert np.max(np.abs(np.imag(first))) <= 1e-15 * np.max(np.abs(first))


def test_scaling_ratios_stay_in_band():
    # sweep over shell widths on strictly resolving grids
    ratios_l1, ratios_l2, linfs = [], [], []
    for eps, n in ((0.28, 48), (0.2, 56), (0.12, 88)):
        grid = make_grid(n, 8.0 * np.pi / eps)
        recipe = DataRecipe(eps)
        assert check_grid_for_recipe(grid, recipe)["fine"]
        u0 = build_beltrami_data(build_seed(recipe, grid))
        rep = data_norms(u0, recipe)
        ratios_l1.append(rep.ratio_l1)
        ratios_l2.append(rep.ratio_l2)
        linfs.append(rep.linf_first)
    assert max(ratios_l1) <= 4.0 * min(ratios_l1)
    assert max(ratios_l2) <= 4.0 * min(ratios_l2)
    # largeness trend: the sup norm grows as the shell narrows
    assert linfs == sorted(linfs)


# -- smallness gate ---------------------------------------------------------------------


def _report(l1=1.0, l2=1.0, linf=0.5, h3=2.0, eps=0.2):
    root = np.sqrt(np.log(np.log(1.0 / eps)))
    return DataNormReport(epsilon=eps, l1_hat=l1, l2=l2, linf_first=linf, h3=h3,
                          ratio_l1=l1 / root, ratio_l2=l2 / (root / np.sqrt(eps)))


def test_condition_zero_data_passes(recipe):
    rep = _report(l1=0.0, l2=0.0)
    result = check_condition(rep, 0.0, 0.0, recipe, constant_C=1.0, delta=0.01)
    assert result.passed
    assert result.lhs == 0.0


def test_condition_formula_value(recipe):
    rep = _report(l1=0.5, l2=0.8)
    result = check_condition(rep, 0.1, 0.2, recipe, constant_C=1.0, delta=0.01)
    eps = recipe.epsilon
    base = 0.1**2 + 0.2**2 + eps * 0.8 * 1.5
    expected = base * np.exp(1.0 * 1.5 * (0.5 + eps * 0.8))
    assert result.lhs == pytest.approx(expected, rel=1e-14)
    assert result.passed == (expected <= 0.01)


def test_condition_monotone_in_each_input(recipe):
    base = check_condition(_report(), 0.1, 0.2, recipe).log_lhs
    assert check_condition(_report(), 0.11, 0.2, recipe).log_lhs >= base
    assert check_condition(_report(), 0.1, 0.21, recipe).log_lhs >= base
    assert check_condition(_report(l1=1.1), 0.1, 0.2, recipe).log_lhs >= base
    assert check_condition(_report(l2=1.1), 0.1, 0.2, recipe).log_lhs >= base


def test_condition_rejects_bad_inputs(recipe):
    with pytest.raises(ValueError):
        check_condition(_report(), -0.1, 0.0, recipe)
    with pytest.raises(ValueError):
        check_condition(_report(), 0.0, 0.0, recipe, constant_C=0.0)
    with pytest.raises(ValueError):
        check_condition(_report(), 0.0, 0.0, recipe, delta=-1.0)


def test_condition_regression_fixture(u0_32, recipe):
    # frozen desk-grid value (32^3, box 16*pi, eps = 0.2, C = 1, delta = 0.01)
    rep = data_norms(u0_32, recipe)
    result = check_condition(rep, 0.0, 0.0, recipe, constant_C=1.0, delta=0.01)
    assert not result.passed
    assert result.log_lhs == pytest.approx(611.5718739972033, rel=1e-9)
