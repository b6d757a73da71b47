import numpy as np
import pytest

from hallmhd import make_grid


def test_unit_spacing_lattice():
    grid = make_grid(8, 2.0 * np.pi)
    assert grid.dk == pytest.approx(1.0)
    # integer labels cover (-n/2, n/2]
    assert sorted(grid.modes.tolist()) == [-3, -2, -1, 0, 1, 2, 3, 4]


def test_spacing_from_box_side():
    grid = make_grid(64, 8.0 * np.pi / 0.2)
    assert grid.dk == pytest.approx(0.05)


@pytest.mark.parametrize("n, box", [(7, 1.0), (6, 1.0), (0, 1.0), (16, 0.0), (16, -2.0)])
def test_rejects_bad_arguments(n, box):
    with pytest.raises(ValueError):
        make_grid(n, box)


def test_dealias_mask_keeps_two_thirds():
    grid = make_grid(12, 2.0 * np.pi)
    keep = np.abs(grid.modes) <= 4  # floor(12/3)
    expected = keep[:, None, None] & keep[None, :, None] & keep[None, None, :]
    assert np.array_equal(grid.dealias_mask, expected)


def test_derivative_axes_zero_nyquist():
    grid = make_grid(8, 2.0 * np.pi)
    for ax in grid.deriv_axes:
        flat = ax.ravel()
        assert flat[4] == 0.0  # index n/2 is the Nyquist plane
    # the labelled axes keep it (magnitude uses |n/2|)
    assert grid.k_axes[0].ravel()[4] == pytest.approx(4.0)


def test_multiindex_weights_match_direct_sum():
    grid = make_grid(8, 2.0 * np.pi)
    kx, ky, kz = grid.k_axes
    direct = np.zeros(grid.shape)
    from hallmhd.grid import MULTI_INDICES
    assert len(MULTI_INDICES) == 20
    for bx, by, bz in MULTI_INDICES:
        direct += kx ** (2 * bx) * ky ** (2 * by) * kz ** (2 * bz)
    assert np.allclose(direct, grid.multiindex_weight_all, rtol=1e-13)
    assert np.allclose(grid.multiindex_weight_pos, grid.multiindex_weight_all - 1.0)


def test_grid_equality_and_determinism():
    a = make_grid(16, 3.0)
    b = make_grid(16, 3.0)
    assert a == b
    assert np.array_equal(a.kmag, b.kmag)
