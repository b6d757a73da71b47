import numpy as np
import pytest

from hallmhd import (
    SpectralScalarField,
    SpectralVectorField,
    make_grid,
    random_scalar,
    random_solenoidal,
    read_checkpoint,
    to_physical,
    to_spectral,
    write_checkpoint,
)

from oracles import mode_index


def test_constant_field_single_coefficient():
    grid = make_grid(8, 2.0 * np.pi)
    field = to_spectral(grid, np.ones(grid.shape))
    assert field.coeffs[0, 0, 0] == pytest.approx(1.0)
    rest = field.coeffs.copy()
    rest[0, 0, 0] = 0.0
    assert np.max(np.abs(rest)) < 1e-15


def test_cosine_two_symmetric_coefficients():
    grid = make_grid(8, 2.0 * np.pi)
    x = np.arange(8) * grid.dx
    X = x[:, None, None] * np.ones(grid.shape)
    field = to_spectral(grid, np.cos(grid.dk * X))
    plus = field.coeffs[mode_index(grid, (1, 0, 0))]
    minus = field.coeffs[mode_index(grid, (-1, 0, 0))]
    assert plus == pytest.approx(0.5, abs=1e-15)
    assert minus == pytest.approx(0.5, abs=1e-15)
    zeroed = field.coeffs.copy()
    zeroed[mode_index(grid, (1, 0, 0))] = 0.0
    zeroed[mode_index(grid, (-1, 0, 0))] = 0.0
    assert np.max(np.abs(zeroed)) < 1e-15


def test_round_trip_random_field(rng):
    grid = make_grid(16, 5.0)
    samples = rng.standard_normal(grid.shape)
    back = to_physical(to_spectral(grid, samples))
    assert np.max(np.abs(back - samples)) <= 1e-13 * np.max(np.abs(samples))


def test_hermitian_symmetry_of_real_fields(rng):
    grid = make_grid(16, 2.0 * np.pi)
    assert random_scalar(grid, rng).hermitian_residual() <= 1e-13
    assert random_solenoidal(grid, rng).hermitian_residual() <= 1e-13


def test_shape_validation():
    grid = make_grid(8, 1.0)
    with pytest.raises(ValueError, match="does not match"):
        to_spectral(grid, np.ones((4, 4, 4)))
    with pytest.raises(ValueError, match="does not match"):
        SpectralVectorField(grid, np.zeros((2,) + grid.shape, dtype=complex))


def test_grid_mismatch_rejected(rng):
    a = random_scalar(make_grid(8, 1.0), rng)
    b = random_scalar(make_grid(8, 2.0), rng)
    with pytest.raises(ValueError, match="different grids"):
        _ = a + b


def test_checkpoint_round_trip(tmp_path, rng):
    grid = make_grid(8, 2.5)
    vec = random_solenoidal(grid, rng)
    path = tmp_path / "state.ckpt"
    write_checkpoint(vec, path)
    back = read_checkpoint(path)
    assert back.grid == grid
    assert np.array_equal(back.coeffs, vec.coeffs)

    scal = random_scalar(grid, rng)
    write_checkpoint(scal, path)
    back = read_checkpoint(path, grid=grid)
    assert isinstance(back, SpectralScalarField)
    assert np.array_equal(back.coeffs, scal.coeffs)


def test_checkpoint_write_is_deterministic(tmp_path, rng):
    grid = make_grid(8, 2.5)
    vec = random_solenoidal(grid, rng)
    p1, p2 = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
    write_checkpoint(vec, p1)
    write_checkpoint(vec, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_checkpoint_rejects_corruption(tmp_path, rng):
    grid = make_grid(8, 2.5)
    vec = random_solenoidal(grid, rng)
    path = tmp_path / "state.ckpt"
    write_checkpoint(vec, path)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(bytes(raw))
    with pytest.raises(ValueError, match="magic"):
        read_checkpoint(bad)
    trunc = tmp_path / "trunc.ckpt"
    trunc.write_bytes(path.read_bytes()[:100])
    with pytest.raises(ValueError, match="expected"):
        read_checkpoint(trunc)
    with pytest.raises(ValueError, match="does not match"):
        read_checkpoint(path, grid=make_grid(8, 99.0))
