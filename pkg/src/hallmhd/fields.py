"""Spectral representations of real scalar and vector fields.

Fields hold complex coefficient arrays in numpy FFT layout together with the
grid they live on.  Operations elsewhere in the package treat fields as
immutable values and return new instances, so they are safe to share between
threads.
"""

from __future__ import annotations

import numpy as np

from . import fftops
from .grid import GridSpec

__all__ = [
    "SpectralScalarField",
    "SpectralVectorField",
    "to_spectral",
    "to_physical",
    "vector_to_spectral",
    "vector_to_physical",
    "zeros_scalar",
    "zeros_vector",
    "random_scalar",
    "random_solenoidal",
]


def _check_grid(a, b):
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


class SpectralScalarField:
    """A real scalar field stored as complex mode amplitudes on a grid."""

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid: GridSpec, coeffs: np.ndarray):
        if coeffs.shape != grid.shape:
            raise ValueError(f"coefficient shape {coeffs.shape} does not match grid {grid.shape}")
        self.grid = grid
        self.coeffs = np.asarray(coeffs, dtype=np.complex128)

    def to_physical(self) -> np.ndarray:
        return np.real(fftops.ifftn(self.coeffs)) * self.grid.n**3

    def copy(self) -> "SpectralScalarField":
        return SpectralScalarField(self.grid, self.coeffs.copy())

    def hermitian_residual(self) -> float:
        """Max |c(-k) - conj(c(k))| relative to max |c|; 0 for a real field."""
        return _hermitian_residual(self.coeffs)

    def __add__(self, other):
        _check_grid(self, other)
        return SpectralScalarField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_grid(self, other)
        return SpectralScalarField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, factor):
        return SpectralScalarField(self.grid, self.coeffs * factor)

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralScalarField(self.grid, -self.coeffs)


class SpectralVectorField:
    """Three scalar components sharing one grid, stored as a (3, n, n, n) array."""

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid: GridSpec, coeffs: np.ndarray):
        if coeffs.shape != (3,) + grid.shape:
            raise ValueError(f"coefficient shape {coeffs.shape} does not match grid {(3,) + grid.shape}")
        self.grid = grid
        self.coeffs = np.asarray(coeffs, dtype=np.complex128)

    def component(self, i: int) -> SpectralScalarField:
        return SpectralScalarField(self.grid, self.coeffs[i])

    def to_physical(self) -> np.ndarray:
        return np.real(fftops.ifftn(self.coeffs)) * self.grid.n**3

    def copy(self) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, self.coeffs.copy())

    def hermitian_residual(self) -> float:
        return max(_hermitian_residual(self.coeffs[i]) for i in range(3))

    def solenoidal_residual(self) -> float:
        """||div w||_L2 / ||w||_L2 computed spectrally; 0 for the zero field."""
        kx, ky, kz = self.grid.deriv_axes
        div = 1j * (kx * self.coeffs[0] + ky * self.coeffs[1] + kz * self.coeffs[2])
        denom = np.sqrt(np.sum(np.abs(self.coeffs) ** 2))
        if denom == 0.0:
            return 0.0
        return float(np.sqrt(np.sum(np.abs(div) ** 2)) / denom)

    def __add__(self, other):
        _check_grid(self, other)
        return SpectralVectorField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_grid(self, other)
        return SpectralVectorField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, factor):
        return SpectralVectorField(self.grid, self.coeffs * factor)

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralVectorField(self.grid, -self.coeffs)


def _hermitian_residual(coeffs: np.ndarray) -> float:
    scale = np.max(np.abs(coeffs))
    if scale == 0.0:
        return 0.0
    flipped = np.conj(
        np.roll(coeffs[::-1, ::-1, ::-1], shift=(1, 1, 1), axis=(0, 1, 2))
    )
    return float(np.max(np.abs(coeffs - flipped)) / scale)


# -- transforms --------------------------------------------------------------


def to_spectral(grid: GridSpec, values: np.ndarray) -> SpectralScalarField:
    """Forward transform of physical samples into mode amplitudes."""
    values = np.asarray(values)
    if values.shape != grid.shape:
        raise ValueError(f"sample shape {values.shape} does not match grid {grid.shape}")
    return SpectralScalarField(grid, fftops.fftn(values) / grid.n**3)


def to_physical(field: SpectralScalarField) -> np.ndarray:
    """Inverse transform; returns the real physical samples."""
    return field.to_physical()


def vector_to_spectral(grid: GridSpec, values: np.ndarray) -> SpectralVectorField:
    values = np.asarray(values)
    if values.shape != (3,) + grid.shape:
        raise ValueError(f"sample shape {values.shape} does not match grid {(3,) + grid.shape}")
    return SpectralVectorField(grid, fftops.fftn(values) / grid.n**3)


def vector_to_physical(field: SpectralVectorField) -> np.ndarray:
    return field.to_physical()


def zeros_scalar(grid: GridSpec) -> SpectralScalarField:
    return SpectralScalarField(grid, np.zeros(grid.shape, dtype=np.complex128))


def zeros_vector(grid: GridSpec) -> SpectralVectorField:
    return SpectralVectorField(grid, np.zeros((3,) + grid.shape, dtype=np.complex128))


# -- random test fields -------------------------------------------------------


def random_scalar(grid: GridSpec, rng: np.random.Generator, amplitude: float = 1.0,
                  dealiased: bool = True) -> SpectralScalarField:
    """Seeded random real scalar field, band-limited by default.

    The field is normalised so its L2 norm equals ``amplitude`` (zero field
    if amplitude is 0).
    """
    coeffs = fftops.fftn(rng.standard_normal(grid.shape)) / grid.n**3
    if dealiased:
        coeffs = coeffs * grid.dealias_mask
    coeffs[0, 0, 0] = 0.0
    norm = np.sqrt(grid.volume * np.sum(np.abs(coeffs) ** 2))
    if norm > 0 and amplitude != 0.0:
        coeffs *= amplitude / norm
    elif amplitude == 0.0:
        coeffs[:] = 0.0
    return SpectralScalarField(grid, coeffs)


def random_solenoidal(grid: GridSpec, rng: np.random.Generator, amplitude: float = 1.0,
                      dealiased: bool = True) -> SpectralVectorField:
    """Seeded random mean-free divergence-free vector field.

    Band-limited by default so that quadratic products are alias-free, which
    the conservation identities rely on.  L2-normalised to ``amplitude``.
    """
    coeffs = fftops.fftn(rng.standard_normal((3,) + grid.shape)) / grid.n**3
    if dealiased:
        coeffs = coeffs * grid.dealias_mask
    coeffs[:, 0, 0, 0] = 0.0
    kx, ky, kz = grid.k_axes
    kdotw = kx * coeffs[0] + ky * coeffs[1] + kz * coeffs[2]
    coeffs[0] -= kx * kdotw * grid.inv_k2
    coeffs[1] -= ky * kdotw * grid.inv_k2
    coeffs[2] -= kz * kdotw * grid.inv_k2
    norm = np.sqrt(grid.volume * np.sum(np.abs(coeffs) ** 2))
    if norm > 0 and amplitude != 0.0:
        coeffs *= amplitude / norm
    elif amplitude == 0.0:
        coeffs[:] = 0.0
    return SpectralVectorField(grid, coeffs)
