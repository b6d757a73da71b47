"""Wavenumber lattice, masks and norm weights for a periodic cube.

Conventions used by the whole package:

* Spectral coefficients are mode amplitudes: f(x) = sum_k f_hat(k) exp(i k.x).
  A constant field therefore has a single coefficient at k = 0 and Parseval
  reads  integral |f|^2 dx = box_side^3 * sum_k |f_hat(k)|^2.
* The lattice is k = dk * m with dk = 2*pi/box_side and integer triples m
  whose components lie in (-n/2, n/2].  Arrays follow numpy FFT index order.
* Differentiation zeroes the Nyquist planes first (the sign of the wavenumber
  is ambiguous there).
* Dealiasing keeps modes with every |m_i| <= floor(n/3) (2/3 rule), which is
  alias-free for quadratic products of in-band fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = ["GridSpec", "make_grid"]

# Multi-indices beta with |beta| <= 3, in a fixed deterministic order.
MULTI_INDICES = tuple(
    (i, j, k)
    for total in range(4)
    for i in range(total, -1, -1)
    for j in range(total - i, -1, -1)
    for k in (total - i - j,)
)


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the periodic cube [0, box_side)^3 sampled at n^3 points."""

    n: int
    box_side: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"n must be an even integer >= 8, got {self.n!r}")
        if not np.isfinite(self.box_side) or self.box_side <= 0:
            raise ValueError(f"box_side must be positive and finite, got {self.box_side!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "box_side", float(self.box_side))

    # -- scalars ---------------------------------------------------------

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.box_side

    @property
    def dx(self) -> float:
        return self.box_side / self.n

    @property
    def volume(self) -> float:
        return self.box_side**3

    @property
    def cell_volume(self) -> float:
        return self.dx**3

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n, self.n, self.n)

    @property
    def k_max(self) -> float:
        """Largest resolved wavenumber magnitude along an axis."""
        return self.dk * (self.n // 2)

    @property
    def dealias_k_max(self) -> float:
        """Largest per-axis wavenumber surviving the 2/3 rule."""
        return self.dk * (self.n // 3)

    # -- lattice arrays ----------------------------------------------------

    @cached_property
    def modes(self) -> np.ndarray:
        """Integer mode numbers in FFT order; the Nyquist plane is +n/2."""
        i = np.arange(self.n)
        return np.where(i <= self.n // 2, i, i - self.n).astype(np.int64)

    def _axis(self, values: np.ndarray, axis: int) -> np.ndarray:
        shape = [1, 1, 1]
        shape[axis] = self.n
        return values.reshape(shape)

    @cached_property
    def k_axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Wavenumber component arrays shaped for broadcasting."""
        k1 = self.dk * self.modes.astype(np.float64)
        return tuple(self._axis(k1, a) for a in range(3))

    @cached_property
    def deriv_axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Like :attr:`k_axes` but with the Nyquist entry zeroed."""
        k1 = self.dk * self.modes.astype(np.float64)
        k1[self.n // 2] = 0.0
        return tuple(self._axis(k1, a) for a in range(3))

    @cached_property
    def k2(self) -> np.ndarray:
        kx, ky, kz = self.k_axes
        return kx**2 + ky**2 + kz**2

    @cached_property
    def kmag(self) -> np.ndarray:
        return np.sqrt(self.k2)

    @cached_property
    def inv_k2(self) -> np.ndarray:
        out = np.zeros(self.shape)
        np.divide(1.0, self.k2, out=out, where=self.k2 > 0)
        return out

    @cached_property
    def inv_kmag(self) -> np.ndarray:
        out = np.zeros(self.shape)
        np.divide(1.0, self.kmag, out=out, where=self.kmag > 0)
        return out

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        keep = np.abs(self.modes) <= self.n // 3
        return (
            self._axis(keep, 0) & self._axis(keep, 1) & self._axis(keep, 2)
        )

    # -- Sobolev / multi-index weights --------------------------------------

    @cached_property
    def h3_weight(self) -> np.ndarray:
        """(1 + |k|^2)^3, the H^3 multiplier of the package norm convention."""
        return (1.0 + self.k2) ** 3

    @cached_property
    def multiindex_weight_all(self) -> np.ndarray:
        """sum over |beta| <= 3 of k^(2 beta); weight of sum_beta ||D^beta f||^2."""
        kx, ky, kz = self.k_axes
        x2, y2, z2 = kx**2, ky**2, kz**2
        out = np.zeros(self.shape)
        for bx, by, bz in MULTI_INDICES:
            out += x2**bx * y2**by * z2**bz
        return out

    @cached_property
    def multiindex_weight_pos(self) -> np.ndarray:
        """Same as :attr:`multiindex_weight_all` but excluding beta = 0."""
        return self.multiindex_weight_all - 1.0

    # -- helpers -------------------------------------------------------------

    def deriv_multiplier(self, beta: tuple[int, int, int]) -> np.ndarray:
        """Spectral symbol (i k)^beta with Nyquist-safe axes."""
        kx, ky, kz = self.deriv_axes
        return (1j * kx) ** beta[0] * (1j * ky) ** beta[1] * (1j * kz) ** beta[2]

    def fractional_multiplier(self, gamma: float) -> np.ndarray:
        """|k|^gamma with the k = 0 entry mapped to 0 for gamma != 0."""
        if gamma == 0:
            return np.ones(self.shape)
        out = np.zeros(self.shape)
        nz = self.kmag > 0
        np.power(self.kmag, gamma, out=out, where=nz)
        return out


def make_grid(n: int, box_side: float) -> GridSpec:
    """Build the lattice for a periodic cube with n points per axis.

    Rejects odd or too-small n and non-positive box_side.  Deterministic:
    equal arguments produce equal grids.
    """
    return GridSpec(n=n, box_side=box_side)
