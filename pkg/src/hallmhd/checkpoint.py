"""Binary checkpoint format for spectral fields.

Layout (all little-endian):

    bytes 0..7    magic string  b"HMHDSPC1"
    uint32        format version (currently 1)
    uint32        n, points per axis
    float64       box_side
    uint32        component count (1 scalar, 3 vector)
    then, per component, n^3 (re, im) float64 pairs in row-major lattice
    order (numpy FFT index order).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .fields import SpectralScalarField, SpectralVectorField
from .grid import GridSpec, make_grid

__all__ = ["write_checkpoint", "read_checkpoint", "MAGIC", "VERSION"]

MAGIC = b"HMHDSPC1"
VERSION = 1
_HEADER = struct.Struct("<8sIIdI")


def write_checkpoint(field, path) -> None:
    """Write a scalar or vector spectral field to ``path``."""
    coeffs = field.coeffs
    ncomp = 1 if isinstance(field, SpectralScalarField) else 3
    header = _HEADER.pack(MAGIC, VERSION, field.grid.n, field.grid.box_side, ncomp)
    data = np.ascontiguousarray(coeffs, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes())


def read_checkpoint(path, grid: GridSpec | None = None):
    """Read a checkpoint; returns a scalar or vector field.

    If ``grid`` is given it must match the stored geometry; otherwise the
    grid is reconstructed from the header.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated checkpoint header")
    magic, version, n, box_side, ncomp = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    if ncomp not in (1, 3):
        raise ValueError(f"{path}: bad component count {ncomp}")
    if grid is None:
        grid = make_grid(n, box_side)
    elif grid.n != n or grid.box_side != box_side:
        raise ValueError(
            f"{path}: geometry (n={n}, box_side={box_side}) does not match "
            f"requested grid (n={grid.n}, box_side={grid.box_side})"
        )
    expected = _HEADER.size + ncomp * n**3 * 16
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, got {len(raw)}")
    coeffs = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).astype(np.complex128)
    if ncomp == 1:
        return SpectralScalarField(grid, coeffs.reshape(grid.shape))
    return SpectralVectorField(grid, coeffs.reshape((3,) + grid.shape))
