"""FFT entry points with a configurable worker count.

All transforms act on the trailing three axes so stacks of fields can be
transformed in one call.  The default is single-threaded, which keeps
reductions and transform output bit-reproducible across runs; raise the
worker count only for throwaway exploratory work.
"""

from __future__ import annotations

import scipy.fft as _sfft

_workers = 1


def set_fft_workers(count: int) -> None:
    """Set the thread count used by the FFT backend (1 = deterministic)."""
    global _workers
    if count < 1:
        raise ValueError("worker count must be >= 1")
    _workers = int(count)


def get_fft_workers() -> int:
    return _workers


def fftn(a):
    return _sfft.fftn(a, axes=(-3, -2, -1), workers=_workers)


def ifftn(a):
    return _sfft.ifftn(a, axes=(-3, -2, -1), workers=_workers)
