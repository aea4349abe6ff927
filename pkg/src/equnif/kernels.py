"""Selects the compiled kernels when available, else the pure-Python ones.

Set ``EQUNIF_PURE=1`` to force the pure implementation.
"""
from __future__ import annotations

import os

from . import _pure_kernels as pure

if os.environ.get("EQUNIF_PURE") == "1":
    _impl = pure
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = pure

BACKEND: str = _impl.BACKEND


def hilbert_basis_int(rows, bounds):
    try:
        return _impl.hilbert_basis_int(rows, bounds)
    except OverflowError:
        return pure.hilbert_basis_int(rows, bounds)


def cover_scan(covers, full, m):
    try:
        return _impl.cover_scan(covers, full, m)
    except OverflowError:
        return pure.cover_scan(covers, full, m)
