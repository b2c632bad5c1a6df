"""Hot-loop kernels, compiled when available.

The Cython extension ``_ckernels`` is used if it was built; otherwise (or
with ``ESMSYNTH_PURE_PYTHON=1``) the numpy fallback in ``_pykernels`` is
selected.  ``BACKEND`` names the active implementation.
"""
from __future__ import annotations

import itertools
import os

import numpy as np

from . import _pykernels

_impl = _pykernels
BACKEND = "python"
if os.environ.get("ESMSYNTH_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

GATE_CODES = {"H": 0, "CX": 1, "CY": 2, "CZ": 3, "SWAP": 4, "R": 5, "M": 6}


def pack_clauses(clauses) -> tuple[np.ndarray, np.ndarray]:
    lengths = np.fromiter((len(c) for c in clauses), dtype=np.int64, count=len(clauses))
    offsets = np.zeros(len(clauses) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    flat = np.fromiter(itertools.chain.from_iterable(clauses), dtype=np.int32, count=int(offsets[-1]))
    return flat, offsets


def first_falsified(clauses, values, impl=None) -> int:
    """Index of the first clause with no true literal under ``values`` (indexed by var id)."""
    impl = impl or _impl
    if not clauses:
        return -1
    flat, offsets = pack_clauses(clauses)
    assign = np.asarray(values, dtype=np.int8)
    return int(impl.first_falsified_packed(flat, offsets, assign))


def propagate(codes, qa, qb, x, z, sign, start, bad, flips, meas_index, backward, impl=None) -> None:
    (impl or _impl).propagate(codes, qa, qb, x, z, sign, start, bad, flips, meas_index, bool(backward))
