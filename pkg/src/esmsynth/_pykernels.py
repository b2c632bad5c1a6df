"""Pure-Python/numpy versions of the compiled kernels (same signatures)."""
from __future__ import annotations

import numpy as np


def first_falsified_packed(flat, offsets, assign) -> int:
    for c in range(len(offsets) - 1):
        for i in range(offsets[c], offsets[c + 1]):
            lit = int(flat[i])
            if (assign[lit] if lit > 0 else not assign[-lit]):
                break
        else:
            return c
    return -1


def _h(x, z, r, rows, q):
    xq = x[rows, q].copy()
    zq = z[rows, q]
    r[rows] ^= xq & zq
    x[rows, q] = zq
    z[rows, q] = xq


def _s(x, z, r, rows, q):
    r[rows] ^= x[rows, q] & z[rows, q]
    z[rows, q] ^= x[rows, q]


def _sdg(x, z, r, rows, q):
    r[rows] ^= x[rows, q] & (z[rows, q] ^ 1)
    z[rows, q] ^= x[rows, q]


def _cx(x, z, r, rows, a, b):
    r[rows] ^= x[rows, a] & z[rows, b] & (x[rows, b] ^ z[rows, a] ^ 1)
    x[rows, b] ^= x[rows, a]
    z[rows, a] ^= z[rows, b]


def propagate(codes, qa, qb, x, z, sign, start, bad, flips, meas_index, backward):
    n = len(codes)
    order = range(n - 1, -1, -1) if backward else range(n)
    start = np.asarray(start)
    for g in order:
        rows = np.nonzero(start > g)[0] if backward else np.nonzero(start <= g)[0]
        if rows.size == 0:
            continue
        code, a, b = int(codes[g]), int(qa[g]), int(qb[g])
        if code == 5:
            if backward:
                bad[rows] |= x[rows, a].astype(bad.dtype)
            x[rows, a] = 0
            z[rows, a] = 0
        elif code == 6:
            if backward:
                bad[rows] |= ((x[rows, a] | z[rows, a]).astype(bad.dtype) << 1)
            else:
                flips[rows, meas_index[g]] = x[rows, a]
        elif code == 0:
            _h(x, z, sign, rows, a)
        elif code == 1:
            _cx(x, z, sign, rows, a, b)
        elif code == 2:
            _sdg(x, z, sign, rows, b)
            _cx(x, z, sign, rows, a, b)
            _s(x, z, sign, rows, b)
        elif code == 3:
            _h(x, z, sign, rows, b)
            _cx(x, z, sign, rows, a, b)
            _h(x, z, sign, rows, b)
        elif code == 4:
            x[rows, a], x[rows, b] = x[rows, b].copy(), x[rows, a].copy()
            z[rows, a], z[rows, b] = z[rows, b].copy(), z[rows, a].copy()
