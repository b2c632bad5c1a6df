# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: clause evaluation and batched Pauli-frame propagation.

Gate codes: 0=H 1=CX 2=CY 3=CZ 4=SWAP 5=R 6=M.
"""
from libc.stdint cimport int8_t, int32_t, int64_t, uint8_t


def first_falsified_packed(const int32_t[:] flat, const int64_t[:] offsets, const int8_t[:] assign):
    cdef Py_ssize_t nclauses = offsets.shape[0] - 1
    cdef Py_ssize_t c, i
    cdef int32_t lit
    cdef bint sat
    for c in range(nclauses):
        sat = False
        for i in range(offsets[c], offsets[c + 1]):
            lit = flat[i]
            if lit > 0:
                if assign[lit]:
                    sat = True
                    break
            else:
                if not assign[-lit]:
                    sat = True
                    break
        if not sat:
            return c
    return -1


cdef inline void _h(uint8_t[:, :] x, uint8_t[:, :] z, uint8_t[:] r, Py_ssize_t f, int32_t q) noexcept nogil:
    cdef uint8_t t = x[f, q]
    r[f] ^= x[f, q] & z[f, q]
    x[f, q] = z[f, q]
    z[f, q] = t


cdef inline void _s(uint8_t[:, :] x, uint8_t[:, :] z, uint8_t[:] r, Py_ssize_t f, int32_t q) noexcept nogil:
    r[f] ^= x[f, q] & z[f, q]
    z[f, q] ^= x[f, q]


cdef inline void _sdg(uint8_t[:, :] x, uint8_t[:, :] z, uint8_t[:] r, Py_ssize_t f, int32_t q) noexcept nogil:
    r[f] ^= x[f, q] & (z[f, q] ^ 1)
    z[f, q] ^= x[f, q]


cdef inline void _cx(uint8_t[:, :] x, uint8_t[:, :] z, uint8_t[:] r, Py_ssize_t f, int32_t a, int32_t b) noexcept nogil:
    r[f] ^= x[f, a] & z[f, b] & (x[f, b] ^ z[f, a] ^ 1)
    x[f, b] ^= x[f, a]
    z[f, a] ^= z[f, b]


cdef inline void _apply(int32_t code, int32_t a, int32_t b, uint8_t[:, :] x, uint8_t[:, :] z,
                        uint8_t[:] r, Py_ssize_t f) noexcept nogil:
    cdef uint8_t t
    if code == 0:
        _h(x, z, r, f, a)
    elif code == 1:
        _cx(x, z, r, f, a, b)
    elif code == 2:
        _sdg(x, z, r, f, b)
        _cx(x, z, r, f, a, b)
        _s(x, z, r, f, b)
    elif code == 3:
        _h(x, z, r, f, b)
        _cx(x, z, r, f, a, b)
        _h(x, z, r, f, b)
    elif code == 4:
        t = x[f, a]; x[f, a] = x[f, b]; x[f, b] = t
        t = z[f, a]; z[f, a] = z[f, b]; z[f, b] = t


def propagate(const int32_t[:] codes, const int32_t[:] qa, const int32_t[:] qb,
              uint8_t[:, :] x, uint8_t[:, :] z, uint8_t[:] sign,
              const int64_t[:] start, int32_t[:] bad, uint8_t[:, :] flips,
              const int32_t[:] meas_index, bint backward):
    """Push every frame through the gate list.

    Forward: frame f sees gates g >= start[f]; resets clear, measurements
    record ``flips[f, meas_index[g]]``.  Backward: frame f sees gates
    g < start[f] in reverse; non-Z content at a reset sets bad bit 1,
    any content at a measurement sets bad bit 2.
    """
    cdef Py_ssize_t n = codes.shape[0]
    cdef Py_ssize_t nf = x.shape[0]
    cdef Py_ssize_t g, f, k
    cdef int32_t code, a, b
    with nogil:
        for k in range(n):
            g = n - 1 - k if backward else k
            code = codes[g]
            a = qa[g]
            b = qb[g]
            for f in range(nf):
                if backward:
                    if g >= start[f]:
                        continue
                else:
                    if g < start[f]:
                        continue
                if code == 5:
                    if backward and x[f, a]:
                        bad[f] |= 1
                    x[f, a] = 0
                    z[f, a] = 0
                elif code == 6:
                    if backward:
                        if x[f, a] or z[f, a]:
                            bad[f] |= 2
                    else:
                        flips[f, meas_index[g]] = x[f, a]
                else:
                    _apply(code, a, b, x, z, sign, f)
