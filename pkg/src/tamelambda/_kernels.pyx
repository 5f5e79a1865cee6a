# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled polynomial kernels over F_ell (ell < 2**31).

Same contract as ``_kernels_py``: elements are coefficient lists, constant
term first; the monic modulus is given by its low coefficients.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t, uint64_t

ctypedef int64_t i64
ctypedef uint64_t u64

LIMIT = 2**31


cdef void _mulmod(const i64* a, const i64* b, const i64* mod, i64* out,
                  u64* work, int d, i64 ell) nogil:
    cdef int i, j, k, base
    cdef u64 t, ai, m = <u64>ell
    for k in range(2 * d - 1):
        work[k] = 0
    for i in range(d):
        ai = <u64>a[i]
        if ai == 0:
            continue
        for j in range(d):
            work[i + j] = (work[i + j] + ai * <u64>b[j]) % m
    # x^k -> -(sum c_i x^(k-d+i)); add (m - t) * c_i to stay unsigned
    for k in range(2 * d - 2, d - 1, -1):
        t = work[k] % m
        if t == 0:
            continue
        t = m - t
        base = k - d
        for i in range(d):
            work[base + i] = (work[base + i] + t * <u64>mod[i]) % m
    for i in range(d):
        out[i] = <i64>(work[i] % m)


cdef i64* _load(list xs, int d, i64 ell) except NULL:
    cdef i64* buf = <i64*>malloc(d * sizeof(i64))
    if buf == NULL:
        raise MemoryError()
    cdef int i
    for i in range(d):
        buf[i] = <i64>(xs[i] % ell) if i < len(xs) else 0
    return buf


cdef list _dump(const i64* buf, int d):
    return [buf[i] for i in range(d)]


def mulmod(list a, list b, list mod, i64 ell):
    if ell >= LIMIT:
        raise OverflowError("compiled kernel requires ell < 2**31")
    cdef int d = len(mod)
    cdef i64* A = _load(a, d, ell)
    cdef i64* B = _load(b, d, ell)
    cdef i64* C = _load(mod, d, ell)
    cdef i64* R = <i64*>malloc(d * sizeof(i64))
    cdef u64* W = <u64*>malloc((2 * d) * sizeof(u64))
    try:
        _mulmod(A, B, C, R, W, d, ell)
        return _dump(R, d)
    finally:
        free(A); free(B); free(C); free(R); free(W)


def sqrmod(list a, list mod, i64 ell):
    return mulmod(a, a, mod, ell)


def powmod(list a, object e, list mod, i64 ell):
    if ell >= LIMIT:
        raise OverflowError("compiled kernel requires ell < 2**31")
    if e < 0:
        raise ValueError("negative exponent")
    cdef int d = len(mod)
    cdef i64* base = _load(a, d, ell)
    cdef i64* C = _load(mod, d, ell)
    cdef i64* R = <i64*>malloc(d * sizeof(i64))
    cdef i64* T = <i64*>malloc(d * sizeof(i64))
    cdef u64* W = <u64*>malloc((2 * d) * sizeof(u64))
    cdef bytes bits = bin(e)[2:].encode() if e else b""
    cdef const unsigned char* bp = bits
    cdef Py_ssize_t nbits = len(bits), k
    cdef int i
    try:
        for i in range(d):
            R[i] = 0
        R[0] = 1 % ell
        with nogil:
            for k in range(nbits):
                _mulmod(R, R, C, T, W, d, ell)
                if bp[k] == 49:  # '1'
                    _mulmod(T, base, C, R, W, d, ell)
                else:
                    for i in range(d):
                        R[i] = T[i]
        return _dump(R, d)
    finally:
        free(base); free(C); free(R); free(T); free(W)
