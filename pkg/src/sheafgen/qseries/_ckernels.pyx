# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 kernels with overflow detection.

Any intermediate that leaves int64 raises OverflowError; the caller then
redoes the operation on Python ints.
"""
import numpy as np
from libc.stdint cimport int64_t

cdef extern from *:
    """
    static inline int sg_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int sg_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int sg_mul_ovf(long long a, long long b, long long *r) nogil
    int sg_add_ovf(long long a, long long b, long long *r) nogil


cdef inline Py_ssize_t _lo(Py_ssize_t d) nogil:
    return -d if d < 0 else 0


cdef inline Py_ssize_t _hi(Py_ssize_t n, Py_ssize_t d) nogil:
    return n - d if d > 0 else n


def recur(int64_t[:, :, ::1] arr, long long c, Py_ssize_t iq, Py_ssize_t ix,
          Py_ssize_t iy, bint ascending):
    cdef Py_ssize_t nq = arr.shape[0], nx = arr.shape[1], ny = arr.shape[2]
    cdef Py_ssize_t j0 = _lo(ix), j1 = _hi(nx, ix), k0 = _lo(iy), k1 = _hi(ny, iy)
    cdef Py_ssize_t t, i, j, k
    cdef long long s, p, r
    cdef bint bad = 0
    if iq <= 0 or j0 >= j1 or k0 >= k1:
        return arr
    with nogil:
        for t in range(iq, nq):
            i = t if ascending else nq - 1 - (t - iq)
            for j in range(j0, j1):
                for k in range(k0, k1):
                    s = arr[i - iq, j, k]
                    if s == 0:
                        continue
                    if sg_mul_ovf(c, s, &p) or sg_add_ovf(arr[i, j + ix, k + iy], p, &r):
                        bad = 1
                        break
                    arr[i, j + ix, k + iy] = r
                if bad:
                    break
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in recur")
    return arr


def conv(int64_t[:, :, ::1] a, int64_t[:, :, ::1] b, Py_ssize_t nq_out):
    cdef Py_ssize_t nqa = a.shape[0], nxa = a.shape[1], nya = a.shape[2]
    cdef Py_ssize_t nqb = b.shape[0], nxb = b.shape[1], nyb = b.shape[2]
    out_np = np.zeros((nq_out, nxa + nxb - 1, nya + nyb - 1), dtype=np.int64)
    cdef int64_t[:, :, ::1] out = out_np
    cdef Py_ssize_t i, j, k, i2, j2, k2, m
    cdef long long av, bv, p, r
    cdef bint bad = 0
    with nogil:
        for i in range(min(nqa, nq_out)):
            m = min(nqb, nq_out - i)
            for j in range(nxa):
                for k in range(nya):
                    av = a[i, j, k]
                    if av == 0:
                        continue
                    for i2 in range(m):
                        for j2 in range(nxb):
                            for k2 in range(nyb):
                                bv = b[i2, j2, k2]
                                if bv == 0:
                                    continue
                                if sg_mul_ovf(av, bv, &p) or sg_add_ovf(out[i + i2, j + j2, k + k2], p, &r):
                                    bad = 1
                                    break
                                out[i + i2, j + j2, k + k2] = r
                            if bad:
                                break
                        if bad:
                            break
                    if bad:
                        break
                if bad:
                    break
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in conv")
    return out_np
