# cython: boundscheck=False, wraparound=False, nonecheck=False, cdivision=True
"""Compiled counting kernels: exhaustive evaluation over truncated rings.

Same interface as _countpure.count_range, but tables are C-contiguous
int32 numpy arrays and the hot loops run without the GIL, so thread-pool
workers scale across cores.  Terms are capped at 64 per polynomial.
"""

from libc.stdint cimport int32_t, int64_t

DEF MAX_TERMS = 64


def count_range(const int32_t[:, ::1] add, const int32_t[:, ::1] mul, pows,
                Py_ssize_t start, Py_ssize_t stop):
    n = len(pows)
    if len(pows[0]) > MAX_TERMS:
        raise ValueError("too many terms for the compiled kernel")
    if n == 1:
        return _count1(add, pows[0], start, stop)
    if n == 2:
        return _count2(add, mul, pows[0], pows[1], start, stop)
    if n == 3:
        return _count3(add, mul, pows[0], pows[1], pows[2], start, stop)
    raise ValueError("compiled kernel handles 1..3 variables")


def _count1(const int32_t[:, ::1] add, const int32_t[:, ::1] p0,
            Py_ssize_t start, Py_ssize_t stop):
    cdef Py_ssize_t nt = p0.shape[0]
    cdef Py_ssize_t v0, t
    cdef int32_t acc
    cdef int64_t count = 0
    with nogil:
        for v0 in range(start, stop):
            acc = p0[0, v0]
            for t in range(1, nt):
                acc = add[acc, p0[t, v0]]
            if acc == 0:
                count += 1
    return count


def _count2(const int32_t[:, ::1] add, const int32_t[:, ::1] mul,
            const int32_t[:, ::1] p0, const int32_t[:, ::1] p1,
            Py_ssize_t start, Py_ssize_t stop):
    cdef Py_ssize_t nt = p0.shape[0]
    cdef Py_ssize_t Q = p0.shape[1]
    cdef Py_ssize_t v0, v1, t
    cdef int32_t acc
    cdef int32_t row0[MAX_TERMS]
    cdef int64_t count = 0
    with nogil:
        for v0 in range(start, stop):
            for t in range(nt):
                row0[t] = p0[t, v0]
            for v1 in range(Q):
                acc = mul[row0[0], p1[0, v1]]
                for t in range(1, nt):
                    acc = add[acc, mul[row0[t], p1[t, v1]]]
                if acc == 0:
                    count += 1
    return count


def _count3(const int32_t[:, ::1] add, const int32_t[:, ::1] mul,
            const int32_t[:, ::1] p0, const int32_t[:, ::1] p1,
            const int32_t[:, ::1] p2, Py_ssize_t start, Py_ssize_t stop):
    cdef Py_ssize_t nt = p0.shape[0]
    cdef Py_ssize_t Q = p0.shape[1]
    cdef Py_ssize_t v0, v1, v2, t
    cdef int32_t acc
    cdef int32_t row0[MAX_TERMS]
    cdef int32_t row01[MAX_TERMS]
    cdef int64_t count = 0
    with nogil:
        for v0 in range(start, stop):
            for t in range(nt):
                row0[t] = p0[t, v0]
            for v1 in range(Q):
                for t in range(nt):
                    row01[t] = mul[row0[t], p1[t, v1]]
                for v2 in range(Q):
                    acc = mul[row01[0], p2[0, v2]]
                    for t in range(1, nt):
                        acc = add[acc, mul[row01[t], p2[t, v2]]]
                    if acc == 0:
                        count += 1
    return count
