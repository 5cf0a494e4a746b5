# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate kernels; same contract as ``_pykernels``."""


def apply_1q(double complex[:, ::1] v, u, int bit, long ctrl_mask=0, long ctrl_val=0):
    cdef double complex u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    cdef Py_ssize_t dim = v.shape[0], k = v.shape[1]
    cdef long step = 1 << bit
    cdef Py_ssize_t i, j, i1
    cdef double complex a0, a1
    for i in range(dim):
        if (i >> bit) & 1 or (i & ctrl_mask) != ctrl_val:
            continue
        i1 = i | step
        for j in range(k):
            a0 = v[i, j]
            a1 = v[i1, j]
            v[i, j] = u00 * a0 + u01 * a1
            v[i1, j] = u10 * a0 + u11 * a1


def apply_2q(double complex[:, ::1] v, u, int bit_hi, int bit_lo, long ctrl_mask=0, long ctrl_val=0):
    cdef double complex m[4][4]
    cdef int r, c
    for r in range(4):
        for c in range(4):
            m[r][c] = u[r, c]
    cdef Py_ssize_t dim = v.shape[0], k = v.shape[1]
    cdef long hi = 1 << bit_hi, lo = 1 << bit_lo
    cdef Py_ssize_t i, j
    cdef Py_ssize_t idx[4]
    cdef double complex a[4]
    for i in range(dim):
        if (i & hi) or (i & lo) or (i & ctrl_mask) != ctrl_val:
            continue
        idx[0] = i
        idx[1] = i | lo
        idx[2] = i | hi
        idx[3] = i | hi | lo
        for j in range(k):
            for r in range(4):
                a[r] = v[idx[r], j]
            for r in range(4):
                v[idx[r], j] = m[r][0] * a[0] + m[r][1] * a[1] + m[r][2] * a[2] + m[r][3] * a[3]
