# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair-energy kernels for archimedean point sets.

Rows are summed in parallel but each row is accumulated sequentially and
the row totals are added in index order, so the result does not depend on
the number of threads.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport log, frexp

cnp.import_array()


def arch_pair_sum(double[::1] re0, double[::1] im0, double[::1] re1, double[::1] im1):
    """Sum over i < j of -log|x0_i x1_j - x0_j x1_i| for normalized points."""
    cdef Py_ssize_t n = re0.shape[0]
    cdef Py_ssize_t i, j
    cdef double ar, ai, br, bi, dr, di, m2, prod
    cdef int e, ex
    cdef long esum
    cdef double[::1] rows = np.zeros(n, dtype=np.float64)
    cdef long[::1] zeros = np.zeros(n, dtype=np.int64)
    for i in prange(n, nogil=True, schedule="dynamic"):
        # product of squared distances kept as mantissa * 2^esum; one log per row
        prod = 1.0
        esum = 0
        for j in range(i + 1, n):
            # x0_i * x1_j - x0_j * x1_i
            ar = re0[i] * re1[j] - im0[i] * im1[j]
            ai = re0[i] * im1[j] + im0[i] * re1[j]
            br = re0[j] * re1[i] - im0[j] * im1[i]
            bi = re0[j] * im1[i] + im0[j] * re1[i]
            dr = ar - br
            di = ai - bi
            m2 = dr * dr + di * di
            if m2 == 0.0:
                zeros[i] += 1
            else:
                # |d|^2 <= 4, so renormalizing near the range limits cannot overflow
                prod = prod * m2
                if prod < 1e-250 or prod > 1e250:
                    prod = frexp(prod, &e)
                    esum = esum + e
        rows[i] = -0.5 * (log(prod) + esum * 0.6931471805599453)
    cdef double total = 0.0
    cdef long nz = 0
    for i in range(n):
        total += rows[i]
        nz += zeros[i]
    return total, nz


def arch_row_sums(double[::1] re0, double[::1] im0, double[::1] re1, double[::1] im1,
                  double yr0, double yi0, double yr1, double yi1):
    """Sum over j of -log|y0 x1_j - x0_j y1| and the number of exact zeros."""
    cdef Py_ssize_t n = re0.shape[0]
    cdef Py_ssize_t j
    cdef double ar, ai, br, bi, dr, di, m2
    cdef double total = 0.0
    cdef long nz = 0
    for j in range(n):
        ar = yr0 * re1[j] - yi0 * im1[j]
        ai = yr0 * im1[j] + yi0 * re1[j]
        br = re0[j] * yr1 - im0[j] * yi1
        bi = re0[j] * yi1 + im0[j] * yr1
        dr = ar - br
        di = ai - bi
        m2 = dr * dr + di * di
        if m2 == 0.0:
            nz += 1
        else:
            total -= 0.5 * log(m2)
    return total, nz
