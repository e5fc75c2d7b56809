"""Pure numpy versions of the kernels in ``_core.pyx``.

Same signatures and return conventions; used when the extension is not
built or when ``LOCALENERGY_PURE=1``.
"""
import numpy as np


def arch_pair_sum(re0, im0, re1, im1):
    x0 = np.asarray(re0) + 1j * np.asarray(im0)
    x1 = np.asarray(re1) + 1j * np.asarray(im1)
    n = x0.shape[0]
    total = 0.0
    nz = 0
    for i in range(n - 1):
        d = np.abs(x0[i] * x1[i + 1:] - x0[i + 1:] * x1[i])
        zero = d == 0.0
        if zero.any():
            nz += int(zero.sum())
            d = d[~zero]
        total += float(-np.log(d).sum())
    return total, nz


def arch_row_sums(re0, im0, re1, im1, yr0, yi0, yr1, yi1):
    x0 = np.asarray(re0) + 1j * np.asarray(im0)
    x1 = np.asarray(re1) + 1j * np.asarray(im1)
    d = np.abs(complex(yr0, yi0) * x1 - x0 * complex(yr1, yi1))
    zero = d == 0.0
    return float(-np.log(d[~zero]).sum()), int(zero.sum())
