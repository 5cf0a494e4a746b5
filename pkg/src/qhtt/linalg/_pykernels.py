"""Pure-Python (numpy) gate kernels.

Both kernels act in place on a coefficient array of shape ``(2**n, k)``;
each column is one monomial's coefficient vector.  ``bit`` arguments are bit
positions inside the basis index (register ``r`` of ``n`` lives at bit
``n - 1 - r``).  Only indices with ``idx & ctrl_mask == ctrl_val`` are touched.
"""

import numpy as np


def _base(dim, bits, ctrl_mask, ctrl_val):
    idx = np.arange(dim)
    keep = (idx & ctrl_mask) == ctrl_val
    for b in bits:
        keep &= ((idx >> b) & 1) == 0
    return idx[keep]


def apply_1q(v, u, bit, ctrl_mask=0, ctrl_val=0):
    i0 = _base(v.shape[0], (bit,), ctrl_mask, ctrl_val)
    i1 = i0 | (1 << bit)
    a0 = v[i0]
    a1 = v[i1]
    v[i0] = u[0, 0] * a0 + u[0, 1] * a1
    v[i1] = u[1, 0] * a0 + u[1, 1] * a1


def apply_2q(v, u, bit_hi, bit_lo, ctrl_mask=0, ctrl_val=0):
    i00 = _base(v.shape[0], (bit_hi, bit_lo), ctrl_mask, ctrl_val)
    idx = (i00, i00 | (1 << bit_lo), i00 | (1 << bit_hi), i00 | (1 << bit_hi) | (1 << bit_lo))
    amps = [v[i] for i in idx]
    for r in range(4):
        v[idx[r]] = u[r, 0] * amps[0] + u[r, 1] * amps[1] + u[r, 2] * amps[2] + u[r, 3] * amps[3]
