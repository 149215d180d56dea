"""Numba @njit gate kernel (default backend when numba is importable).

Same contract as kernels_numpy.apply_ctrl_1q. The loop visits every basis
index with target bit 0 and matching control bits; pairs are disjoint, so
the update is race-free and the reduction order is fixed.
"""

from numba import njit

NAME = "numba"


@njit(cache=True)
def apply_ctrl_1q(state, target, ctrl_mask, u00, u01, u10, u11):
    tbit = 1 << target
    for i in range(state.shape[0]):
        if (i & tbit) == 0 and (i & ctrl_mask) == ctrl_mask:
            j = i | tbit
            a0 = state[i]
            a1 = state[j]
            state[i] = u00 * a0 + u01 * a1
            state[j] = u10 * a0 + u11 * a1
