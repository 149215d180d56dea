"""Pure-numpy gate kernel (fallback backend).

Every gate in the IR reduces to a single-qubit unitary with an optional set
of control qubits, so one kernel suffices: apply a 2x2 matrix to the target
bit of every basis pair whose control bits are all set.
"""

import numpy as np

NAME = "numpy"


def apply_ctrl_1q(state, target, ctrl_mask, u00, u01, u10, u11):
    """In-place controlled single-qubit update on a flat amplitude array.

    ctrl_mask is an OR of 1 << c over control qubits (0 for no controls).
    Qubit 0 is the least-significant bit of the basis index.
    """
    idx = np.arange(state.shape[0])
    tbit = 1 << target
    sel = (idx & tbit) == 0
    if ctrl_mask:
        sel &= (idx & ctrl_mask) == ctrl_mask
    i0 = idx[sel]
    i1 = i0 | tbit
    a0 = state[i0]
    a1 = state[i1]
    state[i0] = u00 * a0 + u01 * a1
    state[i1] = u10 * a0 + u11 * a1
