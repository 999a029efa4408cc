"""NumPy implementations of the amplitude-array kernels.

Every kernel mutates ``amp`` (a contiguous complex128 vector) in place. Bit
arguments are single-bit masks into the flat basis index; ``cmask``/``cval``
select the basis states whose control bits match.
"""

import numpy as np

_SQRT1_2 = 0.7071067811865475


def _selected(size, tbit, cmask, cval):
    idx = np.arange(size, dtype=np.int64)
    keep = (idx & tbit) == 0
    if cmask:
        keep &= (idx & cmask) == cval
    return idx[keep]


def controlled_x(amp, tbit, cmask, cval):
    i0 = _selected(amp.shape[0], tbit, cmask, cval)
    i1 = i0 | tbit
    tmp = amp[i0].copy()
    amp[i0] = amp[i1]
    amp[i1] = tmp


def controlled_swap(amp, abit, bbit, cmask, cval):
    idx = np.arange(amp.shape[0], dtype=np.int64)
    keep = ((idx & abit) != 0) & ((idx & bbit) == 0)
    if cmask:
        keep &= (idx & cmask) == cval
    i0 = idx[keep]
    i1 = i0 ^ abit ^ bbit
    tmp = amp[i0].copy()
    amp[i0] = amp[i1]
    amp[i1] = tmp


def hadamard(amp, tbit):
    # view the vector as (high, 2, low) with the middle axis on the target bit
    low = tbit
    high = amp.shape[0] // (2 * tbit)
    view = amp.reshape(high, 2, low)
    a = view[:, 0, :].copy()
    b = view[:, 1, :]
    view[:, 0, :] = (a + b) * _SQRT1_2
    view[:, 1, :] = (a - b) * _SQRT1_2


def masked_norm2(amp, mask, val):
    p = amp.real * amp.real + amp.imag * amp.imag
    if not mask:
        return float(p.sum())
    idx = np.arange(amp.shape[0], dtype=np.int64)
    return float(p[(idx & mask) == val].sum())
