# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled amplitude-array kernels; same contract as ``_kernels_py``."""

cdef double SQRT1_2 = 0.7071067811865475


def controlled_x(double complex[::1] amp, long long tbit, long long cmask, long long cval):
    cdef Py_ssize_t i, n = amp.shape[0]
    cdef double complex tmp
    with nogil:
        for i in range(n):
            if (i & tbit) == 0 and (i & cmask) == cval:
                tmp = amp[i]
                amp[i] = amp[i | tbit]
                amp[i | tbit] = tmp


def controlled_swap(double complex[::1] amp, long long abit, long long bbit,
                    long long cmask, long long cval):
    cdef Py_ssize_t i, j, n = amp.shape[0]
    cdef double complex tmp
    with nogil:
        for i in range(n):
            if (i & abit) != 0 and (i & bbit) == 0 and (i & cmask) == cval:
                j = i ^ abit ^ bbit
                tmp = amp[i]
                amp[i] = amp[j]
                amp[j] = tmp


def hadamard(double complex[::1] amp, long long tbit):
    cdef Py_ssize_t i, n = amp.shape[0]
    cdef double complex a, b
    with nogil:
        for i in range(n):
            if (i & tbit) == 0:
                a = amp[i]
                b = amp[i | tbit]
                amp[i] = (a + b) * SQRT1_2
                amp[i | tbit] = (a - b) * SQRT1_2


def masked_norm2(const double complex[::1] amp, long long mask, long long val):
    cdef Py_ssize_t i, n = amp.shape[0]
    cdef double total = 0.0
    with nogil:
        for i in range(n):
            if (i & mask) == val:
                total += amp[i].real * amp[i].real + amp[i].imag * amp[i].imag
    return total
