# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-step spinor kernels.

The split-operator inner loop spends its non-FFT time in two elementwise
passes over the batched state array; doing them in C avoids the
temporaries the numpy fallback allocates.  Semantics match _kernels_py.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def apply_kinetic(cnp.complex128_t[:, :, ::1] phi,
                  cnp.complex128_t[::1] e00,
                  cnp.complex128_t[::1] e01,
                  cnp.complex128_t[::1] e11):
    """In-place 2x2 unitary per momentum: phi[b,:,k] <- E(k) @ phi[b,:,k]."""
    cdef Py_ssize_t nb = phi.shape[0]
    cdef Py_ssize_t n = phi.shape[2]
    cdef Py_ssize_t b, k
    cdef double complex a, c
    for b in range(nb):
        for k in range(n):
            a = phi[b, 0, k]
            c = phi[b, 1, k]
            phi[b, 0, k] = e00[k] * a + e01[k] * c
            phi[b, 1, k] = e01[k] * a + e11[k] * c


def apply_phase(cnp.complex128_t[:, :, ::1] psi,
                cnp.complex128_t[::1] phase):
    """In-place scalar phase on both spinor components: psi[b,c,j] *= phase[j]."""
    cdef Py_ssize_t nb = psi.shape[0]
    cdef Py_ssize_t n = psi.shape[2]
    cdef Py_ssize_t b, j
    for b in range(nb):
        for j in range(n):
            psi[b, 0, j] = psi[b, 0, j] * phase[j]
            psi[b, 1, j] = psi[b, 1, j] * phase[j]
