"""Pure-numpy implementations of the per-step spinor kernels.

Same in-place semantics as the compiled module in _kernels.pyx; used as
the fallback when the extension is not built.
"""
from __future__ import annotations

import numpy as np


def apply_kinetic(phi: np.ndarray, e00: np.ndarray, e01: np.ndarray, e11: np.ndarray) -> None:
    """In-place 2x2 unitary per momentum: phi[b,:,k] <- E(k) @ phi[b,:,k].

    phi has shape (B, 2, N); e00/e01/e11 have shape (N,).  The off-diagonal
    entries of the kinetic exponential are equal, so only three arrays are
    needed.
    """
    a = phi[:, 0, :].copy()
    b = phi[:, 1, :]
    phi[:, 0, :] = e00 * a + e01 * b
    phi[:, 1, :] = e01 * a + e11 * b


def apply_phase(psi: np.ndarray, phase: np.ndarray) -> None:
    """In-place scalar phase on both spinor components: psi[b,c,j] *= phase[j]."""
    psi *= phase
