import os
import subprocess
import sys

import numpy as np
import pytest

import pairces._kernels_py as kpy
from pairces import kernels


def random_batch(rng, b=5, n=16):
    return rng.standard_normal((b, 2, n)) + 1j * rng.standard_normal((b, 2, n))


def test_backends_agree():
    if kernels.backend_name() != "cython":
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(11)
    phi_c = random_batch(rng)
    phi_p = phi_c.copy()
    e = np.exp(1j * rng.standard_normal(16))
    e01 = 0.3 * np.exp(1j * rng.standard_normal(16))
    e11 = e.conj()
    kernels.apply_kinetic(phi_c, e, e01, e11)
    kpy.apply_kinetic(phi_p, e, e01, e11)
    np.testing.assert_allclose(phi_c, phi_p, atol=1e-14)

    phase = np.exp(1j * rng.standard_normal(16))
    kernels.apply_phase(phi_c, phase)
    kpy.apply_phase(phi_p, phase)
    np.testing.assert_allclose(phi_c, phi_p, atol=1e-14)


def test_kinetic_is_in_place_matrix_multiply():
    rng = np.random.default_rng(12)
    phi = random_batch(rng, b=3, n=8)
    e00 = np.exp(1j * rng.standard_normal(8))
    e01 = 0.2 * np.exp(1j * rng.standard_normal(8))
    e11 = np.exp(1j * rng.standard_normal(8))
    ref = phi.copy()
    expected = np.empty_like(ref)
    for b in range(3):
        for k in range(8):
            m = np.array([[e00[k], e01[k]], [e01[k], e11[k]]])
            expected[b, :, k] = m @ ref[b, :, k]
    kernels.apply_kinetic(phi, e00, e01, e11)
    np.testing.assert_allclose(phi, expected, atol=1e-14)


def test_phase_multiplies_both_components():
    rng = np.random.default_rng(13)
    phi = random_batch(rng, b=2, n=8)
    phase = np.exp(1j * rng.standard_normal(8))
    expected = phi * phase
    kernels.apply_phase(phi, phase)
    np.testing.assert_allclose(phi, expected, atol=1e-15)


def test_pure_python_env_override():
    code = "import pairces.kernels as k; print(k.backend_name())"
    env = dict(os.environ, PAIRCES_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"
