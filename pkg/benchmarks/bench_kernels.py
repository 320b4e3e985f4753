"""Benchmark: compiled kernels vs the pure-numpy fallback.

Times the two elementwise kernels in isolation and a complete
split-operator step loop (FFTs included) at desk-run dimensions, for both
backends.  Run as `python benchmarks/bench_kernels.py`.
"""
from __future__ import annotations

import time

import numpy as np
import scipy.fft as sfft

import pairces._kernels_py as backend_py

try:
    import pairces._kernels as backend_cy
except ImportError:
    backend_cy = None

BATCH, N = 128, 1024
STEPS = 200


def make_state(rng):
    return rng.standard_normal((BATCH, 2, N)) + 1j * rng.standard_normal((BATCH, 2, N))


def bench(fn, repeats=5) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_only(backend, phi, tables, phase):
    e00, e01, e11 = tables

    def loop():
        for _ in range(STEPS):
            backend.apply_phase(phi, phase)
            backend.apply_kinetic(phi, e00, e01, e11)

    return loop


def full_step(backend, phi, tables, phase):
    e00, e01, e11 = tables

    def loop():
        state = phi
        for _ in range(STEPS):
            psi = sfft.ifft(state, axis=-1, overwrite_x=True)
            backend.apply_phase(psi, phase)
            state = sfft.fft(psi, axis=-1, overwrite_x=True)
            backend.apply_kinetic(state, e00, e01, e11)

    return loop


def main() -> None:
    rng = np.random.default_rng(0)
    angles = rng.standard_normal(N)
    tables = (np.exp(1j * angles), 0.3 * np.exp(-1j * angles), np.exp(-1j * angles))
    phase = np.exp(1j * rng.standard_normal(N))

    backends = [("python", backend_py)]
    if backend_cy is not None:
        backends.append(("cython", backend_cy))
    print(f"batch {BATCH} modes x {N} grid points, {STEPS} steps; best of 5\n")
    print(f"{'backend':<8} {'kernels only':>14} {'full step loop':>16}")
    results = {}
    for name, backend in backends:
        k = bench(kernel_only(backend, make_state(rng), tables, phase))
        f = bench(full_step(backend, make_state(rng), tables, phase))
        results[name] = (k, f)
        print(f"{name:<8} {k * 1e3 / STEPS:>11.3f} ms {f * 1e3 / STEPS:>13.3f} ms")
    if backend_cy is not None:
        kp, fp = results["python"]
        kc, fc = results["cython"]
        print(f"\nspeedup: kernels {kp / kc:.2f}x, full step {fp / fc:.2f}x")


if __name__ == "__main__":
    main()
