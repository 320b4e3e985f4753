"""Batched sweep over negative modes and the pair-creation amplitude matrix.

Every selected negative-energy eigenstate is propagated through the full
schedule; at each sample time its momentum-space state is projected onto
the selected positive-energy eigenstates.  The resulting complex matrix
U[t][p][n] carries all pair observables: |U|^2 summed over everything is
the total pair number, and summed in conversion-energy windows it is the
CES handled in `ces`.

The sweep is embarrassingly parallel over negative modes.  Work is split
into fixed-size chunks whose content does not depend on the worker count,
and chunk results are written into a preallocated matrix at fixed offsets,
so the assembled output is bitwise identical no matter how many processes
run it.
"""
from __future__ import annotations

import math
import struct
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import Constants, FreeMode, GridSpec, NEGATIVE, POSITIVE, free_modes
from .fields import FieldConfig
from .propagator import Schedule, momentum_coefficients, propagate_batch

#: Modes per work unit; fixed so that results do not depend on worker count.
CHUNK_SIZE = 128

DUMP_MAGIC = b"UPNM"
DUMP_VERSION = 1


@dataclass(frozen=True)
class ModeSelection:
    """Momentum cutoffs for initial negative modes and projection targets.

    None means the full grid (Nyquist included).
    """

    negative_cutoff: float | None = None
    positive_cutoff: float | None = None

    def resolve(self, grid: GridSpec, constants: Constants) -> tuple[list[FreeMode], list[FreeMode]]:
        """Mode lists (negative, positive), each sorted by ascending k."""
        p_max = float(np.max(np.abs(grid.momenta)))
        for name, cutoff in (("negative", self.negative_cutoff), ("positive", self.positive_cutoff)):
            if cutoff is not None and not 0 <= cutoff <= p_max:
                raise ValueError(
                    f"{name} cutoff {cutoff} outside grid momentum range [0, {p_max}]"
                )
        modes = free_modes(grid, constants)
        negative = [m for m in modes if m.branch == NEGATIVE]
        positive = [m for m in modes if m.branch == POSITIVE]
        if self.negative_cutoff is not None:
            negative = [m for m in negative if abs(m.p) <= self.negative_cutoff]
        if self.positive_cutoff is not None:
            positive = [m for m in positive if abs(m.p) <= self.positive_cutoff]
        return negative, positive


@dataclass
class AmplitudeMatrix:
    """Projections of evolved negative modes onto positive modes.

    entries[i, p, n] is the amplitude <p|U(t_i)|n> for positive_modes[p]
    and negative_modes[n]; sample_times[i] are the snapshot times.
    Immutable after assembly.
    """

    sample_times: np.ndarray
    positive_modes: list[FreeMode]
    negative_modes: list[FreeMode]
    entries: np.ndarray
    grid: GridSpec
    config: FieldConfig
    schedule: Schedule
    selection: ModeSelection
    constants: Constants
    norm_drift: float

    @cached_property
    def positive_momenta(self) -> np.ndarray:
        return np.array([m.p for m in self.positive_modes])

    @cached_property
    def negative_momenta(self) -> np.ndarray:
        return np.array([m.p for m in self.negative_modes])

    def time_index(self, t_k: float) -> int:
        tol = 1e-9 * max(self.schedule.dt, 1e-300)
        hits = np.nonzero(np.abs(self.sample_times - t_k) <= tol)[0]
        if len(hits) != 1:
            raise KeyError(f"{t_k} is not a sample time of this run")
        return int(hits[0])


def _projection_rows(positive_modes: list[FreeMode], grid: GridSpec) -> tuple[np.ndarray, ...]:
    """FFT slots and conjugate spinor weights for projecting onto positive modes.

    <W_p|psi> in momentum representation is sign_p * sqrt(dz) * u_p^dag phi[k_p].
    """
    idx = np.array([grid.fft_index(m.k) for m in positive_modes])
    signs = np.array([-1.0 if m.k % 2 else 1.0 for m in positive_modes]) * np.sqrt(grid.dz)
    u0 = np.conj(np.array([m.spinor[0] for m in positive_modes])) * signs
    u1 = np.conj(np.array([m.spinor[1] for m in positive_modes])) * signs
    return idx, u0, u1


def _sweep_chunk(args) -> tuple[int, np.ndarray, float]:
    """Worker: evolve one chunk of negative modes and project at every sample.

    Returns (chunk_start, U_chunk of shape (T, P, B), final norm drift).
    """
    grid, config, schedule, constants, selection, start, stop = args
    negative, positive = selection.resolve(grid, constants)
    chunk = negative[start:stop]
    idx, u0, u1 = _projection_rows(positive, grid)
    out = np.zeros((len(schedule.sample_steps), len(positive), len(chunk)), dtype=np.complex128)

    def project(i: int, step: int, phi: np.ndarray) -> None:
        if step == 0:
            return  # initial states are negative modes, orthogonal to every target
        # (B, P) -> transpose into (P, B)
        out[i] = (u0 * phi[:, 0, idx] + u1 * phi[:, 1, idx]).T

    phi = momentum_coefficients(chunk, grid)
    phi = propagate_batch(phi, grid, config, schedule, constants, project)
    norms = np.sum(np.abs(phi) ** 2, axis=(1, 2)) * grid.dz
    return start, out, float(np.max(np.abs(norms - 1.0)))


def compute_amplitudes(
    grid: GridSpec,
    config: FieldConfig,
    schedule: Schedule,
    selection: ModeSelection = ModeSelection(),
    constants: Constants = Constants(),
    workers: int = 1,
    progress=None,
) -> AmplitudeMatrix:
    """Run the full sweep and assemble U[t][p][n].

    `workers` > 1 distributes chunks over processes; the result is
    bitwise identical for any worker count.  `progress`, if given, is
    called with (done_chunks, total_chunks) after each finished chunk.
    """
    negative, positive = selection.resolve(grid, constants)
    if not negative or not positive:
        raise ValueError("mode selection produced an empty negative or positive set")
    n_t, n_p, n_n = len(schedule.sample_steps), len(positive), len(negative)
    try:
        entries = np.zeros((n_t, n_p, n_n), dtype=np.complex128)
    except MemoryError:
        raise MemoryError(
            f"amplitude matrix of {n_t} samples x {n_p} positive x {n_n} negative modes "
            f"({16 * n_t * n_p * n_n / 1e9:.1f} GB) does not fit in memory"
        ) from None

    starts = list(range(0, n_n, CHUNK_SIZE))
    tasks = [
        (grid, config, schedule, constants, selection, s, min(s + CHUNK_SIZE, n_n))
        for s in starts
    ]
    drift = 0.0
    done = 0
    if workers <= 1:
        for task in tasks:
            start, out, d = _sweep_chunk(task)
            entries[:, :, start : start + out.shape[2]] = out
            drift = max(drift, d)
            done += 1
            if progress is not None:
                progress(done, len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pending = {pool.submit(_sweep_chunk, task) for task in tasks}
            while pending:
                finished, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in finished:
                    start, out, d = fut.result()
                    entries[:, :, start : start + out.shape[2]] = out
                    drift = max(drift, d)
                    done += 1
                    if progress is not None:
                        progress(done, len(tasks))

    return AmplitudeMatrix(
        sample_times=schedule.sample_times,
        positive_modes=positive,
        negative_modes=negative,
        entries=entries,
        grid=grid,
        config=config,
        schedule=schedule,
        selection=selection,
        constants=constants,
        norm_drift=drift,
    )


def pair_number(matrix: AmplitudeMatrix, t_k: float) -> float:
    """Total created pairs N(t_k) = sum |U|^2, accumulated exactly (fsum)."""
    i = matrix.time_index(t_k)
    w = np.abs(matrix.entries[i]) ** 2
    return math.fsum(w.ravel())


def pair_number_series(matrix: AmplitudeMatrix) -> np.ndarray:
    """N(t) at every sample time."""
    return np.array([pair_number(matrix, t) for t in matrix.sample_times])


def spatial_density(matrix: AmplitudeMatrix, grid: GridSpec, t_k: float) -> np.ndarray:
    """Created-electron density rho(z_j) = sum_n |sum_p U[p,n] W_p(z_j)|^2."""
    i = matrix.time_index(t_k)
    idx = np.array([grid.fft_index(m.k) for m in matrix.positive_modes])
    signs = np.array([-1.0 if m.k % 2 else 1.0 for m in matrix.positive_modes])
    scale = signs / np.sqrt(grid.dz)
    u = np.array([m.spinor for m in matrix.positive_modes])  # (P, 2)
    coeff = np.zeros((len(matrix.negative_modes), 2, grid.n_points), dtype=np.complex128)
    for c in (0, 1):
        coeff[:, c, :][:, idx] = (matrix.entries[i] * (scale * u[:, c])[:, None]).T
    psi = np.fft.ifft(coeff, axis=-1) * np.sqrt(grid.n_points)
    return np.sum(np.abs(psi) ** 2, axis=(0, 1))


def dump_amplitudes(matrix: AmplitudeMatrix, path) -> None:
    """Write the raw amplitude dump (little-endian binary, magic UPNM)."""
    n_t, n_p, n_n = matrix.entries.shape
    with open(path, "wb") as fh:
        fh.write(DUMP_MAGIC)
        fh.write(struct.pack("<III", DUMP_VERSION, n_p, n_n))
        fh.write(struct.pack("<I", n_t))
        fh.write(np.asarray(matrix.sample_times, dtype="<f8").tobytes())
        fh.write(np.asarray(matrix.positive_momenta, dtype="<f8").tobytes())
        fh.write(np.asarray(matrix.negative_momenta, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(matrix.entries, dtype="<c16").tobytes())


@dataclass
class AmplitudeDump:
    """Minimal amplitude container reloaded from a dump file.

    Quacks enough like AmplitudeMatrix for the analysis functions in
    `ces` (sample_times, momenta, entries, constants).
    """

    sample_times: np.ndarray
    positive_momenta: np.ndarray
    negative_momenta: np.ndarray
    entries: np.ndarray
    constants: Constants

    def time_index(self, t_k: float) -> int:
        span = float(self.sample_times[-1]) if len(self.sample_times) else 1.0
        hits = np.nonzero(np.abs(self.sample_times - t_k) <= 1e-12 * max(span, 1e-300))[0]
        if len(hits) != 1:
            raise KeyError(f"{t_k} is not a sample time of this dump")
        return int(hits[0])


def load_amplitude_dump(path, constants: Constants = Constants()) -> AmplitudeDump:
    """Read a dump written by dump_amplitudes."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != DUMP_MAGIC:
            raise ValueError(f"{path}: not an amplitude dump (magic {magic!r})")
        version, n_p, n_n = struct.unpack("<III", fh.read(12))
        if version != DUMP_VERSION:
            raise ValueError(f"{path}: unsupported dump version {version}")
        (n_t,) = struct.unpack("<I", fh.read(4))
        def read_exact(n_bytes: int) -> bytes:
            data = fh.read(n_bytes)
            if len(data) != n_bytes:
                raise ValueError(f"{path}: truncated amplitude dump")
            return data

        times = np.frombuffer(read_exact(8 * n_t), dtype="<f8").copy()
        p_pos = np.frombuffer(read_exact(8 * n_p), dtype="<f8").copy()
        p_neg = np.frombuffer(read_exact(8 * n_n), dtype="<f8").copy()
        entries = np.frombuffer(read_exact(16 * n_t * n_p * n_n), dtype="<c16")
        entries = entries.reshape(n_t, n_p, n_n).copy()
    return AmplitudeDump(times, p_pos, p_neg, entries, constants)
