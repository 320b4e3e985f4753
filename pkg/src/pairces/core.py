"""Spatial/momentum grid and the free Dirac eigenbasis in 1+1D.

The single-particle Hamiltonian without external field reduces (for a
single spin) to the 2x2 form

    H0(p) = [[c^2, c*p], [c*p, -c^2]],

whose eigenstates are plane waves times momentum-dependent two-spinors,
one branch with energy +sqrt(p^2 c^2 + c^4) and one with the opposite
sign.  Everything downstream (propagation, projections, conversion-energy
bookkeeping) is expressed in this basis, so the conventions here (grid
layout, spinor phases, inner products) are the single source of truth.

Units are atomic units throughout; the speed of light is configurable so
that scaled-down toy systems (small c) can be used in tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

#: CODATA value of the speed of light in atomic units.
ATOMIC_C = 137.035999084

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True)
class Constants:
    """Physical constants; c is the only tunable one."""

    c: float = ATOMIC_C

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"speed of light must be positive, got {self.c}")

    @property
    def c2(self) -> float:
        return self.c * self.c


@dataclass(frozen=True)
class GridSpec:
    """Periodic position grid and the matching discrete momentum set.

    Positions are z_j = -L/2 + j*dz for j = 0..N-1; momenta are
    p_k = 2*pi*k/L for integer k in [-N/2, N/2).  `momenta` is ordered by
    ascending k; `momenta_fft` holds the same values in numpy FFT layout
    (k = 0..N/2-1 followed by -N/2..-1), which is the layout used for
    momentum-representation field values.
    """

    length: float
    n_points: int

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"box length must be positive, got {self.length}")
        if self.n_points < 8 or self.n_points % 2 != 0:
            raise ValueError(
                f"n_points must be an even integer >= 8, got {self.n_points}"
            )

    @property
    def dz(self) -> float:
        return self.length / self.n_points

    @property
    def dp(self) -> float:
        return 2.0 * np.pi / self.length

    @cached_property
    def z(self) -> np.ndarray:
        return -0.5 * self.length + self.dz * np.arange(self.n_points)

    @cached_property
    def k_values(self) -> np.ndarray:
        """Integer momentum indices, ascending: -N/2 .. N/2-1."""
        half = self.n_points // 2
        return np.arange(-half, half)

    @cached_property
    def momenta(self) -> np.ndarray:
        """Momentum values ordered by ascending k."""
        return 2.0 * np.pi * self.k_values / self.length

    @cached_property
    def momenta_fft(self) -> np.ndarray:
        """Momentum values in numpy FFT ordering (same arithmetic as `momenta`)."""
        half = self.n_points // 2
        k_fft = np.concatenate([np.arange(0, half), np.arange(-half, 0)])
        return 2.0 * np.pi * k_fft / self.length

    def fft_index(self, k: int) -> int:
        """Position of integer momentum index k in FFT layout."""
        half = self.n_points // 2
        if not -half <= k < half:
            raise ValueError(f"momentum index {k} outside grid range [{-half}, {half})")
        return k % self.n_points


def build_grid(length: float, n_points: int) -> GridSpec:
    """Validate and build a GridSpec."""
    return GridSpec(length=length, n_points=n_points)


def free_energy(p: float | np.ndarray, c: float) -> float | np.ndarray:
    """Positive-branch eigenvalue sqrt(p^2 c^2 + c^4) of H0(p)."""
    return np.sqrt(np.square(p) * c * c + c**4)


def free_spinor(p: float, branch: str, c: float) -> np.ndarray:
    """Unit eigenspinor of H0(p) for the requested branch.

    Phase convention: the component of largest magnitude is real and
    positive, preferring the upper component on ties.
    """
    e = float(free_energy(p, c))
    if branch == POSITIVE:
        u = np.array([c * c + e, c * p], dtype=np.complex128)
    elif branch == NEGATIVE:
        u = np.array([-c * p, c * c + e], dtype=np.complex128)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    u /= np.linalg.norm(u)
    # Enforce the phase convention (closed forms above already satisfy it,
    # but keep the rule explicit and branch-independent).
    i = 0 if abs(u[0]) >= abs(u[1]) else 1
    if u[i] != 0:
        u *= abs(u[i]) / u[i]
    return u


@dataclass(frozen=True)
class FreeMode:
    """One momentum/branch eigenstate of the free Dirac Hamiltonian."""

    k: int
    p: float
    branch: str
    energy: float
    spinor: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, k: int, grid: GridSpec, branch: str, constants: Constants) -> "FreeMode":
        p = 2.0 * np.pi * k / grid.length
        sign = 1.0 if branch == POSITIVE else -1.0
        return cls(
            k=int(k),
            p=float(p),
            branch=branch,
            energy=sign * float(free_energy(p, constants.c)),
            spinor=free_spinor(float(p), branch, constants.c),
        )


def free_modes(grid: GridSpec, constants: Constants) -> list[FreeMode]:
    """All 2*N eigenmodes of the field-free Hamiltonian on the grid.

    Sorted by (branch, k) with the negative branch first.
    """
    return [
        FreeMode.build(int(k), grid, branch, constants)
        for branch in (NEGATIVE, POSITIVE)
        for k in grid.k_values
    ]


@dataclass
class TwoSpinorField:
    """A two-component complex wave function on the periodic grid.

    `values` has shape (2, N).  In position representation values[c, j]
    samples component c at z_j; in momentum representation the last axis
    is in FFT layout and holds the unitary-DFT coefficients.  Instances
    are treated as immutable after construction.
    """

    values: np.ndarray
    rep: str
    grid: GridSpec

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (2, self.grid.n_points):
            raise ValueError(f"values must have shape (2, {self.grid.n_points}), got {v.shape}")
        if self.rep not in ("position", "momentum"):
            raise ValueError(f"unknown representation {self.rep!r}")
        self.values = v

    def norm_squared(self) -> float:
        """dz-weighted squared norm; identical in both representations."""
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dz)

    def inner(self, other: "TwoSpinorField") -> complex:
        """dz-weighted inner product <self|other>; representations must match."""
        if self.rep != other.rep:
            raise ValueError("inner product requires matching representations")
        return complex(np.sum(np.conj(self.values) * other.values) * self.grid.dz)


def mode_wavefunction(mode: FreeMode, grid: GridSpec) -> TwoSpinorField:
    """Plane wave exp(i p z)/sqrt(L) times the mode spinor, sampled on z_j."""
    half = grid.n_points // 2
    if not -half <= mode.k < half:
        raise ValueError(f"mode momentum index {mode.k} not on grid")
    wave = np.exp(1j * mode.p * grid.z) / np.sqrt(grid.length)
    return TwoSpinorField(values=mode.spinor[:, None] * wave[None, :], rep="position", grid=grid)


def transform(state: TwoSpinorField, direction: str) -> TwoSpinorField:
    """Unitary DFT between position and momentum representations.

    Normalization is 1/sqrt(N) both ways, which preserves the
    dz-weighted squared norm; a round trip reproduces the input to
    machine precision.
    """
    n = state.grid.n_points
    if direction == "to_momentum":
        if state.rep != "position":
            raise ValueError("to_momentum requires a position-representation state")
        values = np.fft.fft(state.values, axis=-1) / np.sqrt(n)
        return TwoSpinorField(values=values, rep="momentum", grid=state.grid)
    if direction == "to_position":
        if state.rep != "momentum":
            raise ValueError("to_position requires a momentum-representation state")
        values = np.fft.ifft(state.values, axis=-1) * np.sqrt(n)
        return TwoSpinorField(values=values, rep="position", grid=state.grid)
    raise ValueError(f"unknown direction {direction!r}")
