"""Conversion-energy spectrum and creation-channel decomposition.

The conversion energy of a pair is the summed mass-energy of electron and
positron, E_pn = sqrt(p^2 c^2 + c^4) + sqrt(n^2 c^2 + c^4) >= 2 c^2: the
energy drawn from the external field when the pair was made.  Binning
|U_pn|^2 by E_pn in a sliding window of width dE gives the spectrum
rho(E, t); comparing pair energies against the lattice of predicted
channel energies n1*w1 + n2*w2 + k*V0 splits the total yield into
tunneling, multiphoton, two-color and dynamically-assisted contributions.

Channel assignment happens in (p, n) space, pair by pair, not on the
binned spectrum, so channel yields plus the unassigned remainder add up
to N(t) exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FreeMode, NEGATIVE, POSITIVE


@dataclass(frozen=True)
class CesSpec:
    """Spectrum abscissa (uniform E grid) and smoothing window width."""

    e_min: float
    e_max: float
    n_points: int
    window: float

    def __post_init__(self):
        if not self.e_min < self.e_max:
            raise ValueError(f"need e_min < e_max, got [{self.e_min}, {self.e_max}]")
        if self.n_points < 2:
            raise ValueError(f"need at least 2 spectrum points, got {self.n_points}")
        if not self.window > 0:
            raise ValueError(f"window must be positive, got {self.window}")

    @property
    def energies(self) -> np.ndarray:
        return np.linspace(self.e_min, self.e_max, self.n_points)


def conversion_energy(p_mode: FreeMode, n_mode: FreeMode) -> float:
    """E_pn = E_p - E_n for a positive/negative mode pair."""
    if p_mode.branch != POSITIVE:
        raise ValueError(f"first argument must be a positive-branch mode, got {p_mode.branch}")
    if n_mode.branch != NEGATIVE:
        raise ValueError(f"second argument must be a negative-branch mode, got {n_mode.branch}")
    return p_mode.energy - n_mode.energy


def conversion_energy_matrix(matrix) -> np.ndarray:
    """E_pn for every (positive, negative) mode combination, shape (P, N)."""
    c = matrix.constants.c
    e_pos = np.sqrt(matrix.positive_momenta**2 * c * c + c**4)
    e_neg = np.sqrt(matrix.negative_momenta**2 * c * c + c**4)
    return e_pos[:, None] + e_neg[None, :]


class CesEvaluator:
    """Precomputed sort of the pair energies, reused across sample times."""

    def __init__(self, matrix):
        self.matrix = matrix
        energies = conversion_energy_matrix(matrix).ravel()
        self.order = np.argsort(energies, kind="stable")
        self.sorted_energies = energies[self.order]

    def spectrum(self, t_k: float, spec: CesSpec) -> np.ndarray:
        """rho(E_i) at sample time t_k; returns columns (E_i, rho)."""
        i = self.matrix.time_index(t_k)
        w = (np.abs(self.matrix.entries[i]) ** 2).ravel()[self.order]
        cum = np.concatenate(([0.0], np.cumsum(w)))
        e_grid = spec.energies
        lo = np.searchsorted(self.sorted_energies, e_grid - 0.5 * spec.window, side="left")
        hi = np.searchsorted(self.sorted_energies, e_grid + 0.5 * spec.window, side="right")
        rho = (cum[hi] - cum[lo]) / spec.window
        return np.column_stack([e_grid, rho])


def ces_spectrum(matrix, t_k: float, spec: CesSpec) -> np.ndarray:
    """Windowed pair-number density over conversion energy at one sample time."""
    return CesEvaluator(matrix).spectrum(t_k, spec)


def mean_conversion_energy(matrix, t_k: float) -> float:
    """Yield-weighted mean of E_pn; error on zero total yield."""
    i = matrix.time_index(t_k)
    w = (np.abs(matrix.entries[i]) ** 2).ravel()
    total = math.fsum(w)
    if total <= 0.0:
        raise ValueError(f"zero total yield at t={t_k}; mean conversion energy undefined")
    e = conversion_energy_matrix(matrix).ravel()
    return math.fsum(w * e) / total


@dataclass(frozen=True)
class ChannelSpec:
    """One predicted conversion-energy line E = n1*w1 + n2*w2 + k*V0."""

    n1: int
    n2: int
    k: int
    e_pred: float
    label: str


def _channel_label(n1: int, n2: int, k: int) -> str:
    def term(n: int, sym: str) -> str:
        return (str(abs(n)) if abs(n) > 1 else "") + sym

    positives = [term(n, s) for n, s in ((n1, "w1"), (n2, "w2")) if n > 0]
    if k:
        positives.append("V0")
    label = "+".join(positives)
    for n, sym in ((n1, "w1"), (n2, "w2")):
        if n < 0:
            label += "-" + term(n, sym)
    return label


def channel_lattice(
    frequencies,
    v0: float,
    bounds: tuple[float, float],
    order_max: int,
    allow_emission: bool = False,
) -> list[ChannelSpec]:
    """Enumerate predicted channel energies within bounds.

    Integer photon counts satisfy |n1| + |n2| <= order_max; counts are
    nonnegative unless allow_emission permits net photon emission into
    one color.  k = 1 (static assist) is generated only for v0 > 0.
    Nearly coincident energies (within 1e-9) are merged, keeping the
    lowest-order label.
    """
    freqs = list(frequencies)
    if len(freqs) > 2:
        raise ValueError("at most two oscillating frequencies are supported")
    if any(not f > 0 for f in freqs):
        raise ValueError("frequencies must be positive")
    if order_max < 1:
        raise ValueError(f"order_max must be >= 1, got {order_max}")
    lo, hi = bounds
    w1 = freqs[0] if freqs else 0.0
    w2 = freqs[1] if len(freqs) > 1 else 0.0
    n1_range = range(-order_max, order_max + 1) if freqs else range(0, 1)
    k_range = (0, 1) if v0 > 0 else (0,)

    found: list[ChannelSpec] = []
    for n1 in n1_range:
        if not allow_emission and n1 < 0:
            continue
        n2_max = order_max - abs(n1)
        n2_range = range(-n2_max, n2_max + 1) if len(freqs) > 1 else range(0, 1)
        for n2 in n2_range:
            if not allow_emission and n2 < 0:
                continue
            for k in k_range:
                if (n1, n2, k) == (0, 0, 0):
                    continue
                e = n1 * w1 + n2 * w2 + k * v0
                if lo <= e <= hi:
                    found.append(ChannelSpec(n1, n2, k, e, _channel_label(n1, n2, k)))
    found.sort(key=lambda ch: (ch.e_pred, abs(ch.n1) + abs(ch.n2) + ch.k, ch.label))
    deduped: list[ChannelSpec] = []
    for ch in found:
        if deduped and abs(ch.e_pred - deduped[-1].e_pred) <= 1e-9:
            continue
        deduped.append(ch)
    if not deduped:
        raise ValueError(f"no channels with energies inside bounds [{lo}, {hi}]")
    return deduped


@dataclass
class ChannelYield:
    """Pair yield assigned to one channel over time."""

    channel: ChannelSpec
    yield_at: dict[float, float]
    fraction_of_total: float

    @property
    def series(self) -> np.ndarray:
        return np.fromiter(self.yield_at.values(), dtype=float)


def channel_yields(
    matrix,
    channels: list[ChannelSpec],
    tol: float,
) -> tuple[list[ChannelYield], np.ndarray]:
    """Assign each pair's weight to the nearest channel within tol.

    Assignment happens per (p, n) pair on the exact conversion energies;
    pairs farther than tol from every channel line go to the unassigned
    remainder, returned as a series over the sample times.  Conservation
    is exact: channel sums plus unassigned reproduce N(t).
    """
    if not tol > 0:
        raise ValueError(f"assignment tolerance must be positive, got {tol}")
    if not channels:
        totals = np.array([
            math.fsum((np.abs(matrix.entries[i]) ** 2).ravel())
            for i in range(len(matrix.sample_times))
        ])
        return [], totals
    e_pred = np.array([ch.e_pred for ch in channels])
    if len(e_pred) > 1:
        spacing = float(np.min(np.diff(np.sort(e_pred))))
        # tiny relative slack so tol == spacing/2 survives float rounding
        if tol > 0.5 * spacing * (1.0 + 1e-9):
            raise ValueError(
                f"tolerance {tol} overlaps channels spaced {spacing} apart; "
                f"need tol <= {0.5 * spacing}"
            )

    energies = conversion_energy_matrix(matrix).ravel()
    order = np.argsort(e_pred, kind="stable")
    sorted_pred = e_pred[order]
    pos = np.searchsorted(sorted_pred, energies)
    left = np.clip(pos - 1, 0, len(sorted_pred) - 1)
    right = np.clip(pos, 0, len(sorted_pred) - 1)
    nearer_right = np.abs(sorted_pred[right] - energies) < np.abs(energies - sorted_pred[left])
    nearest = np.where(nearer_right, right, left)
    assigned = np.where(
        np.abs(sorted_pred[nearest] - energies) <= tol, order[nearest], -1
    )

    times = list(matrix.sample_times)
    per_channel = np.zeros((len(channels), len(times)))
    unassigned = np.zeros(len(times))
    for i in range(len(times)):
        w = (np.abs(matrix.entries[i]) ** 2).ravel()
        for c in range(len(channels)):
            per_channel[c, i] = math.fsum(w[assigned == c])
        unassigned[i] = math.fsum(w[assigned == -1])
    total_final = math.fsum((np.abs(matrix.entries[-1]) ** 2).ravel())
    yields = [
        ChannelYield(
            channel=ch,
            yield_at=dict(zip(times, per_channel[c])),
            fraction_of_total=per_channel[c, -1] / total_final if total_final > 0 else 0.0,
        )
        for c, ch in enumerate(channels)
    ]
    return yields, unassigned


def peak_detect(spectrum: np.ndarray, min_rel_height: float = 0.01) -> list[tuple[float, float]]:
    """Local maxima of a (E, rho) spectrum above a relative height floor.

    Plateaus count once, reported at their center; isolated maxima are
    refined by a 3-point parabolic fit.  Returns (E_peak, height) pairs
    sorted by energy.
    """
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.ndim != 2 or spectrum.shape[1] != 2 or spectrum.shape[0] == 0:
        raise ValueError("spectrum must be a nonempty array of (E, rho) rows")
    e, r = spectrum[:, 0], spectrum[:, 1]
    top = float(np.max(r))
    if top <= 0.0:
        return []
    threshold = min_rel_height * top

    peaks: list[tuple[float, float]] = []
    n = len(r)
    a = 0
    while a < n:
        b = a
        while b + 1 < n and r[b + 1] == r[a]:
            b += 1
        v = r[a]
        left = r[a - 1] if a > 0 else -np.inf
        right = r[b + 1] if b + 1 < n else -np.inf
        if v > left and v > right and v >= threshold:
            if a == b and 0 < a < n - 1:
                denom = r[a - 1] - 2.0 * v + r[a + 1]
                offset = 0.5 * (r[a - 1] - r[a + 1]) / denom
                de = e[a + 1] - e[a]
                peaks.append((float(e[a] + offset * de), float(v - 0.25 * (r[a - 1] - r[a + 1]) * offset)))
            else:
                peaks.append((float(0.5 * (e[a] + e[b])), float(v)))
        a = b + 1
    return peaks
