"""External scalar potential: Sauter well times a sum of time profiles.

V(z, t) = V(t) * S(z) with S(z) = (tanh[(z - D/2)/W] - tanh[(z + D/2)/W])/2,
so S is 0 far outside and close to -1 deep inside the well; a positive
"potential height" therefore digs a negative well.  V(t) is an additive
list of terms: a static step that switches on sharply at t = 0 (optionally
ramped) and sinusoids V_i sin(w_i t + phase).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import GridSpec

STATIC_STEP = "static_step"
SINUSOID = "sinusoid"


@dataclass(frozen=True)
class WellShape:
    """Sauter-well geometry: edge width W and total extension D."""

    edge_width: float
    extension: float

    def __post_init__(self):
        if not self.edge_width > 0:
            raise ValueError(f"edge width must be positive, got {self.edge_width}")
        if not self.extension > 0:
            raise ValueError(f"well extension must be positive, got {self.extension}")


@dataclass(frozen=True)
class TimeTerm:
    """One additive contribution to the potential height V(t).

    static_step: `amplitude` for all t >= 0 (sharp turn-on at t = 0); if
    `ramp_time` > 0 the step instead rises as sin^2(pi t / (2 ramp_time))
    until t = ramp_time.  sinusoid: amplitude * sin(frequency*t + phase).
    """

    kind: str
    amplitude: float
    frequency: float = 0.0
    phase: float = 0.0
    ramp_time: float = 0.0

    def __post_init__(self):
        if self.kind not in (STATIC_STEP, SINUSOID):
            raise ValueError(f"unknown time-term kind {self.kind!r}")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        if self.frequency < 0:
            raise ValueError(f"frequency must be >= 0, got {self.frequency}")
        if self.kind == STATIC_STEP and self.frequency != 0.0:
            raise ValueError("static_step terms must have frequency 0")
        if self.kind == SINUSOID and self.frequency == 0.0:
            raise ValueError("sinusoid terms must have positive frequency")
        if self.ramp_time < 0:
            raise ValueError(f"ramp_time must be >= 0, got {self.ramp_time}")

    def value(self, t: float) -> float:
        if self.kind == STATIC_STEP:
            if self.ramp_time > 0.0 and t < self.ramp_time:
                return self.amplitude * math.sin(0.5 * math.pi * t / self.ramp_time) ** 2
            return self.amplitude
        return self.amplitude * math.sin(self.frequency * t + self.phase)


@dataclass(frozen=True)
class FieldConfig:
    """Well geometry plus the additive time-profile terms.

    An empty term list means free evolution.
    """

    shape: WellShape
    terms: tuple[TimeTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


def sauter_shape(z: float | np.ndarray, shape: WellShape):
    """Spatial profile S(z); range is a subset of (-1, 0]."""
    w, d = shape.edge_width, shape.extension
    return 0.5 * (np.tanh((z - 0.5 * d) / w) - np.tanh((z + 0.5 * d) / w))


def potential_height(config: FieldConfig, t: float) -> float:
    """Instantaneous height V(t), the sum of all time terms."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return sum(term.value(t) for term in config.terms)


def potential_profile(config: FieldConfig, grid: GridSpec, t: float) -> np.ndarray:
    """V(t) * S(z_j) sampled on the grid."""
    return potential_height(config, t) * sauter_shape(grid.z, config.shape)
