"""Scenario presets for the four field families.

Every preset shares the common numerical setup (L = 2.5, W = 0.3/c,
D = 8/c, t_total = 40*pi/c^2 over 4000 steps, 50 snapshots) and differs
only in the time profile of the potential height and in the channel
lattice used for the yield decomposition.  `full` scale runs the complete
4096-point grid with 8c momentum cutoffs; `desk` drops to 1024 points and
6c cutoffs, which runs in minutes and reproduces the peak structure.
"""
from __future__ import annotations

import math

from .config import RunConfig

FULL_POINTS = 4096
DESK_POINTS = 1024
FULL_CUTOFF_C = 8.0
DESK_CUTOFF_C = 6.0
TOTAL_TIME_INVC2 = 40.0 * math.pi

SCALES = ("desk", "full")


def _base(scale: str) -> dict:
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}; choose from {SCALES}")
    desk = scale == "desk"
    cutoff = DESK_CUTOFF_C if desk else FULL_CUTOFF_C
    return {
        "grid": {"box_length": 2.5, "points": DESK_POINTS if desk else FULL_POINTS},
        "well": {"edge_width_invc": 0.3, "extension_invc": 8.0},
        "schedule": {"total_time_invc2": TOTAL_TIME_INVC2, "steps": 4000, "samples": 50},
        "selection": {"negative_cutoff_c": cutoff, "positive_cutoff_c": cutoff},
        "ces": {"e_min_c2": 2.0, "e_max_c2": 8.0, "points": 1000, "window_c2": 0.04},
    }


def static_source(height_c2: float, scale: str) -> dict:
    src = _base(scale)
    src["field_terms"] = [{"kind": "static_step", "amplitude_c2": height_c2}]
    src["channels"] = {
        "frequencies_c2": [],
        "static_v0_c2": height_c2,
        "order_max": 1,
        "allow_emission": False,
        "tolerance_c2": 0.3,
    }
    return src


def oscillating_source(amplitude_c2: float, frequency_c2: float, scale: str) -> dict:
    src = _base(scale)
    src["field_terms"] = [
        {"kind": "sinusoid", "amplitude_c2": amplitude_c2, "frequency_c2": frequency_c2}
    ]
    src["channels"] = {
        "frequencies_c2": [frequency_c2],
        "static_v0_c2": 0.0,
        "order_max": 8,
        "allow_emission": False,
        "tolerance_c2": 0.3,
    }
    return src


def bifrequent_source(amplitude_c2: float, f1_c2: float, f2_c2: float, scale: str) -> dict:
    src = _base(scale)
    src["field_terms"] = [
        {"kind": "sinusoid", "amplitude_c2": amplitude_c2, "frequency_c2": f1_c2},
        {"kind": "sinusoid", "amplitude_c2": amplitude_c2, "frequency_c2": f2_c2},
    ]
    # Emission channels (e.g. 3w1-w2) show up in this scenario; order 5
    # keeps the lattice spacing at 0.2 c^2 so a 0.08 c^2 assignment
    # half-width stays unambiguous.
    src["channels"] = {
        "frequencies_c2": [f1_c2, f2_c2],
        "static_v0_c2": 0.0,
        "order_max": 5,
        "allow_emission": True,
        "tolerance_c2": 0.08,
    }
    return src


def combined_source(v0_c2: float, amplitude_c2: float, frequency_c2: float, scale: str) -> dict:
    src = _base(scale)
    src["field_terms"] = [
        {"kind": "static_step", "amplitude_c2": v0_c2},
        {"kind": "sinusoid", "amplitude_c2": amplitude_c2, "frequency_c2": frequency_c2},
    ]
    # Static-assisted lines sit 0.3 c^2 from the photon lines, which caps
    # the unambiguous assignment half-width at 0.15 c^2.
    src["channels"] = {
        "frequencies_c2": [frequency_c2],
        "static_v0_c2": v0_c2,
        "order_max": 8,
        "allow_emission": False,
        "tolerance_c2": 0.15,
    }
    return src


#: name -> (source figure, description, builder)
PRESETS = {
    "static-2.5": ("FIG.1", "static well, height 2.5c^2 (tunneling)",
                   lambda scale: static_source(2.5, scale)),
    "static-3.0": ("FIG.1 variant", "static well, height 3.0c^2",
                   lambda scale: static_source(3.0, scale)),
    "static-3.5": ("FIG.1 variant", "static well, height 3.5c^2",
                   lambda scale: static_source(3.5, scale)),
    "osc-1.3": ("FIG.2/FIG.3", "oscillating well, V1=1.47c^2, w1=1.3c^2 (multiphoton)",
                lambda scale: oscillating_source(1.47, 1.3, scale)),
    "osc-2.1": ("FIG.4", "oscillating well, V1=1.47c^2, w1=2.1c^2 (one-photon saturation)",
                lambda scale: oscillating_source(1.47, 2.1, scale)),
    "bifreq-1.3-1.5": ("FIG.5", "two oscillating components, 1.3c^2 + 1.5c^2 (two-color)",
                       lambda scale: bifrequent_source(1.47, 1.3, 1.5, scale)),
    "combined-1.0-1.3": ("FIG.6", "static 1c^2 + oscillating 1.47c^2 at 1.3c^2 (assisted)",
                         lambda scale: combined_source(1.0, 1.47, 1.3, scale)),
}


def make_preset(name: str, scale: str = "desk") -> RunConfig:
    """Expand a named preset into a validated RunConfig."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    _, _, builder = PRESETS[name]
    src = builder(scale)
    src["preset"] = f"{name}:{scale}"
    return RunConfig.from_dict(src)


def preset_rows() -> list[tuple[str, str, str]]:
    """(name, figure, description) rows for the preset listing."""
    return [(name, fig, desc) for name, (fig, desc, _) in PRESETS.items()]
