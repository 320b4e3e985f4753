"""pairces: electron-positron pair creation in 1+1D, characterized by conversion energy."""

__version__ = "0.1.0"

from .amplitudes import (
    AmplitudeMatrix,
    ModeSelection,
    compute_amplitudes,
    dump_amplitudes,
    load_amplitude_dump,
    pair_number,
    pair_number_series,
    spatial_density,
)
from .ces import (
    CesSpec,
    ChannelSpec,
    ChannelYield,
    channel_lattice,
    channel_yields,
    ces_spectrum,
    conversion_energy,
    mean_conversion_energy,
    peak_detect,
)
from .config import ChannelOptions, ConfigError, RunConfig, load_config
from .core import (
    ATOMIC_C,
    Constants,
    FreeMode,
    GridSpec,
    TwoSpinorField,
    build_grid,
    free_modes,
    mode_wavefunction,
    transform,
)
from .fields import FieldConfig, TimeTerm, WellShape, potential_height, potential_profile, sauter_shape
from .kernels import backend_name
from .presets import make_preset, preset_rows
from .propagator import (
    KineticPhaseTable,
    Schedule,
    evolve,
    kinetic_half_step,
    potential_step,
    strang_step,
)
from .runner import run, write_analysis_outputs

__all__ = [
    "ATOMIC_C",
    "AmplitudeMatrix",
    "CesSpec",
    "ChannelOptions",
    "ChannelSpec",
    "ChannelYield",
    "ConfigError",
    "Constants",
    "FieldConfig",
    "FreeMode",
    "GridSpec",
    "KineticPhaseTable",
    "ModeSelection",
    "RunConfig",
    "Schedule",
    "TimeTerm",
    "TwoSpinorField",
    "WellShape",
    "backend_name",
    "build_grid",
    "channel_lattice",
    "channel_yields",
    "ces_spectrum",
    "compute_amplitudes",
    "conversion_energy",
    "dump_amplitudes",
    "evolve",
    "free_modes",
    "kinetic_half_step",
    "load_amplitude_dump",
    "load_config",
    "make_preset",
    "mean_conversion_energy",
    "mode_wavefunction",
    "pair_number",
    "pair_number_series",
    "peak_detect",
    "potential_height",
    "potential_profile",
    "potential_step",
    "preset_rows",
    "run",
    "sauter_shape",
    "spatial_density",
    "strang_step",
    "transform",
    "write_analysis_outputs",
]
