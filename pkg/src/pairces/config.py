"""Run configuration: JSON schema, validation, unit conversion.

Config files state physics values in units of the speed of light, as in
the source material: energies and frequencies carry the suffix _c2
(multiples of c^2), lengths _invc (multiples of 1/c), times _invc2
(multiples of 1/c^2) and momenta _c (multiples of c).  Conversion to
atomic units happens once at load.  Unknown keys are rejected at every
level; the normalized c-unit dictionary is kept on the RunConfig so a
written manifest reloads into a bitwise-equal configuration.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .amplitudes import ModeSelection
from .ces import CesSpec, ChannelSpec, channel_lattice
from .core import Constants, GridSpec
from .fields import FieldConfig, SINUSOID, STATIC_STEP, TimeTerm, WellShape
from .propagator import Schedule


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def _check_keys(section: dict, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected an object, got {type(section).__name__}")
    unknown = set(section) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    missing = set(required) - set(section)
    if missing:
        raise ConfigError(f"{where}: missing required keys {sorted(missing)}")


def _number(section: dict, key: str, where: str, default=None, allow_none: bool = False):
    if key not in section or section[key] is None:
        if key in section and allow_none:
            return None
        if default is not None or allow_none:
            return default
        raise ConfigError(f"{where}.{key}: required number missing")
    value = section[key]
    if type(value) not in (int, float):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def _integer(section: dict, key: str, where: str, default=None):
    value = section.get(key, default)
    if value is None:
        raise ConfigError(f"{where}.{key}: required integer missing")
    if type(value) is not int:
        raise ConfigError(f"{where}.{key}: expected an integer, got {value!r}")
    return value


def _boolean(section: dict, key: str, where: str, default: bool):
    value = section.get(key, default)
    if type(value) is not bool:
        raise ConfigError(f"{where}.{key}: expected a boolean, got {value!r}")
    return value


@dataclass(frozen=True)
class ChannelOptions:
    """Channel-lattice generation and assignment parameters (atomic units)."""

    frequencies: tuple[float, ...]
    v0: float
    order_max: int
    allow_emission: bool
    tolerance: float

    def lattice(self, constants: Constants, e_max: float) -> list[ChannelSpec]:
        """Predicted channels covering the spectrum range; empty for a free field."""
        if not self.frequencies and self.v0 <= 0:
            return []
        lower = 2.0 * constants.c2 - self.tolerance
        return channel_lattice(
            self.frequencies, self.v0, (lower, e_max), self.order_max, self.allow_emission
        )


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved, validated configuration of one simulation run."""

    constants: Constants
    grid: GridSpec
    field: FieldConfig
    schedule: Schedule
    selection: ModeSelection
    ces: CesSpec
    channels: ChannelOptions
    workers: int
    dump_amplitudes: bool
    preset: str | None
    source: dict = field(compare=False, repr=False, default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if "config" in data:
            _check_keys(data, "manifest", ("config",), ("meta",))
            data = data["config"]
        _check_keys(
            data,
            "config",
            ("grid", "well", "schedule"),
            ("constants", "field_terms", "selection", "ces", "channels",
             "workers", "dump_amplitudes", "preset"),
        )

        const_sec = data.get("constants", {})
        _check_keys(const_sec, "constants", (), ("c",))
        c = _number(const_sec, "c", "constants", default=Constants().c)
        try:
            constants = Constants(c=c)
        except ValueError as exc:
            raise ConfigError(f"constants.c: {exc}") from None
        c2 = constants.c2

        grid_sec = data["grid"]
        _check_keys(grid_sec, "grid", ("box_length", "points"))
        try:
            grid = GridSpec(
                length=_number(grid_sec, "box_length", "grid"),
                n_points=_integer(grid_sec, "points", "grid"),
            )
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from None

        well_sec = data["well"]
        _check_keys(well_sec, "well", ("edge_width_invc", "extension_invc"))
        try:
            shape = WellShape(
                edge_width=_number(well_sec, "edge_width_invc", "well") / c,
                extension=_number(well_sec, "extension_invc", "well") / c,
            )
        except ValueError as exc:
            raise ConfigError(f"well: {exc}") from None
        if not shape.extension < grid.length:
            raise ConfigError(
                f"well.extension_invc: well extension {shape.extension} must be smaller "
                f"than the box length {grid.length}"
            )

        terms = []
        for i, term_sec in enumerate(data.get("field_terms", [])):
            where = f"field_terms[{i}]"
            _check_keys(term_sec, where, ("kind", "amplitude_c2"),
                        ("frequency_c2", "phase", "ramp_time_invc2"))
            kind = term_sec["kind"]
            if kind not in (STATIC_STEP, SINUSOID):
                raise ConfigError(f"{where}.kind: must be '{STATIC_STEP}' or '{SINUSOID}'")
            try:
                terms.append(TimeTerm(
                    kind=kind,
                    amplitude=_number(term_sec, "amplitude_c2", where) * c2,
                    frequency=_number(term_sec, "frequency_c2", where, default=0.0) * c2,
                    phase=_number(term_sec, "phase", where, default=0.0),
                    ramp_time=_number(term_sec, "ramp_time_invc2", where, default=0.0) / c2,
                ))
            except ValueError as exc:
                raise ConfigError(f"{where}: {exc}") from None
        field_config = FieldConfig(shape=shape, terms=tuple(terms))

        sched_sec = data["schedule"]
        _check_keys(sched_sec, "schedule", ("total_time_invc2", "steps", "samples"), ("include_t0",))
        try:
            schedule = Schedule.uniform(
                t_total=_number(sched_sec, "total_time_invc2", "schedule") / c2,
                n_steps=_integer(sched_sec, "steps", "schedule"),
                n_samples=_integer(sched_sec, "samples", "schedule"),
                include_t0=_boolean(sched_sec, "include_t0", "schedule", default=True),
            )
        except ValueError as exc:
            raise ConfigError(f"schedule: {exc}") from None

        sel_sec = data.get("selection", {})
        _check_keys(sel_sec, "selection", (), ("negative_cutoff_c", "positive_cutoff_c"))
        neg_cut = _number(sel_sec, "negative_cutoff_c", "selection", allow_none=True)
        pos_cut = _number(sel_sec, "positive_cutoff_c", "selection", allow_none=True)
        selection = ModeSelection(
            negative_cutoff=neg_cut * c if neg_cut is not None else None,
            positive_cutoff=pos_cut * c if pos_cut is not None else None,
        )
        p_max = float(np.max(np.abs(grid.momenta)))
        for name, cut in (("negative_cutoff_c", selection.negative_cutoff),
                          ("positive_cutoff_c", selection.positive_cutoff)):
            if cut is not None and cut > p_max:
                raise ConfigError(
                    f"selection.{name}: cutoff {cut} exceeds grid momentum range {p_max}"
                )

        ces_sec = data.get("ces", {})
        _check_keys(ces_sec, "ces", (), ("e_min_c2", "e_max_c2", "points", "window_c2"))
        e_min_c2 = _number(ces_sec, "e_min_c2", "ces", default=2.0)
        if e_min_c2 < 2.0:
            raise ConfigError(f"ces.e_min_c2: spectrum must start at or above 2 (pair threshold), got {e_min_c2}")
        try:
            ces = CesSpec(
                e_min=e_min_c2 * c2,
                e_max=_number(ces_sec, "e_max_c2", "ces", default=8.0) * c2,
                n_points=_integer(ces_sec, "points", "ces", default=1000),
                window=_number(ces_sec, "window_c2", "ces", default=0.04) * c2,
            )
        except ValueError as exc:
            raise ConfigError(f"ces: {exc}") from None

        ch_sec = data.get("channels", {})
        _check_keys(ch_sec, "channels",
                    (), ("frequencies_c2", "static_v0_c2", "order_max", "allow_emission", "tolerance_c2"))
        freqs = ch_sec.get("frequencies_c2", [])
        if not isinstance(freqs, list) or any(type(f) not in (int, float) for f in freqs):
            raise ConfigError("channels.frequencies_c2: expected a list of numbers")
        if len(freqs) > 2:
            raise ConfigError("channels.frequencies_c2: at most two frequencies are supported")
        tolerance_c2 = _number(ch_sec, "tolerance_c2", "channels", default=0.3)
        if not tolerance_c2 > 0:
            raise ConfigError(f"channels.tolerance_c2: must be positive, got {tolerance_c2}")
        order_max = _integer(ch_sec, "order_max", "channels", default=8)
        if order_max < 1:
            raise ConfigError(f"channels.order_max: must be >= 1, got {order_max}")
        channels = ChannelOptions(
            frequencies=tuple(float(f) * c2 for f in freqs),
            v0=_number(ch_sec, "static_v0_c2", "channels", default=0.0) * c2,
            order_max=order_max,
            allow_emission=_boolean(ch_sec, "allow_emission", "channels", default=False),
            tolerance=tolerance_c2 * c2,
        )

        workers = data.get("workers", 1)
        if workers is None:
            workers = 1
        if type(workers) is not int or workers < 1:
            raise ConfigError(f"workers: expected a positive integer, got {workers!r}")
        dump = _boolean(data, "dump_amplitudes", "config", default=False)
        preset = data.get("preset")
        if preset is not None and not isinstance(preset, str):
            raise ConfigError(f"preset: expected a string, got {preset!r}")

        # The normalized dict repeats the original c-unit inputs (defaults
        # materialized), so reloading a manifest performs the exact same
        # conversions and compares equal bitwise.
        normalized = {
            "constants": {"c": c},
            "grid": {"box_length": grid.length, "points": grid.n_points},
            "well": {
                "edge_width_invc": _number(well_sec, "edge_width_invc", "well"),
                "extension_invc": _number(well_sec, "extension_invc", "well"),
            },
            "field_terms": [
                {
                    "kind": sec["kind"],
                    "amplitude_c2": _number(sec, "amplitude_c2", "field_terms"),
                    "frequency_c2": _number(sec, "frequency_c2", "field_terms", default=0.0),
                    "phase": _number(sec, "phase", "field_terms", default=0.0),
                    "ramp_time_invc2": _number(sec, "ramp_time_invc2", "field_terms", default=0.0),
                }
                for sec in data.get("field_terms", [])
            ],
            "schedule": {
                "total_time_invc2": _number(sched_sec, "total_time_invc2", "schedule"),
                "steps": schedule.n_steps,
                "samples": len([m for m in schedule.sample_steps if m > 0]),
                "include_t0": schedule.sample_steps[0] == 0,
            },
            "selection": {"negative_cutoff_c": neg_cut, "positive_cutoff_c": pos_cut},
            "ces": {
                "e_min_c2": e_min_c2,
                "e_max_c2": _number(ces_sec, "e_max_c2", "ces", default=8.0),
                "points": ces.n_points,
                "window_c2": _number(ces_sec, "window_c2", "ces", default=0.04),
            },
            "channels": {
                "frequencies_c2": [float(f) for f in freqs],
                "static_v0_c2": _number(ch_sec, "static_v0_c2", "channels", default=0.0),
                "order_max": channels.order_max,
                "allow_emission": channels.allow_emission,
                "tolerance_c2": tolerance_c2,
            },
            "workers": workers,
            "dump_amplitudes": dump,
            "preset": preset,
        }
        return cls(
            constants=constants,
            grid=grid,
            field=field_config,
            schedule=schedule,
            selection=selection,
            ces=ces,
            channels=channels,
            workers=workers,
            dump_amplitudes=dump,
            preset=preset,
            source=normalized,
        )

    def to_dict(self) -> dict:
        return json.loads(json.dumps(self.source))


def load_config(path) -> RunConfig:
    """Load and validate a JSON run configuration (or a run manifest)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return RunConfig.from_dict(data)
