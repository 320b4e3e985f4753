"""Shared fixtures: toy systems for fast tests, cached desk runs for acceptance.

Desk-scale preset runs take a few minutes each, so they are executed once
per session and shared.  Setting PAIRCES_TEST_CACHE to a directory keeps
the artifacts across sessions (identical configurations produce identical
outputs, which is itself under test).
"""
from __future__ import annotations

import hashlib
import json
import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import pairces as pc
from pairces.config import RunConfig
from pairces.presets import make_preset, oscillating_source
from pairces.runner import ANALYSIS_FILES, run


@pytest.fixture(scope="session")
def toy_const() -> pc.Constants:
    return pc.Constants(c=10.0)


@pytest.fixture(scope="session")
def toy_grid() -> pc.GridSpec:
    return pc.build_grid(3.2, 32)


@pytest.fixture(scope="session")
def toy_shape() -> pc.WellShape:
    return pc.WellShape(edge_width=0.25, extension=0.8)


def _run_cached(config: RunConfig, cache_root: Path, label: str) -> Path:
    key = hashlib.sha256(
        json.dumps(config.to_dict(), sort_keys=True).encode()
    ).hexdigest()[:16]
    out = cache_root / f"{label}-{key}"
    if all((out / name).exists() for name in ANALYSIS_FILES) and (out / "manifest.json").exists():
        return out
    run(config, out, log=lambda msg: print(f"[{label}] {msg}", file=sys.stderr, flush=True))
    return out


@pytest.fixture(scope="session")
def run_cache(tmp_path_factory) -> Path:
    env = os.environ.get("PAIRCES_TEST_CACHE")
    if env:
        root = Path(env)
        root.mkdir(parents=True, exist_ok=True)
        return root
    return tmp_path_factory.mktemp("desk-runs")


@pytest.fixture(scope="session")
def desk_run(run_cache):
    """desk_run(preset_name) -> output directory of a completed desk run."""

    def runner(name: str) -> Path:
        return _run_cached(make_preset(name, "desk"), run_cache, name)

    return runner


@pytest.fixture(scope="session")
def desk_osc15_run(run_cache) -> Path:
    """Desk-scale oscillating run at 1.5c^2 (needed for the two-color enhancement check)."""
    src = oscillating_source(1.47, 1.5, "desk")
    src["preset"] = "osc-1.5:desk"
    return _run_cached(RunConfig.from_dict(src), run_cache, "osc-1.5")


def read_csv(path: Path) -> list[dict]:
    """Tiny CSV reader: list of {column: string} dicts."""
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def csv_floats(path: Path, column: str) -> list[float]:
    return [float(row[column]) for row in read_csv(path)]
