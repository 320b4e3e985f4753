"""Render paper-style figures from a completed simulation output directory.

Input is strictly the documented artifact set of a run (the CSV files plus
manifest.json); the simulator itself is never imported.  Each figure id
maps to one layout:

    fig1  final CES with an early-time inset        (static scenario style)
    fig2  final CES with annotated peaks            (multiphoton style)
    fig3  50-trace CES waterfall
    fig4  per-channel yield time series
    fig5  final CES with channel lattice markers    (two-color style)
    fig6  final CES with static-assisted markers    (combined style)
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")

REQUIRED_FILES = {
    "fig1": ("ces_final.csv", "ces_waterfall.csv"),
    "fig2": ("ces_final.csv", "peaks.csv"),
    "fig3": ("ces_waterfall.csv",),
    "fig4": ("channel_series.csv", "n_t.csv"),
    "fig5": ("ces_final.csv", "channels.csv"),
    "fig6": ("ces_final.csv", "channels.csv"),
}


class SchemaError(ValueError):
    """An input file is missing, unreadable, or structurally wrong."""


@dataclass(frozen=True)
class FigureRequest:
    figure: str
    input_dir: Path
    output_path: Path
    e_range_c2: tuple[float, float] | None = None
    title: str | None = None

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise SchemaError(f"unknown figure id {self.figure!r}; choose from {FIGURE_IDS}")


def load_table(path: Path, columns: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Read a CSV with the exact expected header; error names the file."""
    if not path.exists():
        raise SchemaError(f"{path}: required input file is missing")
    lines = path.read_text().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = tuple(lines[0].split(","))
    if header != columns:
        raise SchemaError(f"{path}: expected columns {columns}, found {header}")
    if len(lines) < 2:
        raise SchemaError(f"{path}: no data rows")
    rows = [line.split(",") for line in lines[1:] if line]
    if any(len(r) != len(columns) for r in rows):
        raise SchemaError(f"{path}: ragged rows")
    out: dict[str, np.ndarray] = {}
    for i, name in enumerate(columns):
        values = [r[i] for r in rows]
        try:
            out[name] = np.array([float(v) for v in values])
        except ValueError:
            out[name] = np.array(values, dtype=object)
    return out


def load_c2(input_dir: Path) -> float:
    """Unit of c^2 from the run manifest, for axis labeling."""
    path = input_dir / "manifest.json"
    if not path.exists():
        raise SchemaError(f"{path}: required input file is missing")
    try:
        manifest = json.loads(path.read_text())
        c = float(manifest["config"]["constants"]["c"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: cannot read constants.c ({exc})") from None
    return c * c


def _spectrum_axes(ax, e_c2, rho, request: FigureRequest):
    ax.plot(e_c2, rho, lw=1.0, color="tab:blue")
    ax.set_xlabel(r"conversion energy $E$ [$c^2$]")
    ax.set_ylabel(r"$\rho(E)$")
    if request.e_range_c2:
        ax.set_xlim(*request.e_range_c2)
    ax.set_ylim(bottom=0)


def render(request: FigureRequest):
    """Build the requested figure; returns the matplotlib Figure."""
    for name in REQUIRED_FILES[request.figure]:
        if not (request.input_dir / name).exists():
            raise SchemaError(f"{request.input_dir / name}: required input file is missing")
    c2 = load_c2(request.input_dir)
    builder = {
        "fig1": _fig_ces_with_inset,
        "fig2": _fig_ces_annotated,
        "fig3": _fig_waterfall,
        "fig4": _fig_channel_series,
        "fig5": _fig_ces_with_channels,
        "fig6": _fig_ces_with_channels,
    }[request.figure]
    fig = builder(request, c2)
    if request.title:
        fig.suptitle(request.title)
    return fig


def render_to_file(request: FigureRequest):
    fig = render(request)
    request.output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(request.output_path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def _fig_ces_with_inset(request: FigureRequest, c2: float):
    final = load_table(request.input_dir / "ces_final.csv", ("E", "rho"))
    wf = load_table(request.input_dir / "ces_waterfall.csv", ("t", "E", "rho"))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    _spectrum_axes(ax, final["E"] / c2, final["rho"], request)
    t_first = np.min(wf["t"])
    early = wf["t"] == t_first
    inset = ax.inset_axes([0.55, 0.55, 0.42, 0.4])
    inset.plot(wf["E"][early] / c2, wf["rho"][early], lw=0.8, color="tab:red")
    inset.set_title("shortly after turn-on", fontsize=8)
    inset.tick_params(labelsize=7)
    fig.tight_layout()
    return fig


def _fig_ces_annotated(request: FigureRequest, c2: float):
    final = load_table(request.input_dir / "ces_final.csv", ("E", "rho"))
    peaks = load_table(request.input_dir / "peaks.csv", ("E_peak", "height"))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    _spectrum_axes(ax, final["E"] / c2, final["rho"], request)
    for e, h in zip(peaks["E_peak"], peaks["height"]):
        ax.annotate(
            f"{e / c2:.2f}",
            xy=(e, h),
            xytext=(0, 6),
            textcoords="offset points",
            ha="center",
            fontsize=7,
        )
    fig.tight_layout()
    return fig


def _fig_waterfall(request: FigureRequest, c2: float):
    wf = load_table(request.input_dir / "ces_waterfall.csv", ("t", "E", "rho"))
    times = np.unique(wf["t"])
    peak = float(np.max(wf["rho"])) or 1.0
    offset = 0.04 * peak
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    for i, t in enumerate(times):
        sel = wf["t"] == t
        ax.plot(wf["E"][sel] / c2, wf["rho"][sel] + i * offset, lw=0.6,
                color=plt.cm.viridis(i / max(1, len(times) - 1)))
    ax.set_xlabel(r"conversion energy $E$ [$c^2$]")
    ax.set_ylabel(r"$\rho(E, t)$ (traces offset by sample)")
    fig.tight_layout()
    return fig


def _fig_channel_series(request: FigureRequest, c2: float):
    series = load_table(request.input_dir / "channel_series.csv", ("t", "label", "yield"))
    totals = load_table(request.input_dir / "n_t.csv", ("t", "N"))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    t_scale = c2  # time axis in units of 1/c^2
    ax.plot(totals["t"] * t_scale, totals["N"], color="black", lw=1.5, label="total")
    for label in sorted(set(series["label"])):
        sel = series["label"] == label
        t = series["t"][sel].astype(float)
        y = series["yield"][sel].astype(float)
        order = np.argsort(t)
        ax.plot(t[order] * t_scale, y[order], lw=1.0, label=str(label))
    ax.set_xlabel(r"time [$1/c^2$]")
    ax.set_ylabel("pair yield")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return fig


def _fig_ces_with_channels(request: FigureRequest, c2: float):
    final = load_table(request.input_dir / "ces_final.csv", ("E", "rho"))
    channels = load_table(
        request.input_dir / "channels.csv",
        ("label", "n1", "n2", "k", "E_pred", "E_peak_observed", "yield_final", "fraction"),
    )
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    _spectrum_axes(ax, final["E"] / c2, final["rho"], request)
    top = float(np.max(final["rho"])) or 1.0
    for label, k, e_pred in zip(channels["label"], channels["k"], channels["E_pred"]):
        assisted = float(k) > 0
        ax.axvline(float(e_pred) / c2, color="tab:red" if assisted else "gray",
                   ls="--" if assisted else ":", lw=0.8, alpha=0.7)
        ax.text(float(e_pred) / c2, top * 1.02, str(label), rotation=90,
                fontsize=6, ha="center", va="bottom")
    ax.set_ylim(0, top * 1.25)
    fig.tight_layout()
    return fig
