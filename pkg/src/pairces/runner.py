"""Run orchestration and artifact output.

A run sweeps the amplitude matrix, derives every analysis product
(N(t) series, final CES, 50-sample waterfall, peak table, channel
yields) and writes them as CSV files plus a manifest.  Floats are
formatted with 17 significant digits and all orderings are fixed, so
identical configurations produce byte-identical CSV files.
"""
from __future__ import annotations

import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .amplitudes import AmplitudeMatrix, compute_amplitudes, dump_amplitudes, pair_number
from .ces import CesEvaluator, CesSpec, mean_conversion_energy, peak_detect
from .ces import channel_yields as assign_channel_yields
from .config import ChannelOptions, RunConfig
from .kernels import backend_name

ANALYSIS_FILES = (
    "n_t.csv",
    "ces_final.csv",
    "ces_waterfall.csv",
    "peaks.csv",
    "channels.csv",
    "channel_series.csv",
)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_analysis_outputs(
    matrix,
    ces_spec: CesSpec,
    channel_options: ChannelOptions,
    out_dir: Path,
) -> dict:
    """Write the CSV products derived from an amplitude matrix.

    Works on a freshly computed AmplitudeMatrix or a reloaded dump.
    Returns summary values for the manifest.
    """
    times = np.asarray(matrix.sample_times, dtype=float)
    n_series = [pair_number(matrix, t) for t in times]
    _write_csv(out_dir / "n_t.csv", "t,N",
               ([_fmt(t), _fmt(n)] for t, n in zip(times, n_series)))

    evaluator = CesEvaluator(matrix)
    final_t = times[-1]
    final_spectrum = evaluator.spectrum(final_t, ces_spec)
    _write_csv(out_dir / "ces_final.csv", "E,rho",
               ([_fmt(e), _fmt(r)] for e, r in final_spectrum))

    waterfall_times = [t for t in times if t > 0.0]
    with open(out_dir / "ces_waterfall.csv", "w") as fh:
        fh.write("t,E,rho\n")
        for t in waterfall_times:
            for e, r in evaluator.spectrum(t, ces_spec):
                fh.write(f"{_fmt(t)},{_fmt(e)},{_fmt(r)}\n")

    peaks = peak_detect(final_spectrum)
    _write_csv(out_dir / "peaks.csv", "E_peak,height",
               ([_fmt(e), _fmt(h)] for e, h in peaks))

    channels = channel_options.lattice(matrix.constants, ces_spec.e_max)
    if channels:
        yields, unassigned = assign_channel_yields(matrix, channels, channel_options.tolerance)
    else:
        yields, unassigned = [], np.array([pair_number(matrix, t) for t in times])

    def observed_peak(ch) -> str:
        near = [e for e, _ in peaks if abs(e - ch.e_pred) <= channel_options.tolerance]
        if not near:
            return ""
        return _fmt(min(near, key=lambda e: abs(e - ch.e_pred)))

    _write_csv(
        out_dir / "channels.csv",
        "label,n1,n2,k,E_pred,E_peak_observed,yield_final,fraction",
        (
            [y.channel.label, str(y.channel.n1), str(y.channel.n2), str(y.channel.k),
             _fmt(y.channel.e_pred), observed_peak(y.channel),
             _fmt(y.series[-1]), _fmt(y.fraction_of_total)]
            for y in yields
        ),
    )

    with open(out_dir / "channel_series.csv", "w") as fh:
        fh.write("t,label,yield\n")
        for i, t in enumerate(times):
            for y in yields:
                fh.write(f"{_fmt(t)},{y.channel.label},{_fmt(y.series[i])}\n")
            fh.write(f"{_fmt(t)},unassigned,{_fmt(unassigned[i])}\n")

    summary = {"final_pair_number": n_series[-1], "peaks": len(peaks)}
    if n_series[-1] > 0:
        summary["mean_conversion_energy"] = mean_conversion_energy(matrix, final_t)
    return summary


def run(config: RunConfig, out_dir, log=None) -> AmplitudeMatrix:
    """Execute a full simulation + analysis into out_dir.

    Any failure removes the files written so far before re-raising, so a
    directory either holds a complete artifact set or none.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log = log or (lambda msg: None)
    written = [out_dir / name for name in ANALYSIS_FILES]
    written += [out_dir / "manifest.json", out_dir / "amplitudes.bin"]
    t0 = time.time()
    try:
        negative, positive = config.selection.resolve(config.grid, config.constants)
        log(f"sweeping {len(negative)} negative modes -> {len(positive)} projections "
            f"({config.schedule.n_steps} steps, {config.workers} worker(s), "
            f"{backend_name()} kernels)")
        matrix = compute_amplitudes(
            config.grid, config.field, config.schedule, config.selection,
            constants=config.constants, workers=config.workers,
            progress=lambda done, total: log(f"  chunk {done}/{total}"),
        )
        log("analyzing")
        summary = write_analysis_outputs(matrix, config.ces, config.channels, out_dir)
        if config.dump_amplitudes:
            dump_amplitudes(matrix, out_dir / "amplitudes.bin")
        manifest = {
            "config": config.to_dict(),
            "meta": {
                "package_version": __version__,
                "kernel_backend": backend_name(),
                "wall_time_s": time.time() - t0,
                "created_utc": datetime.now(timezone.utc).isoformat(),
                "norm_drift": matrix.norm_drift,
                **summary,
            },
        }
        with open(out_dir / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
        log(f"done in {time.time() - t0:.1f} s; N_final = {summary['final_pair_number']:.6g}")
        return matrix
    except BaseException:
        for path in written:
            try:
                path.unlink(missing_ok=True)
            except OSError:
                print(f"warning: could not remove partial output {path}", file=sys.stderr)
        raise
