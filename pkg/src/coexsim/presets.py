"""Experiment presets that regenerate the coexistence figures as CSV tables.

fig3  INR vs radar distance for EDCA/CSMA with and without mitigation
fig4  NPPI CDFs for the same four regimes
fig5  INR vs off-axis threshold (EDCA, mitigation on)
fig6  NPPI CDFs for several thresholds (EDCA, mitigation on)
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import SimConfig
from .engine import RunResult, empirical_cdf, sweep_parameter
from .errors import ConfigError
from .interference import INR_THRESHOLD_DB

log = logging.getLogger(__name__)

REGIMES = (("EDCA", False), ("CSMA", False), ("EDCA", True), ("CSMA", True))
CDF_POINTS = 201


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    axis: str
    values: tuple
    regimes: tuple
    kind: str  # "inr" or "cdf"


PRESETS = {
    "fig3": ExperimentPreset("fig3", "d", tuple(1000.0 * k for k in range(1, 11)), REGIMES, "inr"),
    "fig4": ExperimentPreset("fig4", "d", (2000.0,), REGIMES, "cdf"),
    "fig5": ExperimentPreset("fig5", "theta", (0.0, 30.0, 60.0, 90.0, 120.0, 150.0, 180.0),
                             (("EDCA", True),), "inr"),
    "fig6": ExperimentPreset("fig6", "theta", (30.0, 90.0, 180.0), (("EDCA", True),), "cdf"),
}


def regime_label(scheme: str, mitigation: bool) -> str:
    return f"{scheme.lower()}_{'on' if mitigation else 'off'}"


def fmt(x: float) -> str:
    """Six significant digits, '.' decimal point regardless of locale."""
    return format(float(x), ".6g")


def run_matrix(preset: ExperimentPreset, base: SimConfig, values=None) -> dict:
    """``{(scheme, mitigation): [RunResult per value]}``.

    Every regime reuses the same per-value seeds, so regimes are compared on
    identical deployments.
    """
    values = preset.values if values is None else tuple(values)
    return {(s, m): sweep_parameter(base.replace(scheme=s, mitigation=m), preset.axis, values)
            for s, m in preset.regimes}


def _header(preset: str, base: SimConfig) -> str:
    return f"# coexsim preset={preset} config_hash={base.digest()} seed={base.seed}\n"


def _inr_table(preset: ExperimentPreset, values, results: dict) -> list[list[str]]:
    axis_col = "d_km" if preset.axis == "d" else "theta_deg"
    head = [axis_col] + [f"inr_db_{regime_label(*k)}" for k in results] + ["inr_threshold_db"]
    rows = [head]
    for i, v in enumerate(values):
        x = v / 1000.0 if preset.axis == "d" else v
        rows.append([fmt(x)] + [fmt(r[i].inr_mean_db) for r in results.values()] + [fmt(INR_THRESHOLD_DB)])
    return rows


def _cdf_table(preset: ExperimentPreset, values, results: dict) -> list[list[str]]:
    columns = {}
    for key, runs in results.items():
        for v, r in zip(values, runs):
            label = regime_label(*key) if len(values) == 1 else f"theta_{v:g}"
            columns[label] = r.nppi_db[np.isfinite(r.nppi_db)]
    lo = min(c[0] for c in columns.values())
    hi = max(c[-1] for c in columns.values())
    grid = np.linspace(lo, hi, CDF_POINTS)
    rows = [["nppi_db"] + [f"cdf_{k}" for k in columns]]
    cdfs = [empirical_cdf(c, grid) for c in columns.values()]
    for j, x in enumerate(grid):
        rows.append([fmt(x)] + [fmt(c[j]) for c in cdfs])
    return rows


def summarize(r: RunResult) -> dict:
    return {
        "d": r.config.d, "scheme": r.config.scheme, "mitigation": r.config.mitigation,
        "theta_deg": r.config.theta_deg, "seed": r.config.seed, "drops": r.drop_count,
        "mmai_dbm": r.mmai_dbm, "inr_db": r.inr_mean_db,
        "nppi_median_db": float(np.median(r.nppi_db)), "fallback_rate": r.fallback_rate,
        "sweep_violations": r.violations, "ap_share_safe": r.ap_share_safe,
        "ap_share_sweep": r.ap_share_sweep, "wall_time_s": r.wall_time,
    }


def write_csv(path: Path, header: str, rows: list[list[str]]) -> None:
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write(header)
        for row in rows:
            fh.write(",".join(row) + "\n")


def run_preset(name: str, out_dir, base: SimConfig | None = None, values=None) -> list[Path]:
    """Run a preset and write ``<name>.csv`` plus ``<name>_manifest.json`` into ``out_dir``."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    preset = PRESETS[name]
    base = SimConfig() if base is None else base
    values = preset.values if values is None else tuple(values)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    results = run_matrix(preset, base, values)
    rows = _inr_table(preset, values, results) if preset.kind == "inr" else _cdf_table(preset, values, results)
    csv_path = out_dir / f"{name}.csv"
    write_csv(csv_path, _header(name, base), rows)

    manifest = {
        "preset": name, "axis": preset.axis, "values": list(values),
        "config_hash": base.digest(), "seed": base.seed, "config": base.to_dict(),
        "seed_rule": "run i of the sweep uses seed + i for every regime",
        "runs": [summarize(r) for runs in results.values() for r in runs],
    }
    manifest_path = out_dir / f"{name}_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    log.info("wrote %s and %s", csv_path, manifest_path)
    return [csv_path, manifest_path]


def csv_body(path) -> str:
    """File contents without the leading ``#`` comment lines."""
    return "".join(line for line in Path(path).read_text().splitlines(keepends=True)
                   if not line.startswith("#"))
