"""Command-line entry point.

    coexsim run --config scenario.txt [--seed N] [--out DIR] [--set key=value ...]
    coexsim preset fig3 [--drops N] [--out DIR]
    coexsim oracle campbell [--trials N]

Exit status: 0 success, 2 configuration error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .config import parse_config
from .engine import empirical_cdf, run
from .errors import ConfigError
from .interference import campbell_cases
from .presets import PRESETS, summarize, fmt, run_preset, write_csv

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _overrides(pairs) -> dict:
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coexsim", description="Radar / outdoor Wi-Fi coexistence simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario")
    p.add_argument("--config", type=Path, help="flat key = value config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--set", dest="overrides", action="append", metavar="KEY=VALUE",
                   help="override a config field (repeatable)")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("preset", help="regenerate a figure as CSV")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--drops", type=int)
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--config", type=Path, help="base config for the preset")
    p.add_argument("--seed", type=int)
    p.add_argument("--set", dest="overrides", action="append", metavar="KEY=VALUE")
    p.add_argument("--values", type=float, nargs="+", help="override the sweep values (d in m, theta in deg)")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("oracle", help="independent checks")
    p.add_argument("which", choices=["campbell"])
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    return parser


def _config(args, extra=None):
    overrides = _overrides(args.overrides)
    for key in ("seed", "workers"):
        if getattr(args, key, None) is not None:
            overrides[key] = getattr(args, key)
    overrides.update(extra or {})
    return parse_config(args.config, overrides)


def cmd_run(args) -> int:
    cfg = _config(args)
    result = run(cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    summary = summarize(result)
    header = f"# coexsim run config_hash={cfg.digest()} seed={cfg.seed}\n"
    write_csv(args.out / "summary.csv", header, [["metric", "value"]] + [
        [k, fmt(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else str(v)]
        for k, v in summary.items() if k != "wall_time_s"])
    finite = result.nppi_db[np.isfinite(result.nppi_db)]
    grid = np.linspace(finite[0], finite[-1], 201)
    write_csv(args.out / "nppi_cdf.csv", header,
              [["nppi_db", "cdf"]] + [[fmt(x), fmt(p)] for x, p in zip(grid, empirical_cdf(finite, grid))])
    (args.out / "run_manifest.json").write_text(
        json.dumps({"config": cfg.to_dict(), "config_hash": cfg.digest(), "seed": cfg.seed,
                    "summary": summary}, indent=2, sort_keys=True) + "\n")
    print(f"MMAI {result.mmai_dbm:.2f} dBm  INR {result.inr_mean_db:.2f} dB  "
          f"median NPPI {np.median(result.nppi_db):.2f} dB  ({result.drop_count} drops)")
    return EXIT_OK


def cmd_preset(args) -> int:
    extra = {"n_drops": args.drops} if args.drops is not None else {}
    base = _config(args, extra)
    for path in run_preset(args.name, args.out, base, args.values):
        print(path)
    return EXIT_OK


def cmd_oracle(args) -> int:
    ok = True
    rng = np.random.default_rng(args.seed)
    for name, case in campbell_cases().items():
        res = case.run(rng, args.trials)
        passed = abs(res.empirical_mean - case.closed_form) < 3 * res.standard_error
        ok &= passed
        print(f"{name:8s} empirical {res.empirical_mean:.6g} +- {res.standard_error:.3g}  "
              f"analytic {case.closed_form:.6g}  z={(res.empirical_mean - case.closed_form) / res.standard_error:+.2f}  "
              f"{'PASS' if passed else 'FAIL'}")
    return EXIT_OK if ok else EXIT_RUNTIME


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": cmd_run, "preset": cmd_preset, "oracle": cmd_oracle}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - top-level boundary
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
