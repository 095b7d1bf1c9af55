"""Command line front end: design, pattern, sweep, and cdf subcommands.

Every run reads the layered configuration (defaults, optional desk-scale
overlay, config file, ``--set`` overrides), emits its artifacts into the
output directory, and writes a JSON manifest recording the seed, the config
hash, and the artifact list. CSV artifacts start with a comment line
``# seed=<seed> config=sha256:<hash>`` tying them back to the manifest.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .arrays import pattern_heatmap
from .config import ConfigError, RunConfig, config_hash, parse_config, serialize_config
from .designs import ANALOG_KINDS, BEAM_KINDS
from .montecarlo import (
    SWEEP_AXES,
    capacity_cdf,
    run_cells,
    run_trial,
    sweep_from_results,
)


def _artifact_open(path: str, seed: int, cfg_hash: str):
    fh = open(path, "w", encoding="utf-8", newline="\n")
    fh.write(f"# seed={seed} config=sha256:{cfg_hash}\n")
    return fh


def write_heatmap_csv(path, seed, cfg_hash, thetas_deg, freqs, gains):
    """Angle-major gain map rows: theta_deg,f_hz,gain."""
    with _artifact_open(path, seed, cfg_hash) as fh:
        fh.write("theta_deg,f_hz,gain\n")
        for ti, theta in enumerate(thetas_deg):
            for ki, f in enumerate(freqs):
                fh.write(f"{repr(float(theta))},{repr(float(f))},{repr(float(gains[ti, ki]))}\n")


def write_design_json(path, design, seed, cfg_hash):
    doc = design.to_json_dict()
    doc["seed"] = int(seed)
    doc["config_sha256"] = cfg_hash
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_capacity_csv(path, seed, cfg_hash, results, beams):
    """Per-evaluation-point capacities: trial,beam,user,eval_index,capacity_bps."""
    with _artifact_open(path, seed, cfg_hash) as fh:
        fh.write("trial,beam,user,eval_index,capacity_bps\n")
        for res in results:
            for beam in beams:
                caps = res.records[beam].capacities
                for p in range(caps.shape[0]):
                    for u in range(caps.shape[1]):
                        fh.write(f"{res.trial_id},{beam},{u},{p},{repr(float(caps[p, u]))}\n")


def write_capacity_summary_csv(path, seed, cfg_hash, results, beams):
    """Per-trial minima: trial,beam,min_capacity_bps."""
    with _artifact_open(path, seed, cfg_hash) as fh:
        fh.write("trial,beam,min_capacity_bps\n")
        for res in results:
            for beam in beams:
                fh.write(f"{res.trial_id},{beam},{repr(res.min_capacity(beam))}\n")


def write_sweep_csv(path, seed, cfg_hash, result, display_values):
    """Aggregated statistics: axis,axis_value,beam,statistic,value_bps."""
    with _artifact_open(path, seed, cfg_hash) as fh:
        fh.write("axis,axis_value,beam,statistic,value_bps\n")
        mins = {b: result.min_over_trials(b) for b in result.beams}
        means = {b: result.mean_of_minima(b) for b in result.beams}
        for vi, dv in enumerate(display_values):
            for beam in result.beams:
                fh.write(
                    f"{result.axis},{repr(float(dv))},{beam},min,{repr(float(mins[beam][vi]))}\n"
                )
                fh.write(
                    f"{result.axis},{repr(float(dv))},{beam},mean_min,"
                    f"{repr(float(means[beam][vi]))}\n"
                )


def write_cdf_csv(path, seed, cfg_hash, series_list, display_of):
    """Empirical CDF points: beam,axis_value,capacity_bps,cum_prob."""
    with _artifact_open(path, seed, cfg_hash) as fh:
        fh.write("beam,axis_value,capacity_bps,cum_prob\n")
        for series in series_list:
            dv = display_of[series.axis_value]
            for x, pr in zip(series.values, series.probabilities):
                fh.write(f"{series.beam},{repr(float(dv))},{repr(float(x))},{repr(float(pr))}\n")


def write_manifest(path, command, seed, cfg: RunConfig, artifacts):
    doc = {
        "command": command,
        "seed": int(seed),
        "config_sha256": config_hash(cfg),
        "config": serialize_config(cfg),
        "version": __version__,
        "artifacts": sorted(artifacts),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_beams(arg, allowed, what):
    if arg is None:
        return None
    beams = tuple(b.strip() for b in arg.split(",") if b.strip())
    bad = [b for b in beams if b not in allowed]
    if bad:
        raise ConfigError(f"--beams: unknown {what} beam kinds {bad}; valid: {allowed}")
    if not beams:
        raise ConfigError("--beams: empty list")
    return beams


def _parse_values(arg):
    if arg is None:
        return None
    try:
        return tuple(float(v) for v in arg.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"--values: cannot parse {arg!r} as floats") from None


def _load_config(args) -> RunConfig:
    return parse_config(path=args.config, overrides=args.sets, desk=not args.full)


def _analog_designs(cfg: RunConfig, beams, seed):
    """Trial 0's analog designs under the current configuration."""
    base = cfg.base_trial(beams=beams)
    result = run_trial(base, seed, 0)
    return base, result


def cmd_design(args) -> int:
    cfg = _load_config(args)
    beams = _parse_beams(args.beams, ANALOG_KINDS, "analog") or ANALOG_KINDS
    seed = args.seed if args.seed is not None else 0
    _, result = _analog_designs(cfg, beams, seed)
    h = config_hash(cfg)
    artifacts = []
    for kind in beams:
        path = os.path.join(args.out, f"design_{kind}.json")
        write_design_json(path, result.designs[kind], seed, h)
        artifacts.append(os.path.basename(path))
        print(f"wrote {path}")
    write_manifest(os.path.join(args.out, "run_manifest.json"), "design", seed, cfg, artifacts)
    return 0


def cmd_pattern(args) -> int:
    cfg = _load_config(args)
    beams = _parse_beams(args.beams, ANALOG_KINDS, "analog") or ANALOG_KINDS
    seed = args.seed if args.seed is not None else 0
    base, result = _analog_designs(cfg, beams, seed)
    arr = base.array
    thetas_deg = np.arange(-90.0, 90.0 + 0.25, 0.5)
    grid = np.deg2rad(thetas_deg)
    freqs = arr.subcarrier_centers()
    h = config_hash(cfg)
    artifacts = []
    for kind in beams:
        gains = pattern_heatmap(result.designs[kind].weights, grid, arr)
        path = os.path.join(args.out, f"pattern_{kind}.csv")
        write_heatmap_csv(path, seed, h, thetas_deg, freqs, gains)
        artifacts.append(os.path.basename(path))
        print(f"wrote {path}")
    write_manifest(os.path.join(args.out, "run_manifest.json"), "pattern", seed, cfg, artifacts)
    return 0


def _sweep_inputs(args, cfg: RunConfig):
    beams = _parse_beams(args.beams, BEAM_KINDS, "known")
    values = _parse_values(args.values)
    sweep = cfg.sweep(master_seed=args.seed, axis=args.axis, values=values, beams=beams)
    display = values if values is not None else cfg.get("sweep", "values")
    return sweep, tuple(float(v) for v in display)


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    sweep, display = _sweep_inputs(args, cfg)
    base = cfg.base_trial()
    result = sweep_from_results(sweep, run_cells(sweep, base, workers=args.workers))
    h = config_hash(cfg)
    path = os.path.join(args.out, f"sweep_{sweep.axis}.csv")
    write_sweep_csv(path, args.seed, h, result, display)
    print(f"wrote {path}")
    write_manifest(
        os.path.join(args.out, "run_manifest.json"), "sweep", args.seed, cfg,
        [os.path.basename(path)],
    )
    return 0


def cmd_cdf(args) -> int:
    cfg = _load_config(args)
    sweep, display = _sweep_inputs(args, cfg)
    base = cfg.base_trial()
    cells = run_cells(sweep, base, workers=args.workers)
    result = sweep_from_results(sweep, cells)
    series = capacity_cdf(result)
    display_of = dict(zip(result.values, display))
    h = config_hash(cfg)
    artifacts = []
    path = os.path.join(args.out, f"cdf_{sweep.axis}.csv")
    write_cdf_csv(path, args.seed, h, series, display_of)
    artifacts.append(os.path.basename(path))
    print(f"wrote {path}")
    for vi in range(len(result.values)):
        detail = os.path.join(args.out, f"capacity_detail_{vi}.csv")
        summary = os.path.join(args.out, f"capacity_summary_{vi}.csv")
        write_capacity_csv(detail, args.seed, h, cells[vi], sweep.beams)
        write_capacity_summary_csv(summary, args.seed, h, cells[vi], sweep.beams)
        artifacts += [os.path.basename(detail), os.path.basename(summary)]
        print(f"wrote {detail}")
        print(f"wrote {summary}")
    write_manifest(os.path.join(args.out, "run_manifest.json"), "cdf", args.seed, cfg, artifacts)
    return 0


def _add_common(sub):
    sub.add_argument("--config", default=None, help="config file path")
    sub.add_argument("--set", dest="sets", action="append", default=[],
                     metavar="SECTION.KEY=VALUE", help="override a config key (repeatable)")
    sub.add_argument("--seed", type=int, default=None, help="master random seed")
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument("--full", action="store_true",
                     help="full-scale defaults instead of the desk-scale overlay")
    sub.add_argument("--beams", default=None, help="comma-separated beam kinds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slantbeam",
        description="Design slanted/stepped/rainbow/quadratic analog beams and "
                    "evaluate their minimum-capacity robustness to user mobility.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_design = subs.add_parser("design", help="emit beam design JSON files")
    _add_common(p_design)
    p_design.set_defaults(func=cmd_design)

    p_pattern = subs.add_parser("pattern", help="emit gain heatmap CSV files")
    _add_common(p_pattern)
    p_pattern.set_defaults(func=cmd_pattern)

    for name, func, help_text in (
        ("sweep", cmd_sweep, "run a parameter sweep, emit statistics CSV"),
        ("cdf", cmd_cdf, "run trials, emit capacity CDF and detail CSVs"),
    ):
        p = subs.add_parser(name, help=help_text)
        _add_common(p)
        p.add_argument("--axis", choices=SWEEP_AXES, default=None)
        p.add_argument("--values", default=None, help="comma-separated axis values")
        p.add_argument("--workers", type=int, default=None)
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("sweep", "cdf") and args.seed is None:
        print("error: --seed is required for sweep and cdf runs", file=sys.stderr)
        return 2
    try:
        os.makedirs(args.out, exist_ok=True)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
