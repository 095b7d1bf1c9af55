"""Sectioned key-value run configuration with defaults, units, and hashing.

The configuration format is INI-style with six sections (array, link,
mobility, frame, design, sweep). Every key carries its unit as a suffix and
has a default; an empty file therefore parses to the full-scale defaults.
A desk-scale overlay (fewer subcarriers, steps, trials, offsets) can be
applied before file values so quick runs stay quick unless the file or a
``--set`` override says otherwise.
"""

from __future__ import annotations

import configparser
import copy
import hashlib
import io
from dataclasses import dataclass

import numpy as np

from .arrays import ArrayConfig
from .designs import BEAM_KINDS
from .jpta import SolverOptions
from .link import LinkBudget
from .mobility import FrameTiming, ScenarioConfig
from .montecarlo import SWEEP_AXES, EvalPlan, SweepConfig, TrialConfig


class ConfigError(ValueError):
    """Configuration problem, message always names the offending key."""


_SCHEMA = {
    "array": {
        "carrier_freq_ghz": ("float", 60.0),
        "bandwidth_ghz": ("float", 2.0),
        "num_subcarriers": ("int", 1200),
        "num_antennas": ("int", 32),
        "spacing_wavelengths": ("float", 0.5),
    },
    "link": {
        "snr_db": ("float", -10.0),
        "channel_gains": ("float_list", (1.0,)),
    },
    "mobility": {
        "num_users": ("int", 3),
        "aod_min_deg": ("float", -45.0),
        "aod_max_deg": ("float", 45.0),
        "min_spacing_deg": ("float", 10.0),
        "velocity_min_deg_s": ("float", 0.0),
        "velocity_max_deg_s": ("float", 80.0),
        "accel_mean_deg_s2": ("float", 0.0),
        "var_theta_deg2": ("float", 2.0),
        "var_omega_deg2_s2": ("float", 10.0),
        "var_alpha_deg2_s4": ("float", 5.0),
    },
    "frame": {
        "duration_ms": ("float", 160.0),
        "num_steps": ("int", 100),
    },
    "design": {
        "coverage_p": ("float", 0.97),
        "range_override_deg": ("opt_float", None),
        "tau_max_ns": ("opt_float", None),
        "max_iters": ("int", 100),
        "objective_tolerance": ("opt_float", None),
        "delay_search_resolution": ("int", 256),
        "qpd_peak_rad": ("float", float(np.pi)),
    },
    "sweep": {
        "axis": ("str", "offset_range"),
        "values": ("float_list", (0.0, 5.0, 10.0, 15.0, 20.0)),
        "trials": ("int", 100),
        "max_offset_deg": ("float", 10.0),
        "offset_count": ("int", 100),
        "beams": ("str_list", tuple(BEAM_KINDS)),
    },
}

DESK_OVERLAY = {
    ("array", "num_subcarriers"): 240,
    ("frame", "num_steps"): 25,
    ("sweep", "trials"): 20,
    ("sweep", "offset_count"): 25,
}

_ANGLE_AXES = ("offset_range", "mean_velocity")


def _parse_value(kind: str, raw, section: str, key: str):
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if kind == "float":
            return float(text)
        if kind == "int":
            return int(text, 10)
        if kind == "opt_float":
            if text == "" or text.lower() == "none":
                return None
            return float(text)
        if kind == "float_list":
            parts = [p.strip() for p in text.split(",") if p.strip()]
            return tuple(float(p) for p in parts)
        if kind == "str_list":
            return tuple(p.strip() for p in text.split(",") if p.strip())
        return text
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as {kind}") from None


def _format_value(kind: str, value) -> str:
    if value is None:
        return ""
    if kind == "float_list":
        return ",".join(repr(float(v)) for v in value)
    if kind == "str_list":
        return ",".join(value)
    if kind in ("float", "opt_float"):
        return repr(float(value))
    return str(value)


@dataclass
class RunConfig:
    """Validated configuration values, grouped by section."""

    sections: dict

    def get(self, section: str, key: str):
        return self.sections[section][key]

    # materializers into the library's own types

    def array(self) -> ArrayConfig:
        a = self.sections["array"]
        return ArrayConfig(
            num_antennas=a["num_antennas"],
            spacing=a["spacing_wavelengths"],
            carrier_freq=a["carrier_freq_ghz"] * 1e9,
            bandwidth=a["bandwidth_ghz"] * 1e9,
            num_subcarriers=a["num_subcarriers"],
        )

    def budget(self) -> LinkBudget:
        return LinkBudget(snr_db=self.get("link", "snr_db"))

    def scenario(self) -> ScenarioConfig:
        m = self.sections["mobility"]
        unit_var = np.deg2rad(1.0) ** 2
        return ScenarioConfig(
            num_users=m["num_users"],
            aod_range=(np.deg2rad(m["aod_min_deg"]), np.deg2rad(m["aod_max_deg"])),
            min_spacing=np.deg2rad(m["min_spacing_deg"]),
            velocity_range=(
                np.deg2rad(m["velocity_min_deg_s"]),
                np.deg2rad(m["velocity_max_deg_s"]),
            ),
            accel_mean=np.deg2rad(m["accel_mean_deg_s2"]),
            var_theta=m["var_theta_deg2"] * unit_var,
            var_omega=m["var_omega_deg2_s2"] * unit_var,
            var_alpha=m["var_alpha_deg2_s4"] * unit_var,
        )

    def timing(self) -> FrameTiming:
        f = self.sections["frame"]
        return FrameTiming(duration=f["duration_ms"] * 1e-3, num_steps=f["num_steps"])

    def solver(self) -> SolverOptions:
        d = self.sections["design"]
        tau = d["tau_max_ns"]
        return SolverOptions(
            max_iters=d["max_iters"],
            objective_tolerance=d["objective_tolerance"],
            tau_max=tau * 1e-9 if tau is not None else None,
            delay_search_resolution=d["delay_search_resolution"],
        )

    def base_trial(self, beams=None) -> TrialConfig:
        d = self.sections["design"]
        s = self.sections["sweep"]
        override = d["range_override_deg"]
        return TrialConfig(
            array=self.array(),
            scenario=self.scenario(),
            timing=self.timing(),
            budget=self.budget(),
            plan=EvalPlan(
                mode="offset",
                max_offset=np.deg2rad(s["max_offset_deg"]),
                offset_count=s["offset_count"],
            ),
            beams=tuple(beams) if beams is not None else tuple(s["beams"]),
            coverage_p=d["coverage_p"],
            range_override=np.deg2rad(override) if override is not None else None,
            qpd_peak=d["qpd_peak_rad"],
            solver=self.solver(),
            channel_gains=tuple(self.get("link", "channel_gains")),
        )

    def sweep(self, master_seed: int, axis=None, values=None, beams=None) -> SweepConfig:
        s = self.sections["sweep"]
        d = self.sections["design"]
        axis = axis if axis is not None else s["axis"]
        raw = tuple(values) if values is not None else s["values"]
        if axis in _ANGLE_AXES:
            converted = tuple(np.deg2rad(v) for v in raw)
        else:
            converted = raw
        override = d["range_override_deg"]
        return SweepConfig(
            axis=axis,
            values=converted,
            trials=s["trials"],
            master_seed=master_seed,
            range_override=np.deg2rad(override) if override is not None else None,
            beams=tuple(beams) if beams is not None else tuple(s["beams"]),
        )


def _check(cond, section, key, msg):
    if not cond:
        raise ConfigError(f"[{section}] {key}: {msg}")


def _validate(values: dict):
    a = values["array"]
    _check(a["num_antennas"] >= 1, "array", "num_antennas", "must be >= 1")
    _check(a["num_subcarriers"] >= 1, "array", "num_subcarriers", "must be >= 1")
    _check(a["spacing_wavelengths"] > 0, "array", "spacing_wavelengths", "must be positive")
    _check(a["bandwidth_ghz"] > 0, "array", "bandwidth_ghz", "must be positive")
    _check(
        a["carrier_freq_ghz"] > a["bandwidth_ghz"] / 2,
        "array", "carrier_freq_ghz", "band must not cross zero frequency",
    )
    li = values["link"]
    _check(len(li["channel_gains"]) >= 1, "link", "channel_gains", "must be non-empty")
    _check(min(li["channel_gains"]) > 0, "link", "channel_gains", "must be positive")
    m = values["mobility"]
    _check(m["num_users"] >= 1, "mobility", "num_users", "must be >= 1")
    _check(m["aod_min_deg"] < m["aod_max_deg"], "mobility", "aod_min_deg", "min must be below max")
    _check(m["min_spacing_deg"] >= 0, "mobility", "min_spacing_deg", "must be non-negative")
    _check(
        0 <= m["velocity_min_deg_s"] <= m["velocity_max_deg_s"],
        "mobility", "velocity_min_deg_s", "need 0 <= min <= max",
    )
    for key in ("var_theta_deg2", "var_omega_deg2_s2", "var_alpha_deg2_s4"):
        _check(m[key] >= 0, "mobility", key, "variance must be non-negative")
    f = values["frame"]
    _check(f["duration_ms"] > 0, "frame", "duration_ms", "must be positive")
    _check(f["num_steps"] >= 1, "frame", "num_steps", "must be >= 1")
    d = values["design"]
    _check(0 < d["coverage_p"] < 1, "design", "coverage_p", "must lie in (0, 1)")
    if d["range_override_deg"] is not None:
        _check(d["range_override_deg"] >= 0, "design", "range_override_deg", "must be non-negative")
    if d["tau_max_ns"] is not None:
        _check(d["tau_max_ns"] > 0, "design", "tau_max_ns", "must be positive")
    if d["objective_tolerance"] is not None:
        _check(d["objective_tolerance"] > 0, "design", "objective_tolerance", "must be positive")
    _check(d["max_iters"] >= 1, "design", "max_iters", "must be >= 1")
    _check(d["delay_search_resolution"] >= 2, "design", "delay_search_resolution", "must be >= 2")
    _check(d["qpd_peak_rad"] >= 0, "design", "qpd_peak_rad", "must be non-negative")
    s = values["sweep"]
    _check(s["axis"] in SWEEP_AXES, "sweep", "axis", f"must be one of {SWEEP_AXES}")
    _check(len(s["values"]) >= 1, "sweep", "values", "must be non-empty")
    _check(list(s["values"]) == sorted(s["values"]), "sweep", "values", "must be sorted ascending")
    _check(s["trials"] >= 1, "sweep", "trials", "must be >= 1")
    _check(s["max_offset_deg"] >= 0, "sweep", "max_offset_deg", "must be non-negative")
    _check(s["offset_count"] >= 1, "sweep", "offset_count", "must be >= 1")
    _check(len(s["beams"]) >= 1, "sweep", "beams", "must list at least one beam")
    bad = [b for b in s["beams"] if b not in BEAM_KINDS]
    _check(not bad, "sweep", "beams", f"unknown beam kinds {bad}; valid: {BEAM_KINDS}")


def parse_config(path: str = None, overrides=None, desk: bool = False, text: str = None) -> RunConfig:
    """Build a RunConfig from defaults, optional desk overlay, file, and
    ``section.key=value`` override strings (applied in that order)."""

    values = {sec: {k: v for k, (_, v) in keys.items()} for sec, keys in _SCHEMA.items()}
    if desk:
        for (sec, key), v in DESK_OVERLAY.items():
            values[sec][key] = v

    if path is not None or text is not None:
        parser = configparser.ConfigParser(
            interpolation=None, inline_comment_prefixes=(";", "#"))
        parser.optionxform = str
        try:
            if text is not None:
                parser.read_string(text)
            else:
                with open(path, "r", encoding="utf-8") as fh:
                    parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        for section in parser.sections():
            if section not in _SCHEMA:
                raise ConfigError(f"[{section}]: unknown section")
            for key, raw in parser.items(section):
                if key not in _SCHEMA[section]:
                    raise ConfigError(f"[{section}] {key}: unknown key")
                kind = _SCHEMA[section][key][0]
                values[section][key] = _parse_value(kind, raw, section, key)

    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected section.key=value")
        dotted, raw = item.split("=", 1)
        if "." not in dotted:
            raise ConfigError(f"override {item!r}: expected section.key=value")
        section, key = dotted.split(".", 1)
        if section not in _SCHEMA or key not in _SCHEMA[section]:
            raise ConfigError(f"[{section}] {key}: unknown key")
        kind = _SCHEMA[section][key][0]
        values[section][key] = _parse_value(kind, raw, section, key)

    _validate(values)
    return RunConfig(copy.deepcopy(values))


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parsing it back yields an equal RunConfig."""
    out = io.StringIO()
    for section, keys in _SCHEMA.items():
        out.write(f"[{section}]\n")
        for key, (kind, _) in keys.items():
            out.write(f"{key} = {_format_value(kind, cfg.sections[section][key])}\n")
        out.write("\n")
    return out.getvalue()


def config_hash(cfg: RunConfig) -> str:
    """First 12 hex digits of the SHA-256 of the canonical serialization."""
    return hashlib.sha256(serialize_config(cfg).encode("utf-8")).hexdigest()[:12]
