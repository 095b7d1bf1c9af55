"""Beam designs: slanted, stepped, rainbow, quadratic-phase, and genies.

Analog designs produce one :class:`BeamDesign` (a phase/delay bank plus
provenance); the genie baselines are evaluation-time policies that re-point
using the true user directions at every evaluated instant.  Every design and
policy exposes its realized per-subcarrier weight matrix through
``subcarrier_weights`` so capacity evaluation treats them uniformly.
"""

from dataclasses import dataclass, field

import numpy as np

from .arrays import TWO_PI, AnalogWeights, ArrayConfig, awv_matrix, response_matrix, wrap_phase
from .jpta import SolverOptions, TargetProfile, jpta_solve
from .mobility import AnchorSpec, FrameTiming, anchor_selection

BEAM_KINDS = ("slanted", "stepped", "rainbow", "qpd", "stepped_genie", "digital_genie")

ANALOG_KINDS = ("slanted", "stepped", "rainbow", "qpd")


@dataclass(frozen=True)
class BeamDesign:
    """A realized analog design: kind label, phase/delay bank, and (for the
    solver-based kinds) the anchors and final objective behind it."""

    kind: str
    weights: AnalogWeights
    anchor: AnchorSpec = None
    objective: float = None
    objective_trace: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in BEAM_KINDS:
            raise ValueError(f"unknown beam kind {self.kind!r}")

    def to_json_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "phases_rad": [float(x) for x in self.weights.phases],
            "delays_s": [float(x) for x in self.weights.delays],
        }
        if self.anchor is not None:
            doc["anchor"] = {
                "centers_deg": [float(np.rad2deg(c)) for c in self.anchor.centers],
                "range_deg": float(np.rad2deg(self.anchor.aod_range)),
                "assignment": [int(b) for b in self.anchor.assignment],
            }
        if self.objective is not None:
            doc["solver_objective"] = float(self.objective)
        return doc


def target_directions(anchor: AnchorSpec, cfg: ArrayConfig) -> TargetProfile:
    """Per-subcarrier target directions from per-user anchors.

    Each user's sub-band sweeps linearly from center - r/2 + r*U/K up to
    center + r/2 (inclusive), so adjacent sub-bands tile disjoint angle
    intervals when the centers are r apart and all users share the same
    slope in subcarrier index.  Directions are clipped to the visible
    half-plane.
    """
    u_cnt = anchor.num_users
    k_total = cfg.num_subcarriers
    if k_total % u_cnt != 0:
        raise ValueError(
            f"num_subcarriers {k_total} is not divisible by num_users {u_cnt}"
        )
    per = k_total // u_cnt
    r = anchor.aod_range
    slope = r * u_cnt / k_total
    g = np.empty(k_total)
    for u in range(u_cnt):
        band = int(anchor.assignment[u])
        k_one_based = np.arange(band * per + 1, (band + 1) * per + 1)
        g[band * per : (band + 1) * per] = (
            anchor.centers[u] + r / 2 - r * (band + 1) + slope * k_one_based
        )
    return TargetProfile(np.clip(g, -np.pi / 2, np.pi / 2), cfg)


def _solve_anchor(anchor: AnchorSpec, cfg: ArrayConfig, opts: SolverOptions, kind: str) -> BeamDesign:
    profile = target_directions(anchor, cfg)
    report = jpta_solve(profile, opts)
    return BeamDesign(
        kind=kind,
        weights=report.weights,
        anchor=anchor,
        objective=report.objective,
        objective_trace=report.objective_trace,
    )


def _resolve_assignment(num_users, assignment, rng):
    if assignment is not None:
        return np.asarray(assignment, dtype=int)
    if rng is not None:
        return rng.permutation(num_users)
    return np.arange(num_users)


def design_slanted(
    estimates,
    p: float,
    cfg: ArrayConfig,
    timing: FrameTiming,
    opts: SolverOptions = None,
    assignment=None,
    rng: np.random.Generator = None,
    range_override: float = None,
) -> BeamDesign:
    """Slanted beams: anchor selection over the predicted coverage intervals,
    then joint phase/delay solving of the linear per-sub-band profile.

    The user -> sub-band assignment is drawn uniformly from ``rng`` unless
    given explicitly; ``range_override`` (radians) replaces the selected
    shared range r while keeping the per-user centers.
    """
    base = anchor_selection(estimates, p, timing)
    r = base.aod_range if range_override is None else float(range_override)
    anchor = AnchorSpec(
        centers=base.centers,
        aod_range=r,
        assignment=_resolve_assignment(base.num_users, assignment, rng),
    )
    return _solve_anchor(anchor, cfg, opts or SolverOptions(), "slanted")


def design_slanted_at(anchor: AnchorSpec, cfg: ArrayConfig, opts: SolverOptions = None) -> BeamDesign:
    """Slanted design from an explicit anchor, bypassing coverage prediction."""
    return _solve_anchor(anchor, cfg, opts or SolverOptions(), "slanted")


def design_stepped(
    aod_estimates,
    cfg: ArrayConfig,
    opts: SolverOptions = None,
    assignment=None,
    rng: np.random.Generator = None,
) -> BeamDesign:
    """Stepped beams: constant direction per sub-band at the estimated AoDs
    (a slanted design with the range forced to zero)."""
    centers = np.atleast_1d(np.asarray(aod_estimates, dtype=float))
    anchor = AnchorSpec(
        centers=centers,
        aod_range=0.0,
        assignment=_resolve_assignment(centers.size, assignment, rng),
    )
    return _solve_anchor(anchor, cfg, opts or SolverOptions(), "stepped")


def design_rainbow(cfg: ArrayConfig) -> BeamDesign:
    """Rainbow beams: a fixed dispersive delay ramp, scenario independent.

    Element n (1-based) gets delay (N - n) / (2W) -- a 1/(2W) decrement per
    element shifted to keep delays non-negative -- and phase 2*pi*n*f_c/W
    wrapped; the per-subcarrier beam then sweeps the band monotonically
    across angle.
    """
    n_one = np.arange(1, cfg.num_antennas + 1)
    delays = (cfg.num_antennas - n_one) / (2.0 * cfg.bandwidth)
    phases = wrap_phase(TWO_PI * n_one * cfg.carrier_freq / cfg.bandwidth)
    return BeamDesign(kind="rainbow", weights=AnalogWeights(phases, delays))


def qpd_phase_profile(num_antennas: int, peak_phase: float) -> np.ndarray:
    """Quadratic phase offsets 4*peak*((2n - N - 1) / (2(N+1)))^2, n 1-based."""
    n_one = np.arange(1, num_antennas + 1)
    frac = (2.0 * n_one - num_antennas - 1) / (2.0 * (num_antennas + 1))
    return 4.0 * peak_phase * frac**2


def design_qpd(theta_first: float, peak_phase: float, cfg: ArrayConfig) -> BeamDesign:
    """Quadratic-phase design: a delay-free phased array steered at the first
    user's estimated AoD with a quadratic broadening term added.

    ``peak_phase`` controls the broadening (0 recovers a conventionally
    steered phased array).  Only the first user is served.
    """
    n = np.arange(cfg.num_antennas)
    steer = TWO_PI * cfg.spacing * n * np.sin(theta_first)
    phases = wrap_phase(steer + qpd_phase_profile(cfg.num_antennas, peak_phase))
    return BeamDesign(kind="qpd", weights=AnalogWeights(phases, np.zeros(cfg.num_antennas)))


def stepped_targets(aods, assignment, cfg: ArrayConfig) -> TargetProfile:
    """Constant per-sub-band profile at the given directions."""
    centers = np.atleast_1d(np.asarray(aods, dtype=float))
    anchor = AnchorSpec(centers=centers, aod_range=0.0, assignment=assignment)
    return target_directions(anchor, cfg)


def genie_stepped(aods_per_step, cfg: ArrayConfig, opts: SolverOptions = None, assignment=None):
    """Re-pointed stepped designs from the true AoDs at each step.

    ``aods_per_step`` has one row of per-user true directions per evaluated
    instant; one independent (cold-started) solve is run per row.
    """
    aods_per_step = np.atleast_2d(np.asarray(aods_per_step, dtype=float))
    opts = opts or SolverOptions()
    designs = []
    for row in aods_per_step:
        anchor = AnchorSpec(
            centers=row,
            aod_range=0.0,
            assignment=_resolve_assignment(row.size, assignment, None),
        )
        designs.append(_solve_anchor(anchor, cfg, opts, "stepped_genie"))
    return designs


def genie_digital(theta: float, k: int, cfg: ArrayConfig) -> np.ndarray:
    """Fully digital matched vector a(theta, f_k)/sqrt(N) for subcarrier k (0-based)."""
    freqs = cfg.subcarrier_centers()
    if not 0 <= k < cfg.num_subcarriers:
        raise ValueError("subcarrier index out of range")
    a = response_matrix(theta, freqs[k : k + 1], cfg)[0]
    return a / np.sqrt(cfg.num_antennas)


class FixedBeamPolicy:
    """Evaluation policy for a frozen analog design: the same per-subcarrier
    weight rows regardless of where the users actually are."""

    def __init__(self, design: BeamDesign, cfg: ArrayConfig):
        self.kind = design.kind
        self.design = design
        self._rows = awv_matrix(design.weights, cfg.subcarrier_centers(), cfg)

    def subcarrier_weights(self, angles) -> np.ndarray:
        return self._rows


class SteppedGeniePolicy:
    """Oracle baseline: re-solves a stepped design at the true directions of
    every evaluated instant.  Each solve is cold-started, so results do not
    depend on how evaluation points are split across workers."""

    kind = "stepped_genie"

    def __init__(self, cfg: ArrayConfig, opts: SolverOptions = None, assignment=None):
        self.cfg = cfg
        self.opts = opts or SolverOptions()
        self.assignment = assignment

    def subcarrier_weights(self, angles) -> np.ndarray:
        design = genie_stepped(np.asarray(angles)[None, :], self.cfg, self.opts, self.assignment)[0]
        return awv_matrix(design.weights, self.cfg.subcarrier_centers(), self.cfg)


class DigitalGeniePolicy:
    """Oracle upper bound: per-subcarrier matched filtering to the true
    direction of the sub-band's user at every evaluated instant."""

    kind = "digital_genie"

    def __init__(self, cfg: ArrayConfig, assignment=None):
        self.cfg = cfg
        self.assignment = assignment

    def subcarrier_weights(self, angles) -> np.ndarray:
        angles = np.atleast_1d(np.asarray(angles, dtype=float))
        u_cnt = angles.size
        cfg = self.cfg
        if cfg.num_subcarriers % u_cnt != 0:
            raise ValueError("num_subcarriers not divisible by num_users")
        per = cfg.num_subcarriers // u_cnt
        assignment = _resolve_assignment(u_cnt, self.assignment, None)
        freqs = cfg.subcarrier_centers()
        rows = np.empty((cfg.num_subcarriers, cfg.num_antennas), dtype=complex)
        root = np.sqrt(cfg.num_antennas)
        for u in range(u_cnt):
            band = int(assignment[u])
            sl = slice(band * per, (band + 1) * per)
            rows[sl] = response_matrix(angles[u], freqs[sl], cfg) / root
        return rows
