"""Seeded Monte Carlo harness: trials, parameter sweeps, and capacity CDFs.

Every trial derives its own random stream from (master_seed, trial_id), so
results never depend on execution order or on how trials are split across
worker processes. Within a trial all beam designs see the identical scenario,
sub-band assignment, and evaluation points; comparisons between beams are
therefore paired.

Two evaluation modes exist. In ``offset`` mode the designed beams are probed
over a deterministic grid of joint pointing offsets around the estimated
directions (the grid plays the role of the AoD error, so the true directions
coincide with the estimates). In ``trajectory`` mode the sampled kinematics
are rolled forward and capacity is measured at each scheduling step.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayConfig
from .designs import (
    BEAM_KINDS,
    DigitalGeniePolicy,
    FixedBeamPolicy,
    SteppedGeniePolicy,
    design_qpd,
    design_rainbow,
    design_slanted,
    design_slanted_at,
    design_stepped,
)
from .jpta import SolverOptions
from .link import LinkBudget, min_capacity, offset_grid
from .mobility import (
    AnchorSpec,
    FrameTiming,
    ScenarioConfig,
    coverage_halfwidth,
    sample_scenario,
    true_aod,
)

SWEEP_AXES = ("offset_range", "num_antennas", "num_users", "mean_velocity")

EVAL_MODES = ("offset", "trajectory")


@dataclass(frozen=True)
class EvalPlan:
    """How a trial's beams are probed: offset grid or rolled trajectory."""

    mode: str = "offset"
    max_offset: float = np.deg2rad(20.0)
    offset_count: int = 25

    def __post_init__(self):
        if self.mode not in EVAL_MODES:
            raise ValueError(f"mode must be one of {EVAL_MODES}, got {self.mode!r}")
        if self.max_offset < 0:
            raise ValueError("max_offset must be non-negative")
        if self.offset_count < 1:
            raise ValueError("offset_count must be >= 1")


@dataclass(frozen=True)
class TrialConfig:
    """Everything a trial needs besides its random stream."""

    array: ArrayConfig
    scenario: ScenarioConfig = ScenarioConfig()
    timing: FrameTiming = FrameTiming(0.16, 100)
    budget: LinkBudget = LinkBudget()
    plan: EvalPlan = EvalPlan()
    beams: tuple = BEAM_KINDS
    coverage_p: float = 0.97
    range_override: float = None
    qpd_peak: float = np.pi
    solver: SolverOptions = SolverOptions()
    channel_gains: tuple = None

    def __post_init__(self):
        if not self.beams:
            raise ValueError("at least one beam kind is required")
        if self.channel_gains is not None:
            h2 = tuple(float(h) for h in self.channel_gains)
            if len(h2) not in (1, self.scenario.num_users) or min(h2) <= 0:
                raise ValueError("channel_gains must be positive, one per user or one shared")
            object.__setattr__(self, "channel_gains", h2)
        unknown = [b for b in self.beams if b not in BEAM_KINDS]
        if unknown:
            raise ValueError(f"unknown beam kinds {unknown}; valid: {BEAM_KINDS}")
        if not 0.0 < self.coverage_p < 1.0:
            raise ValueError("coverage_p must lie in (0, 1)")
        if self.array.num_subcarriers % self.scenario.num_users != 0:
            raise ValueError(
                f"num_subcarriers {self.array.num_subcarriers} not divisible by "
                f"num_users {self.scenario.num_users}"
            )
        if self.range_override is not None and self.range_override < 0:
            raise ValueError("range_override must be non-negative")
        if self.qpd_peak < 0:
            raise ValueError("qpd_peak must be non-negative")


@dataclass(frozen=True)
class TrialResult:
    """One trial's scenario, per-beam designs, and capacity records."""

    trial_id: int
    assignment: np.ndarray
    scenario: tuple
    true_aods: np.ndarray
    records: dict
    designs: dict = field(default_factory=dict, repr=False)

    def min_capacity(self, kind: str) -> float:
        return self.records[kind].min_capacity


def _trial_rng(master_seed: int, trial_id: int) -> np.random.Generator:
    return np.random.default_rng([int(master_seed), int(trial_id)])


def _evaluation_points(config: TrialConfig, kins, estimates) -> np.ndarray:
    if config.plan.mode == "offset":
        base = np.array([est.theta0 for est in estimates])
        grid = offset_grid(config.plan.max_offset, config.plan.offset_count)
        return base[None, :] + grid[:, None]
    steps = np.arange(1, config.timing.num_steps + 1)
    cols = [true_aod(kin, steps, config.timing) for kin in kins]
    return np.stack(cols, axis=1)


def _build_policies(config: TrialConfig, estimates, assignment):
    """Instantiate the requested beam policies for one trial's scenario."""
    arr = config.array
    theta_hat = np.array([est.theta0 for est in estimates])
    policies = {}
    designs = {}
    for kind in config.beams:
        if kind == "slanted":
            if config.plan.mode == "offset":
                if config.range_override is not None:
                    r = config.range_override
                else:
                    ell = coverage_halfwidth(config.coverage_p)
                    r = 2.0 * ell * np.sqrt(config.scenario.var_theta)
                anchor = AnchorSpec(centers=theta_hat, aod_range=r, assignment=assignment)
                design = design_slanted_at(anchor, arr, config.solver)
            else:
                design = design_slanted(
                    estimates,
                    config.coverage_p,
                    arr,
                    config.timing,
                    config.solver,
                    assignment=assignment,
                    range_override=config.range_override,
                )
        elif kind == "stepped":
            design = design_stepped(theta_hat, arr, config.solver, assignment=assignment)
        elif kind == "rainbow":
            design = design_rainbow(arr)
        elif kind == "qpd":
            design = design_qpd(theta_hat[0], config.qpd_peak, arr)
        elif kind == "stepped_genie":
            policies[kind] = SteppedGeniePolicy(arr, config.solver, assignment=assignment)
            continue
        else:
            policies[kind] = DigitalGeniePolicy(arr, assignment=assignment)
            continue
        designs[kind] = design
        policies[kind] = FixedBeamPolicy(design, arr)
    return policies, designs


def run_trial(config: TrialConfig, master_seed: int, trial_id: int) -> TrialResult:
    """Run one seeded trial: sample, design, evaluate every requested beam."""
    rng = _trial_rng(master_seed, trial_id)
    try:
        scenario = sample_scenario(rng, config.scenario)
    except RuntimeError as exc:
        raise RuntimeError(f"trial {trial_id}: {exc}") from exc
    assignment = rng.permutation(config.scenario.num_users)
    kins = [kin for kin, _ in scenario]
    estimates = [est for _, est in scenario]

    true_aods = _evaluation_points(config, kins, estimates)
    policies, designs = _build_policies(config, estimates, assignment)
    records = {
        kind: min_capacity(policies[kind], true_aods, config.array, config.budget,
                           assignment=assignment, channel_gains=config.channel_gains)
        for kind in config.beams
    }
    return TrialResult(
        trial_id=trial_id,
        assignment=assignment,
        scenario=tuple(scenario),
        true_aods=true_aods,
        records=records,
        designs=designs,
    )


@dataclass(frozen=True)
class SweepConfig:
    """A one-axis parameter sweep: values, trial count, seed, beam set."""

    axis: str
    values: tuple
    trials: int = 20
    master_seed: int = 0
    range_override: float = None
    beams: tuple = BEAM_KINDS

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("values must be non-empty")
        if list(values) != sorted(values):
            raise ValueError("values must be sorted ascending")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "values", values)


def apply_axis(base: TrialConfig, axis: str, value: float) -> TrialConfig:
    """Specialize a trial config to one point of a sweep axis.

    Offset-range, array-size and user-count sweeps probe offset grids; the
    velocity sweep rolls trajectories. The mean-velocity axis pins every
    user's initial angular speed to the axis value exactly (random sign).
    """
    if axis == "offset_range":
        plan = dataclasses.replace(base.plan, mode="offset", max_offset=float(value))
        return dataclasses.replace(base, plan=plan)
    if axis == "num_antennas":
        arr = dataclasses.replace(base.array, num_antennas=int(value))
        plan = dataclasses.replace(base.plan, mode="offset")
        return dataclasses.replace(base, array=arr, plan=plan)
    if axis == "num_users":
        scen = dataclasses.replace(base.scenario, num_users=int(value))
        plan = dataclasses.replace(base.plan, mode="offset")
        return dataclasses.replace(base, scenario=scen, plan=plan)
    if axis == "mean_velocity":
        v = float(value)
        scen = dataclasses.replace(base.scenario, velocity_range=(v, v))
        plan = dataclasses.replace(base.plan, mode="trajectory")
        return dataclasses.replace(base, scenario=scen, plan=plan)
    raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")


@dataclass(frozen=True)
class SweepResult:
    """Per-trial minimum capacities for every (axis value, beam) pair.

    ``minima[beam]`` has shape (num values, num trials); aggregation methods
    fold it into the exported statistics.
    """

    axis: str
    values: tuple
    beams: tuple
    trials: int
    master_seed: int
    minima: dict

    def min_over_trials(self, beam: str) -> np.ndarray:
        return self.minima[beam].min(axis=1)

    def mean_of_minima(self, beam: str) -> np.ndarray:
        return self.minima[beam].mean(axis=1)


def _cell_job(args):
    return run_trial(*args)


def run_cells(sweep: SweepConfig, base: TrialConfig, workers: int = None) -> list:
    """Run every (axis value, trial) cell of a sweep, keeping full results.

    Returns a list indexed by axis value, each entry the list of TrialResult
    in trial-id order. ``workers`` > 1 distributes cells over processes; the
    fold is indexed by (value, trial id), so the outcome is identical for any
    worker count.
    """
    base = dataclasses.replace(base, beams=tuple(sweep.beams))
    if sweep.range_override is not None:
        base = dataclasses.replace(base, range_override=sweep.range_override)
    configs = [apply_axis(base, sweep.axis, v) for v in sweep.values]
    jobs = [
        (configs[vi], sweep.master_seed, t)
        for vi in range(len(sweep.values))
        for t in range(sweep.trials)
    ]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_cell_job, jobs, chunksize=1))
    else:
        flat = [_cell_job(job) for job in jobs]
    t = sweep.trials
    return [flat[vi * t : (vi + 1) * t] for vi in range(len(sweep.values))]


def sweep_from_results(sweep: SweepConfig, cells: list) -> SweepResult:
    """Fold per-trial results into the per-beam minima table."""
    minima = {}
    for kind in sweep.beams:
        block = np.array([[res.min_capacity(kind) for res in row] for row in cells])
        block.setflags(write=False)
        minima[kind] = block
    return SweepResult(
        axis=sweep.axis,
        values=sweep.values,
        beams=tuple(sweep.beams),
        trials=sweep.trials,
        master_seed=sweep.master_seed,
        minima=minima,
    )


def run_sweep(sweep: SweepConfig, base: TrialConfig, workers: int = None) -> SweepResult:
    """Run a sweep and aggregate the per-trial minimum capacities."""
    return sweep_from_results(sweep, run_cells(sweep, base, workers))


@dataclass(frozen=True)
class CdfSeries:
    """Empirical CDF of per-trial minimum capacities for one beam and axis value."""

    beam: str
    axis_value: float
    values: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        probs = np.asarray(self.probabilities, dtype=float)
        if values.shape != probs.shape or values.ndim != 1 or values.size == 0:
            raise ValueError("values and probabilities must be matching 1-D arrays")
        if np.any(np.diff(values) < 0) or np.any(np.diff(probs) < 0):
            raise ValueError("CDF series must be sorted")
        if not (0 < probs[0] <= 1 and probs[-1] == 1.0):
            raise ValueError("probabilities must end at 1")
        values = values.copy()
        probs = probs.copy()
        values.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probabilities", probs)


def capacity_cdf(result: SweepResult, beams=None, values=None) -> list:
    """Empirical CDFs of the per-trial minima, one series per (beam, value).

    The smallest sample of each series equals the sweep's min-over-trials
    statistic at that axis value.
    """
    beams = tuple(beams) if beams is not None else result.beams
    values = tuple(float(v) for v in values) if values is not None else result.values
    series = []
    for beam in beams:
        if beam not in result.minima:
            raise ValueError(f"beam {beam!r} not present in sweep result")
        for v in values:
            try:
                vi = result.values.index(v)
            except ValueError:
                raise ValueError(f"axis value {v} not present in sweep result") from None
            samples = np.sort(result.minima[beam][vi])
            probs = np.arange(1, samples.size + 1) / samples.size
            series.append(CdfSeries(beam, v, samples, probs))
    return series
