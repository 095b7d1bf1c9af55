"""Link budget and capacity evaluation for sub-band scheduled users.

The downlink splits the K subcarriers into U contiguous sub-bands of equal
size. A user scheduled on sub-band b accumulates Shannon capacity over that
band only, each subcarrier weighted by its spacing W/K. The per-subcarrier
SNR is the transmit SNR scaled by the beamforming gain toward the user's
true direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayConfig, db_to_linear, gain_profile


@dataclass(frozen=True)
class LinkBudget:
    """Transmit SNR in dB plus a flat squared channel magnitude."""

    snr_db: float = -10.0
    channel_gain: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")
        if not (self.channel_gain > 0):
            raise ValueError(f"channel_gain must be positive, got {self.channel_gain}")

    @property
    def snr_linear(self) -> float:
        return db_to_linear(self.snr_db)


class PowerAllocation:
    """Per-subcarrier power scale, normalized so uniform means all ones."""

    def __init__(self, scale):
        scale = np.asarray(scale, dtype=float)
        if scale.ndim != 1 or scale.size == 0:
            raise ValueError("scale must be a non-empty 1-D array")
        if not np.all(np.isfinite(scale)) or np.any(scale <= 0):
            raise ValueError("scale entries must be finite and positive")
        scale = scale.copy()
        scale.setflags(write=False)
        self.scale = scale

    @classmethod
    def uniform(cls, num_subcarriers: int) -> "PowerAllocation":
        return cls(np.ones(int(num_subcarriers)))

    def __len__(self):
        return self.scale.size


def subband_indices(band: int, num_users: int, num_subcarriers: int) -> np.ndarray:
    """0-based subcarrier indices of sub-band ``band`` (also 0-based)."""

    if num_users < 1:
        raise ValueError("num_users must be at least 1")
    if num_subcarriers % num_users != 0:
        raise ValueError(
            f"num_subcarriers={num_subcarriers} not divisible by num_users={num_users}"
        )
    if not (0 <= band < num_users):
        raise ValueError(f"band {band} out of range for {num_users} sub-bands")
    per = num_subcarriers // num_users
    return np.arange(band * per, (band + 1) * per)


def subcarrier_snr(gains, budget: LinkBudget, scale=None) -> np.ndarray:
    """Post-beamforming SNR per subcarrier."""

    gains = np.asarray(gains, dtype=float)
    if np.any(gains < 0):
        raise ValueError("gains must be non-negative")
    zeta = budget.snr_linear * budget.channel_gain * gains
    if scale is not None:
        zeta = zeta * np.asarray(scale, dtype=float)
    return zeta


def user_capacity(gains, cfg: ArrayConfig, budget: LinkBudget, scale=None) -> float:
    """Capacity in bit/s accumulated over the given own-band gains."""

    zeta = subcarrier_snr(gains, budget, scale)
    return float(cfg.subcarrier_spacing * np.sum(np.log2(1.0 + zeta)))


def offset_grid(max_offset: float, count: int) -> np.ndarray:
    """Symmetric grid of pointing offsets; a single point sits at zero."""

    if max_offset < 0:
        raise ValueError("max_offset must be non-negative")
    if count < 1:
        raise ValueError("count must be at least 1")
    if count == 1:
        return np.zeros(1)
    return np.linspace(-max_offset, max_offset, count)


@dataclass(frozen=True)
class CapacityRecord:
    """Per-user capacities over evaluation points, shape (P, U)."""

    capacities: np.ndarray
    kind: str = ""

    def __post_init__(self):
        caps = np.asarray(self.capacities, dtype=float)
        if caps.ndim != 2:
            raise ValueError("capacities must be 2-D (eval points, users)")
        caps = caps.copy()
        caps.setflags(write=False)
        object.__setattr__(self, "capacities", caps)

    @property
    def min_capacity(self) -> float:
        return float(self.capacities.min())

    @property
    def num_eval_points(self) -> int:
        return self.capacities.shape[0]

    @property
    def num_users(self) -> int:
        return self.capacities.shape[1]


def _resolve_assignment(policy, num_users, assignment):
    if assignment is not None:
        arr = np.asarray(assignment, dtype=int)
    else:
        arr = getattr(policy, "assignment", None)
        if arr is None:
            design = getattr(policy, "design", None)
            anchor = getattr(design, "anchor", None)
            if anchor is not None and anchor.assignment is not None:
                arr = anchor.assignment
        if arr is None:
            arr = np.arange(num_users)
        arr = np.asarray(arr, dtype=int)
    if sorted(arr.tolist()) != list(range(num_users)):
        raise ValueError(f"assignment {arr} is not a permutation of 0..{num_users - 1}")
    return arr


def min_capacity(
    policy,
    true_aods,
    cfg: ArrayConfig,
    budget: LinkBudget,
    assignment=None,
    allocation: PowerAllocation | None = None,
    channel_gains=None,
) -> CapacityRecord:
    """Evaluate a beam policy against true directions.

    ``true_aods`` has shape (P, U): P evaluation points, U users. The policy
    is asked for its subcarrier weight rows at each evaluation point (fixed
    designs return the same rows every time, genie policies re-aim). Each
    user's capacity is accumulated over the sub-band its assignment maps it
    to, and the record keeps the full (P, U) table. ``channel_gains`` gives
    per-user squared channel magnitudes on top of the budget's common one
    (length U, or length 1 to broadcast).
    """

    true_aods = np.atleast_2d(np.asarray(true_aods, dtype=float))
    num_points, num_users = true_aods.shape
    assign = _resolve_assignment(policy, num_users, assignment)
    scale = allocation.scale if allocation is not None else None
    if scale is not None and len(scale) != cfg.num_subcarriers:
        raise ValueError("allocation length does not match subcarrier count")
    if channel_gains is None:
        h2 = np.ones(num_users)
    else:
        h2 = np.asarray(channel_gains, dtype=float)
        if h2.size == 1:
            h2 = np.full(num_users, h2.item())
        if h2.shape != (num_users,) or np.any(h2 <= 0):
            raise ValueError("channel_gains must be positive, one per user")
    budgets = [
        LinkBudget(budget.snr_db, budget.channel_gain * h2[u]) for u in range(num_users)
    ]

    freqs = cfg.subcarrier_centers()
    caps = np.empty((num_points, num_users))
    for p in range(num_points):
        rows = policy.subcarrier_weights(true_aods[p])
        for u in range(num_users):
            idx = subband_indices(int(assign[u]), num_users, cfg.num_subcarriers)
            gains = gain_profile(true_aods[p, u], freqs[idx], rows[idx], cfg)
            band_scale = scale[idx] if scale is not None else None
            caps[p, u] = user_capacity(gains, cfg, budgets[u], band_scale)
    return CapacityRecord(caps, kind=getattr(policy, "kind", ""))
