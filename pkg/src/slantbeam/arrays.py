"""Uniform linear array response, true-time-delay weights, and gain patterns.

Conventions used throughout the package:

* angles are radians at the API boundary of this module (degrees only in
  CSV/CLI land),
* element spacing is expressed in carrier wavelengths,
* the steering phase grows proportionally with the absolute subcarrier
  frequency, so wideband squint is part of the model rather than an
  afterthought.
"""

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 2.998e8
"""Propagation speed used for wavelength conversions, m/s."""

TWO_PI = 2.0 * np.pi


def wrap_phase(phi):
    """Wrap phase (scalar or array) into [-pi, pi)."""
    return np.mod(np.asarray(phi, dtype=float) + np.pi, TWO_PI) - np.pi


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class ArrayConfig:
    """Geometry and OFDM numerology of the transmit array.

    Parameters
    ----------
    num_antennas : int
        Number of elements in the uniform linear array.
    spacing : float
        Element spacing in carrier wavelengths (0.5 = half wavelength).
    carrier_freq : float
        Carrier frequency f_c in Hz.
    bandwidth : float
        Total signal bandwidth W in Hz.
    num_subcarriers : int
        Number of OFDM subcarriers K across the bandwidth.
    speed_of_light : float
        Propagation speed in m/s, kept for unit conversions.
    """

    num_antennas: int
    spacing: float
    carrier_freq: float
    bandwidth: float
    num_subcarriers: int
    speed_of_light: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if self.num_antennas < 1:
            raise ValueError("num_antennas must be >= 1")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        if self.num_subcarriers < 1:
            raise ValueError("num_subcarriers must be >= 1")
        if self.carrier_freq <= self.bandwidth / 2:
            raise ValueError("carrier_freq must exceed half the bandwidth")

    @property
    def subcarrier_spacing(self) -> float:
        """Subcarrier width W/K in Hz."""
        return self.bandwidth / self.num_subcarriers

    def band_edges(self) -> tuple[float, float]:
        half = self.bandwidth / 2.0
        return self.carrier_freq - half, self.carrier_freq + half

    def subcarrier_centers(self) -> np.ndarray:
        """Center frequencies of all K subcarriers, Hz, ascending."""
        k = np.arange(self.num_subcarriers)
        lo, _ = self.band_edges()
        return lo + (k + 0.5) * self.subcarrier_spacing

    def default_tau_max(self) -> float:
        """Default delay budget: num_antennas / bandwidth, seconds."""
        return self.num_antennas / self.bandwidth


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not np.isfinite(theta) or abs(theta) > np.pi / 2:
        raise ValueError(f"angle of departure {theta!r} outside [-pi/2, pi/2]")
    return theta


def _check_freq(f: float, cfg: ArrayConfig) -> float:
    f = float(f)
    lo, hi = cfg.band_edges()
    # tiny slack so band edges computed in floating point stay usable
    tol = 1e-6 * cfg.subcarrier_spacing
    if not (lo - tol <= f <= hi + tol):
        raise ValueError(f"frequency {f!r} Hz outside signal band [{lo}, {hi}]")
    return f


def array_response(theta: float, f: float, cfg: ArrayConfig) -> np.ndarray:
    """Frequency-dependent steering vector of the ULA.

    Element n (0-based) has phase 2*pi * n * spacing * sin(theta) * f/f_c,
    so the apparent beam direction drifts with frequency (beam squint).

    Parameters
    ----------
    theta : float
        Angle of departure, radians, |theta| <= pi/2.
    f : float
        Subcarrier frequency in Hz; must lie inside the signal band.
    cfg : ArrayConfig

    Returns
    -------
    ndarray, shape (num_antennas,), complex
        Unit-modulus entries; squared norm equals num_antennas.
    """
    theta = _check_angle(theta)
    f = _check_freq(f, cfg)
    n = np.arange(cfg.num_antennas)
    phase = TWO_PI * n * cfg.spacing * np.sin(theta) * (f / cfg.carrier_freq)
    return np.exp(1j * phase)


def response_matrix(theta: float, freqs: np.ndarray, cfg: ArrayConfig) -> np.ndarray:
    """Steering vectors for one angle across many frequencies, shape (F, N)."""
    theta = _check_angle(theta)
    freqs = np.asarray(freqs, dtype=float)
    n = np.arange(cfg.num_antennas)
    phase = TWO_PI * cfg.spacing * np.sin(theta) / cfg.carrier_freq
    return np.exp(1j * phase * np.outer(freqs, n))


@dataclass(frozen=True)
class AnalogWeights:
    """Per-element phase shifts (radians) and true-time delays (seconds).

    The realized antenna weight vector at frequency f has entries
    exp(j*(phase_n - 2*pi*delay_n*f)) / sqrt(num_antennas), i.e. one common
    phase-shifter plus one delay line per element, normalized to unit power.
    """

    phases: np.ndarray
    delays: np.ndarray

    def __post_init__(self):
        phases = np.atleast_1d(np.asarray(self.phases, dtype=float))
        delays = np.atleast_1d(np.asarray(self.delays, dtype=float))
        if phases.shape != delays.shape or phases.ndim != 1:
            raise ValueError("phases and delays must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(phases)) and np.all(np.isfinite(delays))):
            raise ValueError("phases and delays must be finite")
        if np.any(np.abs(phases) > np.pi + 1e-9):
            raise ValueError("phases must lie in [-pi, pi]")
        if np.any(delays < 0):
            raise ValueError("delays must be non-negative")
        phases.setflags(write=False)
        delays.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "delays", delays)

    @property
    def num_antennas(self) -> int:
        return self.phases.shape[0]


def awv(weights: AnalogWeights, f: float, cfg: ArrayConfig) -> np.ndarray:
    """Antenna weight vector realized by the phase/delay bank at frequency f.

    Returns a complex vector of squared norm 1 (each entry has modulus
    1/sqrt(num_antennas)).
    """
    f = _check_freq(f, cfg)
    if weights.num_antennas != cfg.num_antennas:
        raise ValueError("weights sized for a different array")
    phase = weights.phases - TWO_PI * weights.delays * f
    return np.exp(1j * phase) / np.sqrt(cfg.num_antennas)


def awv_matrix(weights: AnalogWeights, freqs: np.ndarray, cfg: ArrayConfig) -> np.ndarray:
    """Realized weight vectors across frequencies, shape (F, N), rows unit-norm."""
    if weights.num_antennas != cfg.num_antennas:
        raise ValueError("weights sized for a different array")
    freqs = np.asarray(freqs, dtype=float)
    phase = weights.phases[None, :] - TWO_PI * np.outer(freqs, weights.delays)
    return np.exp(1j * phase) / np.sqrt(cfg.num_antennas)


def gain(theta: float, f: float, v: np.ndarray, cfg: ArrayConfig) -> float:
    """Beamforming gain |a(theta, f)^H v|^2.

    For a unit-norm v the value lies in [0, num_antennas]; the maximum is
    attained by the matched vector a/sqrt(num_antennas).
    """
    v = np.asarray(v)
    if v.shape != (cfg.num_antennas,):
        raise ValueError("weight vector length does not match the array")
    a = array_response(theta, f, cfg)
    return float(np.abs(np.vdot(a, v)) ** 2)


def gain_profile(theta: float, freqs: np.ndarray, v_rows: np.ndarray, cfg: ArrayConfig) -> np.ndarray:
    """Per-frequency gains |a(theta, f_k)^H v_k|^2 for row-matched weights.

    ``v_rows`` holds one weight vector per frequency (shape (F, N)); this is
    the workhorse used by pattern and capacity evaluation.
    """
    a = response_matrix(theta, freqs, cfg)
    return np.abs(np.sum(np.conj(a) * v_rows, axis=1)) ** 2


def pattern_heatmap(weights, theta_grid: np.ndarray, cfg: ArrayConfig) -> np.ndarray:
    """Gain map over (angle, subcarrier), shape (len(theta_grid), K).

    ``weights`` is either :class:`AnalogWeights` or an explicit (K, N) complex
    matrix of per-subcarrier weight vectors (used for the fully digital
    reference design).
    """
    freqs = cfg.subcarrier_centers()
    if isinstance(weights, AnalogWeights):
        v_rows = awv_matrix(weights, freqs, cfg)
    else:
        v_rows = np.asarray(weights)
        if v_rows.shape != (cfg.num_subcarriers, cfg.num_antennas):
            raise ValueError("per-subcarrier weight matrix must be (K, N)")
    theta_grid = np.asarray(theta_grid, dtype=float)
    out = np.empty((theta_grid.size, cfg.num_subcarriers))
    for i, theta in enumerate(theta_grid):
        out[i] = gain_profile(theta, freqs, v_rows, cfg)
    return out
