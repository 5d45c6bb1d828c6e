"""Rate extraction, power-law fitting, and collapse/revival detection.

The decay-rate estimator works on any damped oscillatory signal (a block
coherence or a single-component population trace): it picks the oscillation
extrema, refines each one with a local parabola, and regresses log|peak|
against time.  At weak coupling the extrema ride exactly on the exponential
envelope, so the regression slope is the block decay rate without any
nonlinear fitting.

Collapse and revival of multi-component traces are located from a rolling
peak-to-peak amplitude; the 0.1/0.05 thresholds are tool conventions for
features that are otherwise defined only by eye.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d
from scipy.signal import find_peaks

from .dynamics import TimeSeries
from .errors import InsufficientDataError

#: Rolling amplitude below this fraction of the reference counts as collapsed.
COLLAPSE_FRACTION = 0.1

#: Rolling-amplitude maxima above this fraction of the reference are revivals.
REVIVAL_FRACTION = 0.05

#: Default power-law fit window, mirroring the populated range of an
#: alpha = 3 coherent state.
DEFAULT_FIT_RANGE = (0, 20)


@dataclass(frozen=True)
class DecayEstimate:
    """Envelope decay rate recovered by peak regression."""

    a_hat: float
    stderr: float
    n_extrema: int


def _refine_extremum(tt: np.ndarray, yy: np.ndarray) -> tuple[float, float]:
    """Vertex of the parabola through three samples around an extremum."""
    a, b, c = np.polyfit(tt, yy, 2)
    if a == 0.0:
        return float(tt[1]), float(yy[1])
    t_star = -b / (2.0 * a)
    if not (tt[0] <= t_star <= tt[2]):
        return float(tt[1]), float(yy[1])
    return float(t_star), float(c - b * b / (4.0 * a))


def extract_decay(times, values, omega: float) -> DecayEstimate:
    """Estimate the envelope decay rate of a damped oscillation.

    Parameters
    ----------
    times, values : array_like
        Sampled signal.  ``times`` must be increasing and span at least five
        oscillation periods of ``omega``.
    omega : float
        Oscillation angular frequency in radians per unit of ``times``.

    Returns
    -------
    DecayEstimate
        Rate in inverse units of ``times`` plus its regression standard
        error.  Fewer than four usable extrema raise
        :class:`InsufficientDataError`.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.shape != y.shape or t.ndim != 1 or t.size < 8:
        raise ValueError("times and values must be matching 1-d vectors of length >= 8")
    if not (omega > 0):
        raise ValueError(f"omega must be positive, got {omega}")
    span = t[-1] - t[0]
    periods = span * omega / (2.0 * math.pi)
    if periods < 5.0:
        raise InsufficientDataError(
            f"signal spans {periods:.2f} oscillation periods; need >= 5"
        )
    magnitude = np.abs(y)
    floor = np.max(magnitude) * 1e-9
    peak_idx, _ = find_peaks(magnitude, height=floor)
    if peak_idx.size < 4:
        raise InsufficientDataError(
            f"found {peak_idx.size} oscillation extrema; need >= 4"
        )
    t_peaks = np.empty(peak_idx.size)
    v_peaks = np.empty(peak_idx.size)
    for j, i in enumerate(peak_idx):
        t_peaks[j], v = _refine_extremum(t[i - 1 : i + 2], y[i - 1 : i + 2])
        v_peaks[j] = abs(v)
    logs = np.log(v_peaks)
    xc = t_peaks - t_peaks.mean()
    sxx = float(np.dot(xc, xc))
    slope = float(np.dot(xc, logs)) / sxx
    resid = logs - (logs.mean() + slope * xc)
    dof = logs.size - 2
    stderr = math.sqrt(float(np.dot(resid, resid)) / dof / sxx) if dof > 0 else math.inf
    return DecayEstimate(a_hat=-slope, stderr=stderr, n_extrema=int(peak_idx.size))


# ---------------------------------------------------------------------------
# Power-law fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of rate = gamma0*(n+1)**nu in log-log space."""

    gamma0_hat: float
    nu_hat: float
    residual_rms: float
    n_range: tuple[int, int]

    def __post_init__(self):
        if not (self.gamma0_hat > 0):
            raise ValueError("gamma0_hat must be positive")
        if self.residual_rms < 0:
            raise ValueError("residual_rms must be >= 0")


def fit_power_law(ns, rates) -> PowerLawFit:
    """Fit log(rate) = log(gamma0) + nu*log(n+1) by centered least squares.

    Exactly reproduces the exponent for rates that are true power laws, and
    is scale-equivariant: scaling all rates by c scales gamma0_hat by c
    and leaves nu_hat unchanged.
    """
    n = np.asarray(ns, dtype=float)
    a = np.asarray(rates, dtype=float)
    if n.shape != a.shape or n.ndim != 1:
        raise ValueError("ns and rates must be matching 1-d vectors")
    if n.size < 3:
        raise ValueError(f"need at least 3 (n, rate) pairs, got {n.size}")
    if np.any(n < 0):
        raise ValueError("block indices must be >= 0")
    if np.any(a <= 0):
        raise ValueError("all rates must be positive for a log-log fit")
    x = np.log(n + 1.0)
    y = np.log(a)
    xc = x - x.mean()
    sxx = float(np.dot(xc, xc))
    if sxx == 0.0:
        raise ValueError("need at least two distinct n values")
    nu = float(np.dot(xc, y)) / sxx
    intercept = float(y.mean()) - nu * float(x.mean())
    resid = y - (intercept + nu * x)
    rms = math.sqrt(float(np.dot(resid, resid)) / resid.size)
    return PowerLawFit(
        gamma0_hat=math.exp(intercept),
        nu_hat=nu,
        residual_rms=rms,
        n_range=(int(np.min(n)), int(np.max(n))),
    )


def powerlaw_fit_to_json(fit: PowerLawFit, table: list | None = None) -> str:
    doc = {
        "gamma0_hat": fit.gamma0_hat,
        "nu_hat": fit.nu_hat,
        "residual_rms": fit.residual_rms,
        "n_range": list(fit.n_range),
    }
    if table is not None:
        doc["table"] = table
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# Collapse / revival detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RevivalReport:
    """Collapse time and revival features of a population trace.

    ``collapse_time`` is None when the rolling amplitude never falls below
    the collapse threshold (e.g. a single-frequency trace).
    """

    collapse_time: float | None
    revival_times: list
    revival_amplitudes: list

    def __post_init__(self):
        rt = list(self.revival_times)
        if any(b <= a for a, b in zip(rt, rt[1:])):
            raise ValueError("revival times must be strictly increasing")
        if any(not (0.0 <= a <= 1.0) for a in self.revival_amplitudes):
            raise ValueError("revival amplitudes must lie in [0, 1]")


def _dominant_period(y: np.ndarray, dt: float) -> float:
    """Period of the strongest non-DC Fourier component of y."""
    spectrum = np.abs(np.fft.rfft(y - y.mean()))
    if spectrum.size < 2:
        raise InsufficientDataError("trace too short to carry an oscillation")
    k = 1 + int(np.argmax(spectrum[1:]))
    freqs = np.fft.rfftfreq(y.size, d=dt)
    if spectrum[k] == 0.0 or freqs[k] == 0.0:
        raise InsufficientDataError("no oscillatory content found in trace")
    return 1.0 / freqs[k]


def rolling_amplitude(y: np.ndarray, window_samples: int) -> np.ndarray:
    """Half peak-to-peak of y over a sliding window (edge values replicated)."""
    hi = maximum_filter1d(y, size=window_samples, mode="nearest")
    lo = minimum_filter1d(y, size=window_samples, mode="nearest")
    return 0.5 * (hi - lo)


def revival_report(trace: TimeSeries, window: float | None = None) -> RevivalReport:
    """Locate collapse and revivals in a population trace.

    The oscillation amplitude of p_down - 1/2 is tracked with a rolling
    window (1.5 dominant periods by default, or an explicit ``window`` in
    normalized time units).  Collapse is the first time after the amplitude
    maximum that the amplitude drops below 0.1 of that maximum; revivals are
    subsequent local amplitude maxima above 0.05 of it.
    """
    times = trace.times
    y = trace.p_down - 0.5
    if times.size < 16:
        raise InsufficientDataError("trace too short for collapse/revival analysis")
    dt = float(times[1] - times[0])
    if window is None:
        window = 1.5 * _dominant_period(y, dt)
    if not (window > 0):
        raise ValueError(f"window must be positive, got {window}")
    window_samples = max(3, int(round(window / dt)))
    if y.size < 3 * window_samples:
        raise InsufficientDataError(
            f"trace covers fewer than 3 rolling windows ({window_samples} samples each)"
        )
    amp = rolling_amplitude(y, window_samples)
    i_ref = int(np.argmax(amp))
    ref = float(amp[i_ref])
    if ref == 0.0:
        raise InsufficientDataError("trace carries no oscillation amplitude")
    below = np.nonzero(amp[i_ref:] < COLLAPSE_FRACTION * ref)[0]
    if below.size == 0:
        return RevivalReport(collapse_time=None, revival_times=[], revival_amplitudes=[])
    i_col = i_ref + int(below[0])
    peak_idx, _ = find_peaks(amp[i_col:], height=REVIVAL_FRACTION * ref,
                             plateau_size=(1, None))
    revival_times = [float(times[i_col + i]) for i in peak_idx]
    revival_amps = [float(amp[i_col + i]) for i in peak_idx]
    return RevivalReport(
        collapse_time=float(times[i_col]),
        revival_times=revival_times,
        revival_amplitudes=revival_amps,
    )


def revival_report_to_json(report: RevivalReport) -> str:
    doc = {
        "collapse_time": report.collapse_time,
        "revival_times": list(report.revival_times),
        "revival_amplitudes": list(report.revival_amplitudes),
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"
