"""Time evolution of the dressed-basis blocks and population traces.

Each block n evolves independently under a 2x2 linear system for
(rho12^nn, rho21^nn).  With Omega the block splitting and A the block decay
rate, the dipole channel couples the pair as

    d/dt rho12 = -i*Omega*rho12 - A*rho12 - a*rho21        (a = A - zero-freq part)

and its closed-form solution in the weak-coupling regime A < Omega is

    rho12(t) = e^{-A t} [cos(B t) - i*(Omega/B) sin(B t)] rho12(0)
             - e^{-A t} (A/B) sin(B t) rho21(0),            B = sqrt(Omega^2 - A^2).

The vibrational channel obeys the same form with the rho21 coupling entering
with the opposite sign (+A*rho21), which flips the phase of the real part
from cos(B t + theta) to cos(B t - theta) while leaving the decay rate and
frequency untouched.  The sign convention per channel was fixed against a
matrix-exponential solution of the block equations and is locked in
``COUPLING_SIGN`` below.

Two independent propagation routes are provided deliberately: the closed
form above, and an adaptive ODE integration of the raw block equations that
serves as a cross-validation oracle.

Public time arguments are in normalized units t_norm = g*t/(2*pi) matching
the usual experimental axis; the per-block propagators work in radian time
g*t and say so.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError, OverdampedError, ValidityWarning
from .model import BlockState, MotionalDistribution, omega_tilde
from .reservoir import ReservoirSpec, rate, rate_split

#: Sign of the rho21 -> rho12 coupling term in the block equations, resolved
#: per channel against the 2x2 matrix-exponential oracle.  "none" has no
#: coupling; the dipole value matches the printed closed form.
COUPLING_SIGN = {"dipole": -1.0, "vibrational": 1.0, "none": -1.0}

SOLVERS = ("analytic", "ode")
FORMS = ("exact", "approx")

#: Default adaptive-integration tolerances for the ODE route.
ODE_RTOL = 1e-10
ODE_ATOL = 1e-12

#: Numerical slack allowed on the [0, 1] population bounds.
POPULATION_SLACK = 1e-9


def to_radian_time(t_norm) -> np.ndarray:
    """Convert normalized time g*t/2pi to radian time g*t."""
    return 2.0 * math.pi * np.asarray(t_norm, dtype=float)


def default_time_grid(t_max_norm: float = 5.0, samples: int = 2000) -> np.ndarray:
    """Uniform grid of normalized times over [0, t_max_norm]."""
    if not (t_max_norm > 0):
        raise ValueError(f"t_max_norm must be positive, got {t_max_norm}")
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    return np.linspace(0.0, t_max_norm, samples)


# ---------------------------------------------------------------------------
# Closed-form propagation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PropagatorParams:
    """Frozen per-block propagation constants (all in units of g).

    B_n and theta_n are derived from A_n and Omega_n; construction fails with
    :class:`OverdampedError` outside the weak-coupling regime A_n < Omega_n,
    where B_n would turn imaginary.
    """

    A_n: float
    Omega_n: float
    channel: str = "dipole"
    B_n: float = field(init=False)
    theta_n: float = field(init=False)

    def __post_init__(self):
        if self.channel not in COUPLING_SIGN:
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.A_n < 0:
            raise ValueError(f"decay rate must be >= 0, got {self.A_n}")
        if not (self.Omega_n > 0):
            raise ValueError(f"Omega_n must be positive, got {self.Omega_n}")
        if self.A_n >= self.Omega_n:
            raise OverdampedError(
                f"A_n = {self.A_n:.3g} >= Omega_n = {self.Omega_n:.3g}; the "
                "weak-coupling solution does not apply"
            )
        object.__setattr__(self, "B_n", math.sqrt(self.Omega_n**2 - self.A_n**2))
        object.__setattr__(self, "theta_n", math.atan2(self.A_n, self.B_n))

    @property
    def coupling_sign(self) -> float:
        return COUPLING_SIGN[self.channel]


def propagator_params(n: int, spec: ReservoirSpec, gamma0_tilde: float = 0.0) -> PropagatorParams:
    """Build :class:`PropagatorParams` for block n from a reservoir spec."""
    if spec.channel == "dipole" and spec.kappa0_nbar0 > 0:
        warnings.warn(
            "the closed-form propagator treats the zero-frequency term as part "
            "of A_n and is exact only for kappa0_nbar0 = 0; prefer the ODE "
            "solver for kappa0_nbar0 > 0",
            ValidityWarning,
            stacklevel=2,
        )
    A = rate(n, spec, gamma0_tilde) if spec.channel != "none" else 0.0
    return PropagatorParams(A_n=float(A), Omega_n=float(omega_tilde(n)), channel=spec.channel)


def propagate_block_analytic(params: PropagatorParams, rho12_0: complex,
                             rho21_0: complex, t):
    """Closed-form block coherences at radian times t (units 1/g).

    Returns (rho12(t), rho21(t)) as arrays shaped like t.  For Hermitian
    initial data (rho21_0 = conj(rho12_0)) the outputs stay conjugate.
    """
    t = np.asarray(t, dtype=float)
    A, B, Om = params.A_n, params.B_n, params.Omega_n
    s = params.coupling_sign
    decay = np.exp(-A * t)
    cos_bt = np.cos(B * t)
    sin_bt = np.sin(B * t)
    diag = cos_bt - 1j * (Om / B) * sin_bt
    cross = (A / B) * sin_bt
    rho12_t = decay * (diag * rho12_0 + s * cross * rho21_0)
    rho21_t = decay * (np.conjugate(diag) * rho21_0 + s * cross * rho12_0)
    return rho12_t, rho21_t


def real_coherence(params: PropagatorParams, p_n: float, t):
    """Re rho12^nn(t) for the standard real initial data rho12(0) = p_n/2.

    Equals (p_n/2) e^{-A t} sqrt(1+(A/B)^2) cos(B t - s*theta) with s the
    channel coupling sign, i.e. phase +theta for the dipole channel and
    -theta for the vibrational one.  t is radian time (units 1/g).
    """
    t = np.asarray(t, dtype=float)
    amp = 0.5 * p_n * math.sqrt(1.0 + (params.A_n / params.B_n) ** 2)
    phase = -params.coupling_sign * params.theta_n
    return amp * np.exp(-params.A_n * t) * np.cos(params.B_n * t + phase)


def coherence_envelope(params: PropagatorParams, p_n: float, t):
    """Decay envelope (p_n/2) sqrt(1+(A/B)^2) e^{-A t} bounding |rho12(t)|."""
    t = np.asarray(t, dtype=float)
    amp = 0.5 * p_n * math.sqrt(1.0 + (params.A_n / params.B_n) ** 2)
    return amp * np.exp(-params.A_n * t)


# ---------------------------------------------------------------------------
# ODE route
# ---------------------------------------------------------------------------


def block_generator(n: int, spec: ReservoirSpec, gamma0_tilde: float = 0.0) -> np.ndarray:
    """2x2 complex generator M of d/dt (rho12, rho21) = M (rho12, rho21).

    The diagonal carries -+i*Omega_n and the full decay rate; the
    off-diagonal coupling uses only the symmetric part of the rate (the
    zero-frequency dipole term damps without coupling the pair).
    """
    om = float(omega_tilde(n))
    sym, zero = rate_split(n, spec, gamma0_tilde)
    s = COUPLING_SIGN[spec.channel]
    total = sym + zero
    return np.array(
        [
            [-1j * om - total, s * sym],
            [s * sym, 1j * om - total],
        ],
        dtype=complex,
    )


@dataclass(frozen=True, eq=False)
class BlockTrajectories:
    """Per-block coherence trajectories on a common normalized time grid."""

    times: np.ndarray          # normalized time g*t/2pi
    rho12: np.ndarray          # shape (n_blocks, n_times), complex
    rho21: np.ndarray
    rho00: float               # constant: d rho00/dt = 0 in both channels

    def hermiticity_drift(self) -> float:
        """max |rho21(t) - conj(rho12(t))| over all blocks and times."""
        return float(np.max(np.abs(self.rho21 - np.conjugate(self.rho12))))


def integrate_blocks_ode(initial: BlockState, spec: ReservoirSpec,
                         gamma0_tilde: float, t_norm,
                         rtol: float = ODE_RTOL, atol: float = ODE_ATOL) -> BlockTrajectories:
    """Adaptive integration of the raw block equations for every block.

    rho12 and rho21 are integrated as independent components (Hermiticity is
    a measured outcome, not an imposed constraint), each block in its own
    solver call so that blocks stay exactly decoupled numerically.
    """
    t_norm = np.asarray(t_norm, dtype=float)
    if t_norm.size < 2 or np.any(np.diff(t_norm) <= 0):
        raise ValueError("t_norm must contain at least two strictly increasing times")
    t_rad = to_radian_time(t_norm)
    n_blocks = initial.n_blocks
    rho12 = np.empty((n_blocks, t_rad.size), dtype=complex)
    rho21 = np.empty_like(rho12)
    for k in range(n_blocks):
        gen = block_generator(k, spec, gamma0_tilde)
        y0 = np.array([initial.rho12[k], initial.rho21[k]], dtype=complex)
        sol = solve_ivp(
            lambda t, y: gen @ y,
            (t_rad[0], t_rad[-1]),
            y0,
            t_eval=t_rad,
            method="DOP853",
            rtol=rtol,
            atol=atol,
        )
        if not sol.success:
            raise IntegrationError(f"block {k} integration failed: {sol.message}")
        rho12[k] = sol.y[0]
        rho21[k] = sol.y[1]
    return BlockTrajectories(times=t_norm, rho12=rho12, rho21=rho21, rho00=initial.rho00)


# ---------------------------------------------------------------------------
# Population traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Sampled population trace, times in normalized units g*t/2pi.

    ``coherences`` optionally carries the per-block rho12 samples for
    diagnostics; it is not part of the serialized artifact.
    """

    times: np.ndarray
    p_down: np.ndarray
    channel: str = "none"
    params: dict = field(default_factory=dict)
    coherences: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        pop = np.asarray(self.p_down, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "p_down", pop)
        if times.ndim != 1 or times.shape != pop.shape:
            raise ValueError("times and p_down must be matching 1-d vectors")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if np.any(pop < -POPULATION_SLACK) or np.any(pop > 1.0 + POPULATION_SLACK):
            raise ValueError("population values fall outside [0, 1] beyond slack")


def _damped_cosine_sum(coeff: np.ndarray, omega: np.ndarray, decay: np.ndarray,
                       t_rad: np.ndarray, rho00: float) -> np.ndarray:
    """(1 - rho00 + sum_n coeff_n cos(omega_n t) e^{-decay_n t})/2.

    Blocks are summed in ascending n with numpy's pairwise reduction, so the
    result is bit-stable regardless of how callers parallelize elsewhere.
    """
    series = coeff[:, None] * np.cos(np.outer(omega, t_rad)) * np.exp(-np.outer(decay, t_rad))
    return 0.5 * (1.0 - rho00 + np.sum(series, axis=0))


def pdown_trace(initial: BlockState, spec: ReservoirSpec, gamma0_tilde: float,
                t_norm, solver: str = "analytic", form: str = "exact",
                keep_coherences: bool = False,
                rtol: float = ODE_RTOL, atol: float = ODE_ATOL,
                params: dict | None = None) -> TimeSeries:
    """Lower-state population trace for a block initial state.

    form="exact" assembles the population from fully propagated block
    coherences; form="approx" evaluates the per-component damped-cosine
    closed form (no amplitude or phase corrections), which agrees with the
    exact assembly to O(A_n/Omega_n) in the weak-coupling regime.  The
    solver choice (closed form vs adaptive ODE) only matters for the exact
    form.
    """
    if solver not in SOLVERS:
        raise ValueError(f"solver must be one of {SOLVERS}, got {solver!r}")
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    t_norm = np.asarray(t_norm, dtype=float)
    t_rad = to_radian_time(t_norm)
    ns = np.arange(initial.n_blocks)
    omegas = omega_tilde(ns)
    rates = rate(ns, spec, gamma0_tilde) if spec.channel != "none" else np.zeros(ns.size)
    meta = dict(params or {})
    meta.setdefault("gamma0_tilde", gamma0_tilde)
    meta.setdefault("solver", solver)
    meta.setdefault("form", form)

    if form == "approx":
        coeff = 2.0 * initial.rho12.real
        pop = _damped_cosine_sum(coeff, omegas, rates, t_rad, initial.rho00)
        return TimeSeries(times=t_norm, p_down=pop, channel=spec.channel, params=meta)

    if solver == "analytic":
        rho12 = np.empty((initial.n_blocks, t_rad.size), dtype=complex)
        for k in range(initial.n_blocks):
            prop = PropagatorParams(A_n=float(rates[k]), Omega_n=float(omegas[k]),
                                    channel=spec.channel)
            rho12[k], _ = propagate_block_analytic(prop, initial.rho12[k],
                                                   initial.rho21[k], t_rad)
        rho00 = initial.rho00
    else:
        traj = integrate_blocks_ode(initial, spec, gamma0_tilde, t_norm,
                                    rtol=rtol, atol=atol)
        rho12 = traj.rho12
        rho00 = traj.rho00
    pop = 0.5 * (1.0 - rho00 + 2.0 * np.sum(rho12.real, axis=0))
    return TimeSeries(times=t_norm, p_down=pop, channel=spec.channel, params=meta,
                      coherences=rho12 if keep_coherences else None)


def phenom_trace(dist: MotionalDistribution, gamma0_tilde: float, nu: float,
                 t_norm, params: dict | None = None) -> TimeSeries:
    """Phenomenological damped-cosine trace with rates gamma0*(n+1)**nu.

    This is the empirical model of the observed dynamics; for gamma0 = 0 it
    reduces to the undamped sum, and with nu matching a channel's high-T
    exponent it coincides with the approx-form microscopic trace.
    """
    if gamma0_tilde < 0:
        raise ValueError(f"gamma0_tilde must be >= 0, got {gamma0_tilde}")
    t_norm = np.asarray(t_norm, dtype=float)
    t_rad = to_radian_time(t_norm)
    ns = np.arange(dist.p.size)
    omegas = omega_tilde(ns)
    decay = gamma0_tilde * (ns + 1.0) ** nu
    meta = dict(params or {})
    meta.setdefault("gamma0_tilde", gamma0_tilde)
    meta.setdefault("nu", nu)
    pop = _damped_cosine_sum(dist.p, omegas, decay, t_rad, 0.0)
    return TimeSeries(times=t_norm, p_down=pop, channel="phenom", params=meta)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def timeseries_to_csv(ts: TimeSeries) -> str:
    """CSV rendering with header t_norm,p_down at 15 significant digits."""
    lines = ["t_norm,p_down"]
    for t, p in zip(ts.times, ts.p_down):
        lines.append(f"{t:.15g},{p:.15g}")
    return "\n".join(lines) + "\n"


def timeseries_to_json(ts: TimeSeries) -> str:
    """JSON document {params, channel, series: [[t, p], ...]}.

    Floats are emitted with repr semantics, so a round trip through
    :func:`timeseries_from_json` reproduces the arrays bit for bit.
    """
    doc = {
        "params": ts.params,
        "channel": ts.channel,
        "series": [[float(t), float(p)] for t, p in zip(ts.times, ts.p_down)],
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def timeseries_from_json(text: str) -> TimeSeries:
    """Inverse of :func:`timeseries_to_json` (diagnostic coherences excluded)."""
    doc = json.loads(text)
    series = np.asarray(doc["series"], dtype=float)
    if series.ndim != 2 or series.shape[1] != 2:
        raise ValueError("series must be a list of [t, p] pairs")
    return TimeSeries(times=series[:, 0], p_down=series[:, 1],
                      channel=doc["channel"], params=doc["params"])
