"""Reservoir spectral model and per-block decoherence rates.

Two microscopic dephasing channels are supported, both leaving the block
structure of the dressed basis intact (no transitions between different n):

* ``dipole``: the spin-boson coupling itself fluctuates (imperfect Raman
  drive).  Block n decays at A_n = (n+1)*kappa(n)*f(n,T) + 2*(n+1)*k0n0.
* ``vibrational``: the trap potential fluctuates (coupling through the boson
  number operator).  Block n decays at A_n = kappa(n)*f(n,T)/2.

Here f(n,T) = nbar(Omega_n) + 1/2 is the thermal weight of reservoir modes
at the block splitting Omega_n = 2g*sqrt(n+1), and the damping spectrum is a
power law kappa(n) = a*(2*sqrt(n+1))**d in units of g.  Anchoring the n=0
rate to a measured gamma0 eliminates the constant a and yields

    A_n(dipole) = gamma0 * (n+1)**(1+d/2) * f(n,T)/f(0,T)
    A_n(vib)    = gamma0 * (n+1)**(d/2)   * f(n,T)/f(0,T)

with f(n,T)/f(0,T) -> (n+1)**(-1/2) in the high-temperature limit and -> 1
at zero temperature.  All rates returned here are dimensionless multiples
of g.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidityWarning

CHANNELS = ("dipole", "vibrational", "none")

#: Channels that actually damp the coherences.
DAMPED_CHANNELS = ("dipole", "vibrational")


@dataclass(frozen=True)
class ReservoirSpec:
    """Reservoir parameters in normalized units.

    Attributes
    ----------
    T_tilde : float
        Normalized temperature k_B*T/(hbar*g); ``math.inf`` selects the
        high-temperature (classical-noise) limit.
    d : float
        Spectral power of the damping function, not restricted to integers
        (d=1 is the Ohmic case, d=3 a 3-D radiation field).
    a_tilde : float
        Damping constant of kappa(n) = a_tilde*(2*sqrt(n+1))**d.  Usually
        left at 0 and fixed later via :func:`calibrate_a`; the weak-coupling
        treatment needs a_tilde << 1.
    kappa0_nbar0 : float
        Zero-frequency reservoir contribution (dipole channel only), kept as
        a single dimensionless knob and defaulting to the usual choice 0.
    channel : str
        "dipole", "vibrational" or "none".
    """

    T_tilde: float = math.inf
    d: float = 1.0
    a_tilde: float = 0.0
    kappa0_nbar0: float = 0.0
    channel: str = "dipole"

    def __post_init__(self):
        if not (self.T_tilde > 0):
            raise ValueError(f"T_tilde must be positive (or inf), got {self.T_tilde}")
        if not math.isfinite(self.d):
            raise ValueError(f"spectral power d must be finite, got {self.d}")
        if self.a_tilde < 0:
            raise ValueError(f"a_tilde must be >= 0, got {self.a_tilde}")
        if self.kappa0_nbar0 < 0:
            raise ValueError(f"kappa0_nbar0 must be >= 0, got {self.kappa0_nbar0}")
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if self.a_tilde >= 0.1:
            warnings.warn(
                f"a_tilde = {self.a_tilde:.3g} strains the weak-coupling assumption "
                "kappa(n) << g",
                ValidityWarning,
                stacklevel=2,
            )


def thermal_factor(n: int, T_tilde: float) -> float:
    """Thermal weight f(n,T) = nbar(Omega_n) + 1/2 = coth(sqrt(n+1)/T)/2.

    Diverges like T/2 as T -> inf; ``math.inf`` is returned for the exact
    high-temperature sentinel (rate formulas use :func:`thermal_factor_ratio`
    there instead).
    """
    if n < 0:
        raise ValueError(f"block index must be >= 0, got {n}")
    if not (T_tilde > 0):
        raise ValueError(f"T_tilde must be positive (or inf), got {T_tilde}")
    if math.isinf(T_tilde):
        return math.inf
    return 0.5 / math.tanh(math.sqrt(n + 1) / T_tilde)


def thermal_factor_ratio(n, T_tilde: float):
    """f(n,T)/f(0,T), evaluated stably; accepts scalar or array n.

    At T = inf the analytic limit (n+1)**(-1/2) is used directly rather than
    a ratio of diverging coth values.  The ratio always lies in
    [(n+1)**(-1/2), 1].
    """
    if not (T_tilde > 0):
        raise ValueError(f"T_tilde must be positive (or inf), got {T_tilde}")
    narr = np.asarray(n, dtype=float)
    if np.any(narr < 0):
        raise ValueError("block index must be >= 0")
    if math.isinf(T_tilde):
        out = (narr + 1.0) ** -0.5
    else:
        # coth(x_n)/coth(x_0) == tanh(x_0)/tanh(x_n); tanh saturates cleanly
        # for large arguments, so no cancellation at any temperature.
        out = math.tanh(1.0 / T_tilde) / np.tanh(np.sqrt(narr + 1.0) / T_tilde)
    return float(out) if np.ndim(n) == 0 else out


def damping_kappa(n, spec: ReservoirSpec):
    """Damping spectrum kappa(n) = a_tilde*(2*sqrt(n+1))**d in units of g."""
    narr = np.asarray(n, dtype=float)
    out = spec.a_tilde * (2.0 * np.sqrt(narr + 1.0)) ** spec.d
    return float(out) if np.ndim(n) == 0 else out


def calibrate_a(gamma0_tilde: float, spec: ReservoirSpec) -> float:
    """Damping constant a_tilde that anchors the n=0 rate to gamma0_tilde.

    Solves gamma0 = kappa(0)*f(0,T) (+ 2*kappa0_nbar0 for the dipole channel)
    or gamma0 = kappa(0)*f(0,T)/2 (vibrational).  In the high-temperature
    limit f(0,T) diverges, so the calibrated a_tilde tends to zero while all
    rates stay finite through the gamma0-anchored forms; 0.0 is returned for
    T_tilde = inf.
    """
    if not (gamma0_tilde > 0):
        raise ValueError(f"gamma0_tilde must be positive, got {gamma0_tilde}")
    if spec.channel == "none":
        raise ValueError("channel 'none' has no damping constant to calibrate")
    if math.isinf(spec.T_tilde):
        return 0.0
    f0 = thermal_factor(0, spec.T_tilde)
    if spec.channel == "dipole":
        anchor = gamma0_tilde - 2.0 * spec.kappa0_nbar0
        if anchor <= 0:
            raise ValueError(
                "zero-frequency term 2*kappa0_nbar0 = "
                f"{2 * spec.kappa0_nbar0:.3g} already exceeds gamma0_tilde"
            )
        return anchor / (2.0**spec.d * f0)
    return 2.0 * gamma0_tilde / (2.0**spec.d * f0)


def rate(n, spec: ReservoirSpec, gamma0_tilde: float = 0.0):
    """Normalized block decoherence rate A_n/g, anchored so rate(0) = gamma0.

    Accepts scalar or array n.  channel="none" returns zeros and ignores
    gamma0_tilde; the damped channels require gamma0_tilde > 0.
    """
    sym, zero = rate_split(n, spec, gamma0_tilde)
    return sym + zero


def rate_split(n, spec: ReservoirSpec, gamma0_tilde: float = 0.0):
    """Decompose the block rate into (symmetric, zero_frequency) parts.

    The symmetric part multiplies both rho12 and the rho21 coupling in the
    block equations of motion; the zero-frequency part (dipole channel only)
    damps rho12 without coupling back to rho21.  Their sum is :func:`rate`.
    """
    narr = np.asarray(n, dtype=float)
    scalar = np.ndim(n) == 0
    if np.any(narr < 0):
        raise ValueError("block index must be >= 0")
    if spec.channel == "none":
        z = np.zeros_like(narr)
        return (0.0, 0.0) if scalar else (z, z.copy())
    if not (gamma0_tilde > 0):
        raise ValueError(f"gamma0_tilde must be positive, got {gamma0_tilde}")

    if spec.channel == "dipole":
        anchor = gamma0_tilde - 2.0 * spec.kappa0_nbar0
        if anchor <= 0:
            raise ValueError(
                "zero-frequency term 2*kappa0_nbar0 = "
                f"{2 * spec.kappa0_nbar0:.3g} already exceeds gamma0_tilde"
            )
        if math.isinf(spec.T_tilde):
            sym = anchor * (narr + 1.0) ** ((spec.d + 1.0) / 2.0)
        else:
            sym = (
                anchor
                * (narr + 1.0) ** (1.0 + spec.d / 2.0)
                * thermal_factor_ratio(narr, spec.T_tilde)
            )
        zero = 2.0 * (narr + 1.0) * spec.kappa0_nbar0
    else:  # vibrational
        if math.isinf(spec.T_tilde):
            sym = gamma0_tilde * (narr + 1.0) ** ((spec.d - 1.0) / 2.0)
        else:
            sym = (
                gamma0_tilde
                * (narr + 1.0) ** (spec.d / 2.0)
                * thermal_factor_ratio(narr, spec.T_tilde)
            )
        zero = np.zeros_like(narr)
    if scalar:
        return float(sym), float(zero)
    return sym, zero


def rate_highT(n, channel: str, d: float, gamma0_tilde: float):
    """Closed-form high-temperature rate: gamma0*(n+1)**((d+1)/2) or **((d-1)/2).

    Bitwise identical to :func:`rate` evaluated at T_tilde = inf with zero
    kappa0_nbar0, since both paths share the same power-law expression.
    """
    if channel not in DAMPED_CHANNELS:
        raise ValueError(f"channel must be one of {DAMPED_CHANNELS}, got {channel!r}")
    if not (gamma0_tilde > 0):
        raise ValueError(f"gamma0_tilde must be positive, got {gamma0_tilde}")
    narr = np.asarray(n, dtype=float)
    if np.any(narr < 0):
        raise ValueError("block index must be >= 0")
    exponent = (d + 1.0) / 2.0 if channel == "dipole" else (d - 1.0) / 2.0
    out = gamma0_tilde * (narr + 1.0) ** exponent
    return float(out) if np.ndim(n) == 0 else out


# ---------------------------------------------------------------------------
# Rate tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RateTable:
    """Per-n rate table with the quantities that make up A_n."""

    n: np.ndarray
    omega_tilde: np.ndarray
    kappa_tilde: np.ndarray
    f_ratio: np.ndarray
    rate_tilde: np.ndarray
    channel: str
    spec: ReservoirSpec = field(repr=False, default=None)
    gamma0_tilde: float = 0.0

    def __post_init__(self):
        if np.any(self.rate_tilde < 0) or not np.all(np.isfinite(self.rate_tilde)):
            raise ValueError("rates must be finite and nonnegative")


def rate_table(spec: ReservoirSpec, gamma0_tilde: float, n_max: int) -> RateTable:
    """Tabulate omega_tilde, kappa_tilde, f_ratio and rate_tilde for n = 0..n_max."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    ns = np.arange(n_max + 1)
    narr = ns.astype(float)
    omega = 2.0 * np.sqrt(narr + 1.0)
    f_ratio = thermal_factor_ratio(narr, spec.T_tilde)
    if spec.channel == "none":
        kappa = np.zeros_like(narr)
        rates = np.zeros_like(narr)
    else:
        a = calibrate_a(gamma0_tilde, spec)
        kappa = a * omega**spec.d
        rates = rate(narr, spec, gamma0_tilde)
    return RateTable(
        n=ns,
        omega_tilde=omega,
        kappa_tilde=kappa,
        f_ratio=f_ratio,
        rate_tilde=rates,
        channel=spec.channel,
        spec=spec,
        gamma0_tilde=gamma0_tilde,
    )


def rate_table_to_csv(table: RateTable) -> str:
    """CSV rendering with columns n, omega_tilde, kappa_tilde, f_ratio, rate_tilde."""
    lines = ["n,omega_tilde,kappa_tilde,f_ratio,rate_tilde"]
    for i in range(table.n.size):
        lines.append(
            f"{table.n[i]:d},{table.omega_tilde[i]:.15g},{table.kappa_tilde[i]:.15g},"
            f"{table.f_ratio[i]:.15g},{table.rate_tilde[i]:.15g}"
        )
    return "\n".join(lines) + "\n"
