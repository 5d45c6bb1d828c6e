"""Core model: system parameters, motional distributions, dressed-state bookkeeping.

The effective interaction driving everything here is the anti-Jaynes-Cummings
coupling hbar*g*(b^dag S+ + b S-) between one internal pseudo-spin and one
harmonic motional mode.  Its eigenstates come in two-dimensional blocks

    |phi(n,+)> = (|down,n> + |up,n+1>)/sqrt(2),   energy +hbar*g*sqrt(n+1)
    |phi(n,->> = (|down,n> - |up,n+1>)/sqrt(2),   energy -hbar*g*sqrt(n+1)

plus the uncoupled |up,0> state at zero energy.  The lower-state population
only involves the intra-block coherences rho12^nn and the scalar rho00, which
is what :class:`BlockState` stores.

All dynamical quantities are kept in normalized units (rates as multiples of
the coupling g, time as g*t/2pi) unless stated otherwise; physical-unit entry
points (`raman_coupling`, `normalized_rate`) are thin conversion layers.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError, UnsupportedInitialStateError, ValidityWarning

# CODATA 2018 reduced Planck constant, J*s
HBAR = 1.054571817e-34

# Tail probability allowed beyond the truncation index of a distribution.
TAIL_TOLERANCE = 1e-8

# |sum(p) - 1| allowed for a constructed distribution.
NORMALIZATION_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SystemParams:
    """Spin-boson coupling parameters.

    In normalized mode ``g = 1`` and every rate elsewhere in the package is a
    dimensionless multiple of g.  For physical runs, pass angular frequencies
    in rad/s and convert with :func:`normalized_rate`.

    Attributes
    ----------
    g : float
        Spin-boson coupling angular frequency (the n=0 half Rabi splitting).
    omega_x : float
        Trap angular frequency.  Not used by the interaction-picture
        dynamics; kept for physical-unit bookkeeping.
    sideband : str
        "blue" drives the anti-Jaynes-Cummings coupling and the population
        reported is P_down; "red" is the mirror case where the same number
        is reported as P_up (pure label swap).
    hbar_scale : float
        Fixed to 1 in normalized mode.
    """

    g: float = 1.0
    omega_x: float = 1.0
    sideband: str = "blue"
    hbar_scale: float = 1.0

    def __post_init__(self):
        if not (self.g > 0):
            raise ValueError(f"coupling g must be positive, got {self.g}")
        if not (self.omega_x > 0):
            raise ValueError(f"trap frequency omega_x must be positive, got {self.omega_x}")
        if self.sideband not in ("blue", "red"):
            raise ValueError(f"sideband must be 'blue' or 'red', got {self.sideband!r}")

    @property
    def population_label(self) -> str:
        """Name of the reported population: lower state on blue, upper on red."""
        return "p_down" if self.sideband == "blue" else "p_up"


def normalized_rate(rate: float, g: float) -> float:
    """Convert a physical rate (1/s) to a dimensionless multiple of g (rad/s)."""
    if not (g > 0):
        raise ValueError("g must be positive")
    return rate / g


class Branch(enum.Enum):
    """Upper/lower member of a dressed-state doublet."""

    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class DressedIndex:
    """Label of one dressed eigenstate: block number and branch, or |up,0>."""

    n: int = 0
    branch: Branch | None = Branch.PLUS
    special: bool = False

    def __post_init__(self):
        if self.special:
            if self.branch is not None:
                raise ValueError("the uncoupled |up,0> state carries no branch label")
        else:
            if self.n < 0:
                raise ValueError(f"block index must be >= 0, got {self.n}")
            if self.branch is None:
                raise ValueError("non-special dressed states need a branch")


def dressed_eigenvalue(index: DressedIndex, g: float = 1.0) -> float:
    """Energy of a dressed state in units where hbar = 1: +-g*sqrt(n+1), or 0."""
    if index.special:
        return 0.0
    sign = 1.0 if index.branch is Branch.PLUS else -1.0
    return sign * g * math.sqrt(index.n + 1)


def rabi_freq(n: int, params: SystemParams) -> float:
    """Rabi splitting Omega_n = 2*g*sqrt(n+1) of the n-th dressed doublet."""
    if n < 0:
        raise ValueError(f"block index must be >= 0, got {n}")
    return 2.0 * params.g * math.sqrt(n + 1)


def omega_tilde(n) -> np.ndarray | float:
    """Normalized splitting Omega_n/g = 2*sqrt(n+1); accepts scalars or arrays."""
    return 2.0 * np.sqrt(np.asarray(n, dtype=float) + 1.0)


# ---------------------------------------------------------------------------
# Motional-state distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MotionalDistribution:
    """Probability vector over Fock states n = 0..n_max.

    Invariants: every entry nonnegative, total mass within 1e-10 of one.  The
    factory functions (:func:`fock_dist`, :func:`coherent_dist`,
    :func:`thermal_dist`) renormalize after truncation, so direct use of them
    always satisfies the invariant exactly up to rounding.
    """

    p: np.ndarray
    n_max: int = field(default=-1)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).copy()
        p.flags.writeable = False
        object.__setattr__(self, "p", p)
        if self.n_max < 0:
            object.__setattr__(self, "n_max", p.size - 1)
        if p.ndim != 1 or p.size != self.n_max + 1:
            raise ValueError("p must be a 1-d vector of length n_max+1")
        if np.any(p < 0):
            raise ValueError("probabilities must be nonnegative")
        total = float(np.sum(p))
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError(f"distribution mass {total!r} deviates from 1 beyond tolerance")

    def mean_n(self) -> float:
        return float(np.dot(np.arange(self.p.size), self.p))


def fock_dist(n: int, n_max: int) -> MotionalDistribution:
    """Delta distribution on Fock state |n>, truncated at n_max.

    Raises ``ValueError`` if n lies outside [0, n_max].
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if not 0 <= n <= n_max:
        raise ValueError(f"Fock index {n} outside truncation range [0, {n_max}]")
    p = np.zeros(n_max + 1)
    p[n] = 1.0
    return MotionalDistribution(p, n_max)


def default_coherent_n_max(alpha: float) -> int:
    """Truncation heuristic for a coherent state: far tail of Poisson(alpha^2)."""
    return math.ceil(alpha * alpha + 8.0 * alpha + 10.0)


def default_thermal_n_max(nbar: float) -> int:
    """Truncation heuristic for a thermal state with mean occupation nbar."""
    return math.ceil(nbar * 40.0) + 10


def _poisson_log_pmf(n: np.ndarray, mean: float) -> np.ndarray:
    return -mean + n * math.log(mean) - np.array([math.lgamma(k + 1) for k in n])


def coherent_dist(alpha: float, n_max: int | None = None) -> MotionalDistribution:
    """Photon-number distribution of a coherent state |alpha>.

    p_n is Poissonian with mean alpha^2, renormalized over 0..n_max.  The
    truncated tail mass must stay below ``TAIL_TOLERANCE``; otherwise a
    :class:`TruncationError` with a suggested n_max is raised.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if n_max is None:
        n_max = default_coherent_n_max(alpha)
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    mean = alpha * alpha
    if mean == 0.0:
        return fock_dist(0, n_max)
    ns = np.arange(n_max + 1)
    p = np.exp(_poisson_log_pmf(ns, mean))
    tail = max(0.0, 1.0 - float(np.sum(p)))
    if tail >= TAIL_TOLERANCE:
        suggested = n_max
        mass = float(np.sum(p))
        term = float(p[-1])
        while 1.0 - mass >= TAIL_TOLERANCE:
            suggested += 1
            term *= mean / suggested
            mass += term
        raise TruncationError(
            f"coherent state alpha={alpha} leaves tail mass {tail:.3g} beyond "
            f"n_max={n_max}; use n_max >= {suggested}",
            suggested_n_max=suggested,
        )
    return MotionalDistribution(p / np.sum(p), n_max)


def thermal_dist(nbar: float, n_max: int | None = None) -> MotionalDistribution:
    """Geometric (thermal) occupation with mean nbar, renormalized over 0..n_max."""
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if n_max is None:
        n_max = default_thermal_n_max(nbar)
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if nbar == 0.0:
        return fock_dist(0, n_max)
    ratio = nbar / (nbar + 1.0)
    # Tail of the geometric series is exactly ratio**(n_max+1).
    tail = ratio ** (n_max + 1)
    if tail >= TAIL_TOLERANCE:
        suggested = math.ceil(math.log(TAIL_TOLERANCE) / math.log(ratio)) - 1
        raise TruncationError(
            f"thermal state nbar={nbar} leaves tail mass {tail:.3g} beyond "
            f"n_max={n_max}; use n_max >= {suggested}",
            suggested_n_max=suggested,
        )
    p = (1.0 - ratio) * ratio ** np.arange(n_max + 1)
    return MotionalDistribution(p / np.sum(p), n_max)


# ---------------------------------------------------------------------------
# Raman calibration (physical units)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RamanInputs:
    """Raw two-beam stimulated-Raman parameters, SI units throughout.

    g01, g02 are the single-beam dipole coupling rates (rad/s, may be
    complex), Delta the common detuning from the auxiliary level, k1x/k2x the
    wavevector components along the trap axis (1/m).
    """

    g01: complex
    g02: complex
    Delta: float
    k1x: float
    k2x: float
    mass: float
    omega_x: float

    def __post_init__(self):
        if self.Delta == 0:
            raise ZeroDivisionError("Raman detuning Delta must be nonzero")
        if not (self.mass > 0):
            raise ValueError(f"ion mass must be positive, got {self.mass}")
        if not (self.omega_x > 0):
            raise ValueError(f"trap frequency must be positive, got {self.omega_x}")


@dataclass(frozen=True)
class RamanCoupling:
    """Derived effective couplings: sideband coupling g, light shifts, geometry."""

    g: complex
    delta_1: float
    delta_2: float
    x0: float
    eta: float


def raman_coupling(inputs: RamanInputs) -> RamanCoupling:
    """Effective couplings after adiabatic elimination of the auxiliary level.

    Returns the ground-state size x0 = sqrt(hbar/2m*omega_x), the Lamb-Dicke
    parameter eta = |k2x-k1x|*x0, the light shifts Delta_l = |g0l|^2/Delta and
    the sideband coupling g = i*conj(g01)*g02*(k2x-k1x)*x0/Delta.

    Emits :class:`ValidityWarning` when the large-detuning condition
    (|g0l| << |Delta|) or the Lamb-Dicke condition (eta < 1) is strained.
    """
    x0 = math.sqrt(HBAR / (2.0 * inputs.mass * inputs.omega_x))
    dkx = inputs.k2x - inputs.k1x
    eta = abs(dkx) * x0
    for label, g0l in (("g01", inputs.g01), ("g02", inputs.g02)):
        if abs(g0l) > 0.1 * abs(inputs.Delta):
            warnings.warn(
                f"|{label}|/|Delta| = {abs(g0l) / abs(inputs.Delta):.3g} exceeds 0.1; "
                "adiabatic elimination of the auxiliary level is unreliable",
                ValidityWarning,
                stacklevel=2,
            )
    if eta >= 1.0:
        warnings.warn(
            f"Lamb-Dicke parameter eta = {eta:.3g} >= 1; first-order expansion invalid",
            ValidityWarning,
            stacklevel=2,
        )
    elif eta >= 0.3:
        warnings.warn(
            f"Lamb-Dicke parameter eta = {eta:.3g} is outside the comfortable regime (< 0.3)",
            ValidityWarning,
            stacklevel=2,
        )
    delta_1 = abs(inputs.g01) ** 2 / inputs.Delta
    delta_2 = abs(inputs.g02) ** 2 / inputs.Delta
    g = 1j * np.conjugate(inputs.g01) * inputs.g02 * dkx * x0 / inputs.Delta
    return RamanCoupling(g=complex(g), delta_1=delta_1, delta_2=delta_2, x0=x0, eta=eta)


# ---------------------------------------------------------------------------
# Dressed-basis block state
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BlockState:
    """Dressed-basis state restricted to what the population depends on.

    Per block n it stores the spin-off-diagonal coherences rho12^nn and
    rho21^nn together with the block weight; rho00 is the scalar occupation
    of the uncoupled |up,0> state.  All arrays are read-only.
    """

    rho12: np.ndarray
    rho21: np.ndarray
    rho00: float
    weights: np.ndarray

    def __post_init__(self):
        for name in ("rho12", "rho21"):
            arr = np.asarray(getattr(self, name), dtype=complex).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        w = np.asarray(self.weights, dtype=float).copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        if not (self.rho12.shape == self.rho21.shape == self.weights.shape):
            raise ValueError("rho12, rho21 and weights must share one shape")
        if not (0.0 <= self.rho00 <= 1.0):
            raise ValueError(f"rho00 must lie in [0, 1], got {self.rho00}")

    @property
    def n_blocks(self) -> int:
        return self.rho12.size


def initial_block_state(dist: MotionalDistribution, internal: str = "down") -> BlockState:
    """Block state for a product initial condition internal (x) dist.

    For internal="down" (lower spin state), |down,n> = (|phi(n,+)> +
    |phi(n,->>)/sqrt(2) gives rho12^nn(0) = rho21^nn(0) = p_n/2 and
    rho00(0) = 0.

    internal="up" is supported only when p_0 = 0: |up,n+1> maps onto block n
    with coherence -p_{n+1}/2, while any population of |up,0> would sit in a
    sector whose coupling to the coherences is not modeled.
    """
    p = dist.p
    if internal == "down":
        half = p / 2.0
        return BlockState(rho12=half.astype(complex), rho21=half.astype(complex),
                          rho00=0.0, weights=p)
    if internal == "up":
        if p[0] > 0.0:
            raise UnsupportedInitialStateError(
                "initial |up> with p_0 > 0 would populate |up,0>; only p_0 = 0 "
                "upper-state preparations are supported"
            )
        w = p[1:]
        half = -w / 2.0
        return BlockState(rho12=half.astype(complex), rho21=half.astype(complex),
                          rho00=0.0, weights=w)
    raise ValueError(f"internal state must be 'down' or 'up', got {internal!r}")


def p_down(state: BlockState) -> float:
    """Lower-state population (1 - rho00 + 2*sum_n Re rho12^nn)/2.

    On the red sideband the identical number is the upper-state population;
    the swap is a reporting label only.
    """
    return 0.5 * (1.0 - state.rho00 + 2.0 * float(np.sum(state.rho12.real)))
