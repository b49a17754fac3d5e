"""Truncated photon-number (Fock) space: states and basic observables.

States are complex amplitude vectors indexed by photon number n = 0..n_max.
All operations are pure functions; nothing here mutates its inputs, so
everything is safe to call concurrently.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .errors import InvalidParam, TruncationTooSmall

# Normalization slack accepted by the PureState constructor before it snaps
# the vector to exactly unit norm.
NORM_TOL = 1e-6

# Default bound on Poisson probability mass allowed beyond the basis cutoff.
DEFAULT_TAIL_TOL = 1e-12

# Tail masses below double-precision resolution of (1 - sum) cannot be
# certified by summation.
_MIN_CERTIFIABLE_TAIL = 1e-15


def _fold_phase(phi: float) -> float:
    """Fold an angle into (-pi, pi]."""
    folded = math.remainder(phi, 2.0 * math.pi)
    if folded <= -math.pi:
        folded += 2.0 * math.pi
    return folded


class CoherentParams:
    """Magnitude and phase of a coherent field, alpha = magnitude * exp(-1j * phase).

    The phase is folded into (-pi, pi] on construction.
    """

    __slots__ = ("magnitude", "phase")

    def __init__(self, magnitude: float, phase: float = 0.0):
        magnitude = float(magnitude)
        phase = float(phase)
        if not (math.isfinite(magnitude) and math.isfinite(phase)):
            raise InvalidParam("coherent-state parameters must be finite")
        if magnitude < 0.0:
            raise InvalidParam("coherent-state magnitude must be non-negative")
        self.magnitude = magnitude
        self.phase = _fold_phase(phase)

    @property
    def alpha(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), -math.sin(self.phase))

    @property
    def mean_photon_number(self) -> float:
        return self.magnitude**2

    def __repr__(self) -> str:
        return f"CoherentParams(magnitude={self.magnitude!r}, phase={self.phase!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoherentParams):
            return NotImplemented
        return self.magnitude == other.magnitude and self.phase == other.phase


class PureState:
    """Normalized pure state sum_n c_n |n> on a truncated number basis.

    ``amplitudes[n]`` is c_n for n = 0..n_max.  The constructor accepts
    vectors within ``NORM_TOL`` of unit norm and rescales them exactly, so
    downstream identities hold at machine precision.  Use
    :meth:`from_unnormalized` for arbitrary nonzero vectors.

    ``truncation_adequate`` records whether the constructor certified that
    the top five basis levels carry negligible weight (so the cutoff is
    comfortable, not merely sufficient).
    """

    __slots__ = ("amplitudes", "truncation_adequate")

    def __init__(self, amplitudes, truncation_adequate: bool = False):
        amps = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidParam("amplitudes must form a non-empty 1-D vector")
        if not np.all(np.isfinite(amps.real)) or not np.all(np.isfinite(amps.imag)):
            raise InvalidParam("amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidParam(
                f"vector norm {norm:.6g} is not 1; use PureState.from_unnormalized"
            )
        amps = amps / norm
        amps.setflags(write=False)
        self.amplitudes = amps
        self.truncation_adequate = bool(truncation_adequate)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = float(np.linalg.norm(amps))
        if norm == 0.0 or not math.isfinite(norm):
            raise InvalidParam("cannot normalize a zero or non-finite vector")
        return cls(amps / norm)

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    def probabilities(self) -> np.ndarray:
        """Photon-number distribution |c_n|^2."""
        return np.abs(self.amplitudes) ** 2

    def __repr__(self) -> str:
        return f"PureState(n_max={self.n_max}, <n>={expectation_n(self):.4g})"


def number_state(n: int, n_max: int | None = None) -> PureState:
    """The eigenstate |n> on a basis truncated at ``n_max`` (default n)."""
    n = int(n)
    if n < 0:
        raise InvalidParam("photon number must be non-negative")
    if n_max is None:
        n_max = n
    if n_max < n:
        raise InvalidParam("n_max must be at least n")
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[n] = 1.0
    return PureState(amps, truncation_adequate=True)


def coherent_state(
    params: CoherentParams, n_max: int, tail_tol: float = DEFAULT_TAIL_TOL
) -> PureState:
    """Coherent state with Poissonian number statistics, truncated at ``n_max``.

    Amplitudes are evaluated in the log domain, so large cutoffs do not
    overflow the factorials.  After truncation the state is renormalized.

    Raises
    ------
    TruncationTooSmall
        If the Poisson mass beyond ``n_max`` is ``tail_tol`` or more.
    """
    if not isinstance(params, CoherentParams):
        params = CoherentParams(*params) if isinstance(params, tuple) else CoherentParams(params)
    n_max = int(n_max)
    if n_max < 0:
        raise InvalidParam("n_max must be non-negative")
    if not (0.0 < tail_tol < 1.0):
        raise InvalidParam("tail_tol must lie in (0, 1)")

    lam = params.mean_photon_number
    n = np.arange(n_max + 1)
    if lam == 0.0:
        weights = np.zeros(n_max + 1)
        weights[0] = 1.0
    else:
        log_w = -lam + n * math.log(lam) - gammaln(n + 1.0)
        weights = np.exp(log_w)

    tail = max(1.0 - float(weights.sum()), 0.0)
    if tail >= tail_tol:
        raise TruncationTooSmall(
            f"mass {tail:.3e} beyond n_max={n_max} exceeds tail_tol={tail_tol:.3e}"
        )
    top_band = float(weights[max(0, n_max - 4):].sum()) + tail
    adequate = top_band < tail_tol

    amps = np.sqrt(weights) * np.exp(-1j * params.phase * n)
    amps /= np.linalg.norm(amps)
    return PureState(amps, truncation_adequate=adequate)


def choose_truncation(params: CoherentParams, tail_tol: float) -> int:
    """Smallest cutoff leaving Poisson mass below ``tail_tol`` past it.

    The tail is certified by direct cumulative summation, not by a bound.
    """
    if not (0.0 < tail_tol < 1.0):
        raise InvalidParam("tail_tol must lie in (0, 1)")
    if tail_tol < _MIN_CERTIFIABLE_TAIL:
        raise InvalidParam(
            f"tail_tol below {_MIN_CERTIFIABLE_TAIL:g} cannot be certified in double precision"
        )
    lam = params.mean_photon_number
    if lam == 0.0:
        return 0

    hard_cap = int(lam + 20.0 * math.sqrt(lam) + 200.0)
    weight = math.exp(-lam)
    cumulative = weight
    n = 0
    while 1.0 - cumulative >= tail_tol:
        n += 1
        if n > hard_cap:
            raise InvalidParam("tail tolerance not reachable; check parameters")
        weight *= lam / n
        cumulative += weight
    return n


def expectation_a(state: PureState) -> complex:
    """Field-amplitude expectation sum_n c_n^* c_{n+1} sqrt(n+1)."""
    c = state.amplitudes
    if c.size < 2:
        return 0j
    n = np.arange(1, c.size)
    return complex(np.sum(np.conj(c[:-1]) * c[1:] * np.sqrt(n)))


def expectation_n(state: PureState) -> float:
    """Mean photon number sum_n n |c_n|^2."""
    p = state.probabilities()
    return float(np.sum(np.arange(p.size) * p))


def variance_n(state: PureState) -> float:
    """Photon-number variance."""
    p = state.probabilities()
    n = np.arange(p.size)
    mean = float(np.sum(n * p))
    return max(float(np.sum(n * n * p)) - mean**2, 0.0)


def expectation_parity(state: PureState) -> float:
    """Parity expectation sum_n (-1)^n |c_n|^2, always in [-1, 1]."""
    p = state.probabilities()
    signs = np.where(np.arange(p.size) % 2 == 0, 1.0, -1.0)
    return float(np.sum(signs * p))


def expectation_parity_squared(state: PureState) -> float:
    """Expectation of the squared parity: sum_n ((-1)^n)^2 |c_n|^2.

    Equals 1 at machine precision for every normalized state.
    """
    p = state.probabilities()
    signs = np.where(np.arange(p.size) % 2 == 0, 1.0, -1.0)
    return float(np.sum(signs * signs * p))


def overlap(a: PureState, b: PureState) -> complex:
    """Inner product <a|b>; shorter vectors are padded with zeros."""
    ca, cb = a.amplitudes, b.amplitudes
    m = min(ca.size, cb.size)
    return complex(np.vdot(ca[:m], cb[:m]))


def fidelity(a: PureState, b: PureState) -> float:
    """State fidelity |<a|b>|^2."""
    return abs(overlap(a, b)) ** 2


def random_state(
    n_max: int, rng: np.random.Generator, min_level: int = 0
) -> PureState:
    """Haar-like random pure state, optionally with no weight below ``min_level``."""
    if min_level < 0 or min_level > n_max:
        raise InvalidParam("min_level must lie in [0, n_max]")
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    size = n_max + 1 - min_level
    amps[min_level:] = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return PureState.from_unnormalized(amps)
