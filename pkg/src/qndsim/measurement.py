"""Gaussian-window photon-number readout with adjustable resolution.

A readout of resolution ``delta_n`` that returns the pointer value ``n_m``
acts on a pure state by multiplying each number amplitude with a Gaussian
window centered at the outcome,

    w(n) = (2 pi delta_n^2)**-0.25 * exp(-(n - n_m)^2 / (4 delta_n^2)).

The squared norm of the filtered vector is the outcome probability density
(per unit ``n_m``), and renormalizing the filtered vector gives the
conditional post-measurement state.  Density and coherence profiles over an
outcome grid, quadrature averages over outcomes, and the equivalent phase
noise of the back-action are all derived from that single kernel.

Everything is a pure function of its inputs; sweeps over outcome grids are
vectorized internally and safe to parallelize externally.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GridTooNarrow, InvalidParam, ToleranceWarning, ZeroProbability
from .fock import PureState, expectation_a

# Densities below this are treated as a vanished outcome: renormalizing the
# filtered vector there would divide rounding noise by rounding noise.
DENSITY_FLOOR = 1e-300

# Inferred excess phase noise more negative than this is physically
# inconsistent input rather than round-off.
_EXCESS_NOISE_TOL = 1e-9

_CHUNK = 4096


def _check_delta_n(delta_n: float, allow_inf: bool = False) -> float:
    delta_n = float(delta_n)
    if math.isnan(delta_n) or delta_n <= 0.0:
        raise InvalidParam("delta_n must be positive")
    if math.isinf(delta_n) and not allow_inf:
        raise InvalidParam("delta_n must be finite")
    return delta_n


def window_amplitudes(n: np.ndarray, n_m: float, delta_n: float) -> np.ndarray:
    """Gaussian window w(n) applied to each number level by the readout."""
    return (2.0 * math.pi * delta_n**2) ** -0.25 * np.exp(
        -((n - n_m) ** 2) / (4.0 * delta_n**2)
    )


class FilteredState(NamedTuple):
    """Amplitudes after the measurement window, before renormalization.

    ``norm_squared`` is the squared norm of ``amplitudes`` and equals the
    outcome probability density.
    """

    amplitudes: np.ndarray
    norm_squared: float


def apply_measurement_operator(
    state: PureState, n_m: float, delta_n: float
) -> FilteredState:
    """Apply the Gaussian readout window for outcome ``n_m`` without renormalizing."""
    delta_n = _check_delta_n(delta_n)
    n = np.arange(state.amplitudes.size)
    filtered = state.amplitudes * window_amplitudes(n, float(n_m), delta_n)
    norm_sq = float(np.sum(np.abs(filtered) ** 2))
    return FilteredState(filtered, norm_sq)


def _profiles(
    state: PureState, n_m: np.ndarray, delta_n: float
) -> tuple[np.ndarray, np.ndarray]:
    """Density P(n_m) and coherence-weighted density <a>_f(n_m) P(n_m) on a grid.

    Both are evaluated from first principles: window the amplitudes at each
    grid point, then contract.  Chunked to bound temporary memory.
    """
    c = state.amplitudes
    n = np.arange(c.size)
    root = np.sqrt(n[1:])
    density = np.empty(n_m.size)
    coherence = np.empty(n_m.size, dtype=np.complex128)
    for start in range(0, n_m.size, _CHUNK):
        block = n_m[start : start + _CHUNK]
        w = (2.0 * math.pi * delta_n**2) ** -0.25 * np.exp(
            -((n[None, :] - block[:, None]) ** 2) / (4.0 * delta_n**2)
        )
        filtered = c[None, :] * w
        density[start : start + _CHUNK] = np.sum(np.abs(filtered) ** 2, axis=1)
        coherence[start : start + _CHUNK] = np.sum(
            np.conj(filtered[:, :-1]) * filtered[:, 1:] * root[None, :], axis=1
        )
    return density, coherence


def outcome_density(state: PureState, n_m, delta_n: float):
    """Probability density of reading ``n_m``; accepts a scalar or an array.

    Equals (2 pi delta_n^2)**-0.5 sum_n |c_n|^2 exp(-(n - n_m)^2 / (2 delta_n^2)),
    the squared norm of the filtered vector.
    """
    delta_n = _check_delta_n(delta_n)
    grid = np.atleast_1d(np.asarray(n_m, dtype=float))
    density, _ = _profiles(state, grid, delta_n)
    return float(density[0]) if np.isscalar(n_m) or np.ndim(n_m) == 0 else density


def coherence_density(state: PureState, n_m, delta_n: float):
    """Field expectation of the filtered, unnormalized state: <a>_f(n_m) P(n_m)."""
    delta_n = _check_delta_n(delta_n)
    grid = np.atleast_1d(np.asarray(n_m, dtype=float))
    _, coherence = _profiles(state, grid, delta_n)
    return complex(coherence[0]) if np.isscalar(n_m) or np.ndim(n_m) == 0 else coherence


@dataclass(frozen=True)
class OutcomeRecord:
    """One readout: outcome, its density, the conditional state, its coherence."""

    n_m: float
    density: float
    post_state: PureState
    coherence: complex


def measure(state: PureState, n_m: float, delta_n: float) -> OutcomeRecord:
    """Condition ``state`` on the outcome ``n_m``.

    Raises
    ------
    ZeroProbability
        If the outcome density underflows, i.e. ``n_m`` lies far outside the
        state's support.
    """
    filtered = apply_measurement_operator(state, n_m, delta_n)
    if filtered.norm_squared < DENSITY_FLOOR:
        raise ZeroProbability(
            f"outcome {n_m} has vanishing density for this state at delta_n={delta_n}"
        )
    post = PureState.from_unnormalized(filtered.amplitudes)
    return OutcomeRecord(
        n_m=float(n_m),
        density=filtered.norm_squared,
        post_state=post,
        coherence=expectation_a(post),
    )


def coherence_after(state: PureState, n_m, delta_n: float):
    """Field expectation of the conditional state after reading ``n_m``.

    Scalar in, complex out; array in, complex array out.

    Raises
    ------
    ZeroProbability
        Where the outcome density underflows.
    """
    delta_n = _check_delta_n(delta_n)
    grid = np.atleast_1d(np.asarray(n_m, dtype=float))
    density, coherence = _profiles(state, grid, delta_n)
    if np.any(density < DENSITY_FLOOR):
        raise ZeroProbability("an outcome lies far outside the state's support")
    ratio = coherence / density
    return complex(ratio[0]) if np.isscalar(n_m) or np.ndim(n_m) == 0 else ratio


def integer_half_integer_ratio(state: PureState, delta_n: float) -> float:
    """Total likelihood of integer outcomes relative to half-integer outcomes.

    Sums the outcome density over all integers and over all half-integers
    covering the state's support.  The envelope of the number distribution
    cancels between the two sums, so the ratio isolates the periodic
    quantization contrast and is the same for every state.
    """
    delta_n = _check_delta_n(delta_n)
    pad = int(math.ceil(8.0 * delta_n)) + 1
    integers = np.arange(-pad, state.n_max + pad + 1, dtype=float)
    p_int, _ = _profiles(state, integers, delta_n)
    p_half, _ = _profiles(state, integers + 0.5, delta_n)
    return float(p_int.sum() / p_half.sum())


@dataclass(frozen=True)
class MeasurementConfig:
    """Resolution plus a uniform outcome grid for quadrature over outcomes.

    For full-line averages the grid must cover the state's support with
    roughly eight resolution widths of padding; ``adequate`` builds such a
    grid with a step that also resolves the unit-period fringes.
    """

    delta_n: float
    grid_min: float
    grid_max: float
    grid_step: float
    quad_tol: float = 1e-8

    def __post_init__(self):
        _check_delta_n(self.delta_n)
        if not (math.isfinite(self.grid_min) and math.isfinite(self.grid_max)):
            raise InvalidParam("grid bounds must be finite")
        if self.grid_step <= 0 or not math.isfinite(self.grid_step):
            raise InvalidParam("grid_step must be positive")
        if self.grid_min >= self.grid_max:
            raise InvalidParam("grid_min must be below grid_max")
        if self.quad_tol <= 0:
            raise InvalidParam("quad_tol must be positive")

    @classmethod
    def adequate(
        cls, delta_n: float, n_max: int, quad_tol: float = 1e-8, pad: float = 8.0
    ) -> "MeasurementConfig":
        delta_n = _check_delta_n(delta_n)
        step = min(delta_n / 8.0, 0.25)
        return cls(
            delta_n=delta_n,
            grid_min=-pad * delta_n,
            grid_max=n_max + pad * delta_n,
            grid_step=step,
            quad_tol=quad_tol,
        )

    def grid(self) -> np.ndarray:
        count = int(math.ceil((self.grid_max - self.grid_min) / self.grid_step - 1e-9))
        return self.grid_min + self.grid_step * np.arange(count + 1)

    def covers(self, n_max: int, pad: float = 8.0) -> bool:
        return (
            self.grid_min <= -pad * self.delta_n
            and self.grid_max >= n_max + pad * self.delta_n
        )


def trapezoid(values: np.ndarray, step: float):
    """Composite trapezoid rule on a uniform grid."""
    return step * (values.sum() - 0.5 * (values[0] + values[-1]))


def average_coherence(state: PureState, config: MeasurementConfig) -> complex:
    """Outcome-averaged coherence: quadrature of <a>_f(n_m) P(n_m) over the grid.

    For any state this equals exp(-1/(8 delta_n^2)) times the initial field
    expectation, up to quadrature error.

    Raises
    ------
    GridTooNarrow
        If the probability mass captured by the grid falls short of
        ``1 - quad_tol``.
    """
    grid = config.grid()
    density, coherence = _profiles(state, grid, config.delta_n)
    mass = float(trapezoid(density, config.grid_step))
    if mass < 1.0 - config.quad_tol:
        raise GridTooNarrow(
            f"grid captures probability mass {mass:.12g} < 1 - quad_tol"
        )
    return complex(trapezoid(coherence, config.grid_step))


def decoherence_factor(delta_n: float) -> float:
    """Average coherence reduction exp(-1/(8 delta_n^2)) caused by one readout."""
    delta_n = _check_delta_n(delta_n, allow_inf=True)
    if math.isinf(delta_n):
        return 1.0
    return math.exp(-1.0 / (8.0 * delta_n**2))


def equivalent_phase_noise(delta_n: float) -> float:
    """Variance of the Gaussian phase noise equivalent to one readout.

    Returns 1/(4 delta_n^2): the minimum phase disturbance compatible with
    number resolution ``delta_n``.  An infinite ``delta_n`` (no measurement)
    gives zero.
    """
    delta_n = _check_delta_n(delta_n, allow_inf=True)
    if math.isinf(delta_n):
        return 0.0
    return 1.0 / (4.0 * delta_n**2)


def infer_excess_noise(observed_ratio: float, delta_n: float) -> float:
    """Excess phase-noise variance beyond the measurement minimum.

    ``observed_ratio`` is the measured coherence reduction
    |<a>_after(avg)| / |<a>_before| in (0, 1].  The total phase-noise
    variance is -2 ln(ratio); subtracting the minimum 1/(4 delta_n^2) gives
    the excess.  Values negative within round-off are clamped to zero with a
    warning; more negative values are inconsistent inputs.
    """
    observed_ratio = float(observed_ratio)
    if not (0.0 < observed_ratio <= 1.0):
        raise InvalidParam("observed_ratio must lie in (0, 1]")
    delta_n = _check_delta_n(delta_n, allow_inf=True)
    total = -2.0 * math.log(observed_ratio)
    excess = total - equivalent_phase_noise(delta_n)
    if excess < 0.0:
        if excess < -_EXCESS_NOISE_TOL:
            raise InvalidParam(
                f"observed_ratio {observed_ratio} exceeds the ideal bound for "
                f"delta_n={delta_n}: excess {excess:.3e}"
            )
        warnings.warn(
            f"excess noise {excess:.3e} clamped to 0 within tolerance",
            ToleranceWarning,
            stacklevel=2,
        )
        excess = 0.0
    return excess
