import math

import numpy as np
import pytest

from qndsim import (
    CoherentParams,
    InvalidParam,
    PureState,
    TruncationTooSmall,
    choose_truncation,
    coherent_state,
    expectation_a,
    expectation_n,
    expectation_parity,
    expectation_parity_squared,
    number_state,
    random_state,
    variance_n,
)


def poisson_weight(lam, n):
    # independent oracle: exact integer factorial
    return math.exp(-lam) * lam**n / math.factorial(n)


def poisson_tail_beyond(lam, n_max):
    return 1.0 - sum(poisson_weight(lam, n) for n in range(n_max + 1))


class TestCoherentParams:
    def test_alpha_convention(self):
        p = CoherentParams(2.0, math.pi / 3)
        assert p.alpha == pytest.approx(2.0 * np.exp(-1j * math.pi / 3))

    def test_phase_folding(self):
        assert CoherentParams(1.0, 3 * math.pi).phase == pytest.approx(math.pi)
        assert CoherentParams(1.0, -math.pi).phase == pytest.approx(math.pi)
        assert -math.pi < CoherentParams(1.0, -5.5).phase <= math.pi

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidParam):
            CoherentParams(-1.0)
        with pytest.raises(InvalidParam):
            CoherentParams(math.nan)
        with pytest.raises(InvalidParam):
            CoherentParams(1.0, math.inf)


class TestPureState:
    def test_snaps_to_unit_norm(self):
        state = PureState([1 / math.sqrt(2), 1 / math.sqrt(2)])
        assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) < 1e-12

    def test_rejects_unnormalized(self):
        with pytest.raises(InvalidParam):
            PureState([1.0, 1.0])

    def test_from_unnormalized(self):
        state = PureState.from_unnormalized([3.0, 4.0])
        assert state.amplitudes[0] == pytest.approx(0.6)
        assert state.amplitudes[1] == pytest.approx(0.8)
        with pytest.raises(InvalidParam):
            PureState.from_unnormalized([0.0, 0.0])

    def test_rejects_bad_shapes(self):
        with pytest.raises(InvalidParam):
            PureState(np.ones((2, 2)) / 2)
        with pytest.raises(InvalidParam):
            PureState([])
        with pytest.raises(InvalidParam):
            PureState([complex(math.nan, 0.0)])

    def test_number_state(self):
        state = number_state(5)
        assert state.n_max == 5
        assert state.amplitudes[5] == 1.0
        assert number_state(2, n_max=10).n_max == 10
        with pytest.raises(InvalidParam):
            number_state(3, n_max=1)


class TestCoherentState:
    def test_vacuum(self):
        state = coherent_state(CoherentParams(0.0), 10)
        assert state.amplitudes[0] == 1.0
        assert np.all(state.amplitudes[1:] == 0.0)

    def test_mean_photon_number(self):
        state = coherent_state(CoherentParams(3.0), 60)
        assert expectation_n(state) == pytest.approx(9.0, abs=1e-9)

    def test_poisson_weight_at_peak(self):
        # oracle: e^-9 9^9 / 9!
        state = coherent_state(CoherentParams(3.0), 60)
        assert abs(state.amplitudes[9]) ** 2 == pytest.approx(
            poisson_weight(9.0, 9), rel=1e-12
        )

    def test_truncation_error(self):
        with pytest.raises(TruncationTooSmall):
            coherent_state(CoherentParams(3.0), 15)

    def test_adequacy_flag(self):
        assert coherent_state(CoherentParams(3.0), 60).truncation_adequate
        # minimal cutoff is sufficient but not comfortable
        n_min = choose_truncation(CoherentParams(3.0), 1e-12)
        assert not coherent_state(CoherentParams(3.0), n_min).truncation_adequate

    def test_normalized_within_1e12(self):
        for mag in (0.5, 1.0, 3.0, 6.0):
            state = coherent_state(CoherentParams(mag), choose_truncation(CoherentParams(mag), 1e-12))
            assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) < 1e-12

    def test_phase_enters_amplitudes(self):
        state = coherent_state(CoherentParams(2.0, 0.7), 40)
        ref = coherent_state(CoherentParams(2.0, 0.0), 40)
        n = np.arange(41)
        assert np.allclose(state.amplitudes, ref.amplitudes * np.exp(-1j * 0.7 * n))


class TestChooseTruncation:
    def test_vacuum(self):
        assert choose_truncation(CoherentParams(0.0), 1e-12) == 0

    def test_matches_cumulative_oracle(self):
        params = CoherentParams(3.0)
        n_max = choose_truncation(params, 1e-12)
        assert poisson_tail_beyond(9.0, n_max) < 1e-12
        assert poisson_tail_beyond(9.0, n_max - 1) >= 1e-12
        assert n_max <= 9 + 10 * 3 + 20

    def test_median_case(self):
        # Poisson(9) median is 9: half the mass sits at or below it
        assert choose_truncation(CoherentParams(3.0), 0.5) == 9

    def test_bound_holds_across_amplitudes(self):
        for mag in (0.5, 1.0, 2.0, 4.0, 6.0):
            n_max = choose_truncation(CoherentParams(mag), 1e-12)
            assert n_max <= mag**2 + 10 * mag + 20

    def test_rejects_bad_tolerance(self):
        for tol in (0.0, 1.0, -0.1, 1e-16):
            with pytest.raises(InvalidParam):
                choose_truncation(CoherentParams(1.0), tol)


class TestExpectations:
    def test_a_on_number_state(self):
        assert expectation_a(number_state(5)) == 0j

    def test_a_single_offdiagonal(self):
        state = PureState.from_unnormalized([1.0, 1.0])
        assert expectation_a(state) == pytest.approx(0.5)

    def test_a_coherent_eigenvalue(self):
        params = CoherentParams(3.0, math.pi / 4)
        state = coherent_state(params, 60)
        assert expectation_a(state) == pytest.approx(params.alpha, abs=1e-9)

    def test_a_eigenvalue_across_magnitudes(self):
        for mag in (0.5, 1.5, 3.0, 6.0):
            params = CoherentParams(mag, 0.3)
            n_max = choose_truncation(params, 1e-12)
            state = coherent_state(params, n_max)
            assert expectation_a(state) == pytest.approx(params.alpha, abs=1e-5)

    def test_n_values(self):
        assert expectation_n(number_state(0)) == 0.0
        superpose = PureState.from_unnormalized([1.0, 0.0, 1.0])
        assert expectation_n(superpose) == pytest.approx(1.0)
        assert expectation_n(coherent_state(CoherentParams(3.0), 60)) == pytest.approx(9.0, abs=1e-8)

    def test_variance(self):
        assert variance_n(number_state(4)) == pytest.approx(0.0, abs=1e-12)
        assert variance_n(coherent_state(CoherentParams(3.0), 60)) == pytest.approx(9.0, abs=1e-7)

    def test_parity_values(self):
        assert expectation_parity(number_state(0)) == 1.0
        assert expectation_parity(number_state(1)) == -1.0
        # coherent-state identity exp(-2|alpha|^2), cross-checked by direct sum
        state = coherent_state(CoherentParams(3.0), 60)
        direct = sum(
            (-1) ** n * poisson_weight(9.0, n) for n in range(61)
        )
        value = expectation_parity(state)
        assert value == pytest.approx(math.exp(-18.0), abs=1e-12)
        assert value == pytest.approx(direct, abs=1e-12)

    def test_parity_squared_is_one(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            state = random_state(int(rng.integers(1, 50)), rng)
            assert expectation_parity_squared(state) == pytest.approx(1.0, abs=5e-14)

    def test_random_state_support(self):
        rng = np.random.default_rng(4)
        state = random_state(20, rng, min_level=7)
        assert np.all(state.amplitudes[:7] == 0.0)
        assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) < 1e-12
