import numpy as np
import pytest
from scipy import signal

from ctdt.dt import (
    DifferenceEquation,
    FilterKind,
    Sequence,
    classify,
    convolve,
    dt_freq_response,
    geometric_mode,
    impulse_response_dt,
    mode_period,
    simulate,
    step_response_dt,
)
from ctdt.errors import NonPositive, PoleOnCircleAtGridPoint, ZeroLeadingFeedback


class TestSequence:
    def test_immutable(self):
        x = Sequence([1.0, 2.0])
        with pytest.raises(ValueError):
            x.samples[0] = 3.0

    def test_times(self):
        assert np.allclose(Sequence(np.zeros(3), fs=2.0, n0=1).times, [0.5, 1.0, 1.5])

    def test_rejects_bad_rate(self):
        with pytest.raises(NonPositive):
            Sequence([1.0], fs=0.0)


class TestDifferenceEquation:
    def test_normalizes_a0(self):
        de = DifferenceEquation([2.0, 4.0], [2.0, -1.0])
        assert de.b == (1.0, 2.0) and de.a == (1.0, -0.5)

    def test_zero_leading_feedback(self):
        with pytest.raises(ZeroLeadingFeedback):
            DifferenceEquation([1.0], [0.0, 1.0])

    def test_classify(self):
        assert classify(DifferenceEquation([1.0, -1.0])) is FilterKind.FIR
        assert classify(DifferenceEquation([1.0], [1.0, -0.5])) is FilterKind.IIR


class TestSimulation:
    def test_against_lfilter(self, rng):
        for _ in range(20):
            b = rng.standard_normal(3)
            a = np.concatenate([[1.0], 0.4 * rng.standard_normal(2)])
            x = rng.standard_normal(50)
            y = simulate(DifferenceEquation(b, a), Sequence(x)).samples
            assert np.allclose(y, signal.lfilter(b, a, x), atol=1e-12)

    def test_accumulator_impulse_is_step(self):
        h = impulse_response_dt(DifferenceEquation([1.0], [1.0, -1.0]), 8).samples
        assert np.array_equal(h, np.ones(8))

    def test_accumulator_step_is_ramp(self):
        s = step_response_dt(DifferenceEquation([1.0], [1.0, -1.0]), 5).samples
        assert np.array_equal(s, [1.0, 2.0, 3.0, 4.0, 5.0])

    def test_zero_input(self):
        y = simulate(DifferenceEquation([0.3, 0.2], [1.0, 0.5]), Sequence(np.zeros(10)))
        assert not np.any(y.samples)

    def test_n_out_extends_with_zero_input(self):
        y = simulate(DifferenceEquation([1.0], [1.0, -0.5]), Sequence([1.0]), 4).samples
        assert np.array_equal(y, [1.0, 0.5, 0.25, 0.125])

    def test_convolution_matches_recursion(self, rng):
        de = DifferenceEquation([0.5, 0.2], [1.0, -0.3, 0.1])
        x = Sequence(rng.standard_normal(40))
        h = impulse_response_dt(de, 200)
        assert np.allclose(convolve(x, h, 40).samples, simulate(de, x).samples, atol=1e-12)


class TestModes:
    def test_geometric(self):
        assert np.allclose(geometric_mode(-0.5, 2.0, 4), [2.0, -1.0, 0.5, -0.25])

    def test_nyquist_period(self):
        assert mode_period(-1.0) == pytest.approx(2.0)


class TestFrequencyResponse:
    def test_matches_freqz(self):
        b, a = [0.2, 0.3], [1.0, -0.5]
        f = np.linspace(0, 0.5, 33)
        _, ref = signal.freqz(b, a, worN=f, fs=1.0)
        fr = dt_freq_response(DifferenceEquation(b, a), 1.0, f)
        assert np.allclose(fr.values, ref, rtol=1e-12)

    def test_pole_on_circle(self):
        with pytest.raises(PoleOnCircleAtGridPoint):
            dt_freq_response(DifferenceEquation([1.0], [1.0, -1.0]), 1.0, [0.0, 0.1])
        with pytest.raises(PoleOnCircleAtGridPoint):
            dt_freq_response(DifferenceEquation([1.0], [1.0, 1.0]), 8.0, [4.0])

    def test_out_of_band_warning(self):
        fr = dt_freq_response(DifferenceEquation([1.0]), 1.0, [0.7])
        assert fr.warning is not None
