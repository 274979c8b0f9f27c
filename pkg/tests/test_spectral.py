import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ctdt.dt import Sequence
from ctdt.errors import BadBin, OriginEvaluation
from ctdt.spectral import dft, dtft_sample, leakage_ratio, parseval_mismatch, z_transform_finite


class TestZTransform:
    def test_geometric(self):
        x = Sequence([1.0, 0.5, 0.25])
        assert z_transform_finite(x, 2.0) == pytest.approx(1 + 0.25 + 0.0625)

    def test_origin(self):
        with pytest.raises(OriginEvaluation):
            z_transform_finite(Sequence([1.0, 1.0]), 0.0)
        assert z_transform_finite(Sequence([3.0]), 0.0) == 3.0


class TestDFT:
    def test_matches_fft(self, rng):
        x = rng.standard_normal(13)
        assert np.allclose(dft(Sequence(x)).bins, np.fft.fft(x), atol=1e-11)

    def test_equals_sampled_dtft(self, rng):
        x = Sequence(rng.standard_normal(8))
        spec = dft(x)
        for k in range(8):
            assert spec.bins[k] == dtft_sample(x, 2 * np.pi * k / 8)

    def test_cosine_bins(self):
        n = np.arange(8)
        spec = dft(Sequence(np.cos(2 * np.pi * 2 * n / 8)))
        mags = np.abs(spec.bins)
        assert mags[2] == pytest.approx(4.0, abs=1e-12) and mags[6] == pytest.approx(4.0, abs=1e-12)
        assert np.all(np.delete(mags, [2, 6]) < 1e-12)

    def test_bin_frequencies(self):
        spec = dft(Sequence(np.zeros(8), fs=8.0))
        assert spec.bin_width == pytest.approx(2 * np.pi)
        assert spec.nyquist_bin == 4
        assert spec.signed_omega[5] == pytest.approx(-3 * 2 * np.pi)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=40))
    def test_parseval(self, values):
        x = Sequence(values)
        if np.sum(x.samples**2) < 1e-6:
            return
        assert parseval_mismatch(x) < 1e-9


class TestLeakage:
    def test_integer_cycles_no_leakage(self):
        n = np.arange(16)
        assert leakage_ratio(Sequence(np.cos(2 * np.pi * 2 * n / 16)), 2) < 1e-20

    def test_half_bin_leaks(self):
        n = np.arange(16)
        assert leakage_ratio(Sequence(np.cos(2 * np.pi * 2.5 * n / 16)), 2) > 0.1

    def test_bad_bin(self):
        with pytest.raises(BadBin):
            leakage_ratio(Sequence(np.ones(8)), 4)
