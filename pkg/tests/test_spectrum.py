"""Fourier-analysis operations against closed forms and the direct-summation oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwmlp import energy, fourier_row, full_spectrum, harmonic, thd, validate_level_set
from pwmlp.exceptions import IndexOutOfRange, ZeroSignal
from pwmlp.model import Waveform
from pwmlp.oracle import spectrum_direct

#: Distortion of a +/-2 square wave keeping only the fundamental, N=2048,
#: computed by direct spectrum summation over all 1024 harmonics.
SQUARE_WAVE_THD_N2048 = 0.1894298950781209


def square_wave(n, amplitude=2.0):
    return np.where(np.arange(n) < n // 2, amplitude, -amplitude)


class TestFourierRow:
    def test_fourth_roots_of_unity(self):
        row = fourier_row(1, 4)
        assert np.allclose(row.re, 0.5 * np.array([1, 0, -1, 0]), atol=1e-15)
        assert np.allclose(row.im, 0.5 * np.array([0, -1, 0, 1]), atol=1e-15)

    def test_nyquist_row_is_real(self):
        row = fourier_row(2, 4)
        assert np.allclose(row.re, 0.5 * np.array([1, -1, 1, -1]), atol=1e-15)
        assert np.allclose(row.im, 0.0, atol=1e-15)

    def test_row_norm_by_direct_summation(self):
        row = fourier_row(1, 2048)
        # |entry|^2 sums to 4/N for any k in range.
        assert row.norm_sq == pytest.approx(4 / 2048, abs=1e-15)

    @pytest.mark.parametrize("k", [0, -1, 1025])
    def test_index_out_of_range(self, k):
        with pytest.raises(IndexOutOfRange):
            fourier_row(k, 2048)


class TestHarmonic:
    def test_zero_signal(self):
        assert harmonic(np.zeros(64), 3) == 0

    def test_square_wave_fundamental_geometric_series(self):
        n, a = 2048, 2.0
        x = square_wave(n, a)
        closed = (8 * a / n) / (1 - np.exp(-2j * np.pi / n))
        assert abs(harmonic(x, 1) - closed) < 1e-10
        # magnitude is within 1e-5 * a of the continuous-time 4a/pi
        assert abs(abs(closed) - 4 * a / np.pi) < 1e-5 * a

    def test_square_wave_even_harmonics_vanish(self):
        x = square_wave(2048)
        assert abs(harmonic(x, 2)) < 1e-12

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_linearity(self, seed):
        rng = np.random.default_rng(seed)
        x, y = rng.standard_normal((2, 128))
        a, b = rng.standard_normal(2)
        lhs = harmonic(a * x + b * y, 5)
        rhs = a * harmonic(x, 5) + b * harmonic(y, 5)
        assert abs(lhs - rhs) < 1e-12


class TestFullSpectrum:
    def test_all_zero(self):
        assert np.all(full_spectrum(np.zeros(32)) == 0)

    def test_square_wave_series_pattern(self):
        n, a = 2048, 2.0
        spec = full_spectrum(square_wave(n, a))
        ks = np.arange(1, n // 2 + 1)
        odd = ks % 2 == 1
        # Odd harmonics sit near -4a/(k*pi) on the imaginary axis (the exact
        # sampled value carries a constant 4a/N real offset); even ones vanish.
        assert np.abs(spec[~odd]).max() < 1e-12
        approx = 4 * a / n - 1j * 4 * a / (np.pi * ks[odd])
        assert np.abs(spec[odd] - approx).max() < 5e-3

    def test_matches_per_harmonic_calls(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal(129)  # odd length
        spec = full_spectrum(x)
        assert spec.size == 64
        for k in (1, 2, 31, 64):
            assert abs(spec[k - 1] - harmonic(x, k)) < 1e-12

    def test_matches_direct_summation_oracle(self):
        levels = validate_level_set([-2.0, 0.0, 2.0])
        rng = np.random.default_rng(42)
        for _ in range(5):
            x = levels.levels[rng.integers(0, 3, size=256)]
            assert np.abs(full_spectrum(x) - spectrum_direct(x)).max() < 1e-10


class TestEnergy:
    def test_zeros(self):
        assert energy(np.zeros(16)) == 0

    def test_constant(self):
        assert energy(np.full(37, 2.0)) == pytest.approx(4.0, abs=1e-15)

    def test_square_wave(self):
        assert energy(square_wave(2048)) == pytest.approx(4.0, abs=1e-15)

    def test_parseval_zero_mean_zero_nyquist(self):
        # Sum over k = 1 .. N/2-1 of |f_k(x)|^2 equals (2/N) * sum x^2 when
        # the mean and the Nyquist coefficient vanish.
        rng = np.random.default_rng(3)
        n = 256
        x = rng.standard_normal(n)
        x -= x.mean()
        x -= x * 0  # keep dtype
        sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        x -= sign * (x @ sign) / n  # remove Nyquist component
        spec = full_spectrum(x)[: n // 2 - 1]
        lhs = float(np.abs(spec) ** 2 @ np.ones(spec.size))
        rhs = 2.0 * energy(x)
        assert abs(lhs - rhs) < 1e-10


class TestThd:
    def test_square_wave_frozen_value(self):
        assert thd(square_wave(2048), [1]) == pytest.approx(SQUARE_WAVE_THD_N2048, abs=1e-12)

    def test_all_power_in_kept_set(self):
        n = 64
        t = np.arange(n)
        x = np.cos(2 * np.pi * 3 * t / n)
        assert thd(x, [3]) == pytest.approx(0.0, abs=1e-12)

    def test_zero_signal_guard(self):
        with pytest.raises(ZeroSignal):
            thd(np.zeros(64), [1])

    @given(st.floats(min_value=1e-3, max_value=1e3))
    @settings(max_examples=25, deadline=None)
    def test_scale_invariance(self, alpha):
        x = square_wave(256)
        assert thd(alpha * x, [1]) == pytest.approx(thd(x, [1]), abs=1e-9)

    def test_result_in_unit_interval(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            x = rng.standard_normal(200)
            v = thd(x, [1, 5])
            assert 0.0 <= v <= 1.0

    def test_waveform_objects_accepted(self):
        ls = validate_level_set([-2.0, 0.0, 2.0])
        w = Waveform(square_wave(64), ls, quantized=True)
        assert thd(w, [1]) == pytest.approx(thd(square_wave(64), [1]), abs=0)
