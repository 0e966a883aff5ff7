"""The end-to-end pipeline and the estimator/transformer front ends."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from pwmlp import LevelQuantizer, PwmDesigner, design, energy, harmonic_spec, validate_level_set
from pwmlp.exceptions import InfeasibleTargets, ValidationError
from pwmlp.refine import clamp_values

THREE = [-2.0, 0.0, 2.0]
TARGETS = {1: 1 - 1j, 3: 0.3j}


class TestDesignFunction:
    def test_small_instance(self):
        result = design(THREE, TARGETS, n_samples=64, zero_dc=True)
        assert result.waveform.quantized
        assert 0.0 <= result.thd <= 1.0
        assert result.waveform.n_samples == 64
        assert np.isin(result.waveform.samples, THREE).all()

    def test_targets_hit_within_certificate(self):
        result = design(THREE, TARGETS, n_samples=64, zero_dc=True)
        cert = result.certificate
        for k, h in [(1, 1 - 1j), (3, 0.3j)]:
            measured = result.spectrum[k - 1]
            assert abs(measured.real - h.real) <= cert.residual_bound + 1e-9
            assert abs(measured.imag - h.imag) <= cert.residual_bound + 1e-9

    def test_accepts_prebuilt_spec(self):
        spec = harmonic_spec(64, TARGETS, zero_dc=True)
        a = design(THREE, spec)
        b = design(THREE, TARGETS, n_samples=64, zero_dc=True)
        assert np.array_equal(a.waveform.samples, b.waveform.samples)

    def test_deterministic(self):
        a = design(THREE, TARGETS, n_samples=64)
        b = design(THREE, TARGETS, n_samples=64)
        assert np.array_equal(a.waveform.samples, b.waveform.samples)
        assert a.thd == b.thd
        assert a.iterations == b.iterations

    def test_infeasible_targets(self):
        # |f_1| of any waveform on [-1, 1] is at most 2, so 10 is unreachable.
        with pytest.raises(InfeasibleTargets):
            design([-1.0, 0.0, 1.0], {1: 10.0}, n_samples=64, zero_dc=False)

    def test_half_wave_design(self):
        result = design(THREE, {1: 1 - 1j, 3: 0.2}, n_samples=64, half_wave=True)
        x = result.waveform.samples
        assert np.array_equal(x[32:], -x[:32])
        even = np.abs(result.spectrum[1::2])
        assert even.max() < 1e-9

    def test_lp_objective_between_energies_within_slack(self):
        result = design(THREE, TARGETS, n_samples=64)
        gap_allowance = result.certificate.energy_gap_bound
        assert energy(result.waveform_relaxed) <= result.lp_objective + 1e-9
        assert result.lp_objective <= energy(result.waveform) + gap_allowance + 1e-9


class TestPwmDesigner:
    def test_fit_sets_attributes(self):
        est = PwmDesigner(levels=THREE, n_samples=64)
        assert est.fit(TARGETS) is est
        assert est.waveform_.size == 64
        assert est.assignment_.shape == (64, 3)
        assert est.spectrum_.size == 32
        assert 0.0 <= est.thd_ <= 1.0
        assert est.certificate_.residual_ok
        assert est.n_iterations_ > 0

    def test_accepts_array_of_rows(self):
        rows = np.array([[1, 1.0, -1.0], [3, 0.0, 0.3]])
        est = PwmDesigner(levels=THREE, n_samples=64).fit(rows)
        ref = PwmDesigner(levels=THREE, n_samples=64).fit({1: 1 - 1j, 3: 0.3j})
        assert np.array_equal(est.waveform_, ref.waveform_)

    def test_predict_piecewise_constant(self):
        est = PwmDesigner(levels=THREE, n_samples=64).fit(TARGETS)
        t = np.array([0.0, 1 / 64, 0.5, 0.999, 1.25])
        values = est.predict(t)
        assert values[0] == est.waveform_[0]
        assert values[1] == est.waveform_[1]
        assert values[2] == est.waveform_[32]
        assert values[4] == est.predict([0.25])[0]

    def test_predict_before_fit(self):
        with pytest.raises(NotFittedError):
            PwmDesigner(levels=THREE).predict([0.0])

    def test_missing_levels(self):
        with pytest.raises(ValidationError):
            PwmDesigner().fit(TARGETS)

    def test_sklearn_params_roundtrip(self):
        est = PwmDesigner(levels=THREE, n_samples=128, half_wave=True)
        params = est.get_params()
        assert params["n_samples"] == 128 and params["half_wave"]
        est.set_params(n_samples=64, half_wave=False)
        assert est.n_samples == 64

    def test_sklearn_clone(self):
        est = PwmDesigner(levels=THREE, n_samples=64).fit(TARGETS)
        fresh = clone(est)
        assert not hasattr(fresh, "waveform_")
        assert fresh.n_samples == 64


class TestLevelQuantizer:
    def test_transform_matches_clamp(self):
        q = LevelQuantizer(levels=THREE).fit()
        x = np.array([[1.2, -0.4], [2.5, -1.0]])
        expected = clamp_values(x, validate_level_set(THREE))
        assert np.array_equal(q.transform(x), expected)
        assert q.transform(x).shape == x.shape

    def test_fit_transform_pipeline_style(self):
        q = LevelQuantizer(levels=THREE)
        out = q.fit_transform(np.array([0.9, 1.1]))
        assert out.tolist() == [0.0, 2.0]

    def test_unfitted(self):
        with pytest.raises(NotFittedError):
            LevelQuantizer(levels=THREE).transform([0.5])

    def test_missing_levels(self):
        with pytest.raises(ValidationError):
            LevelQuantizer().fit()

    def test_clone(self):
        q = LevelQuantizer(levels=THREE)
        assert clone(q).get_params()["levels"] == THREE
