"""Domain-type construction and validation rules."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwmlp import (
    AssignmentMatrix,
    HarmonicSpec,
    LevelSet,
    Waveform,
    harmonic_spec,
    validate_level_set,
    validate_spec,
)
from pwmlp.exceptions import (
    EvenHarmonicUnderHalfWave,
    IndexOutOfRange,
    MissingFundamental,
    NotStrictlyIncreasing,
    RatioViolated,
    TooFewLevels,
    ValidationError,
    ZeroTarget,
)

THREE = [-2.0, 0.0, 2.0]
TABLE_K = [1, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31]


class TestLevelSet:
    def test_three_level(self):
        ls = validate_level_set(THREE)
        assert ls.m == 3
        assert ls.levels.tolist() == THREE

    def test_too_few(self):
        with pytest.raises(TooFewLevels):
            validate_level_set([0, 2])

    def test_disorder(self):
        with pytest.raises(NotStrictlyIncreasing):
            validate_level_set([-2, 2, 0])

    def test_duplicates(self):
        with pytest.raises(NotStrictlyIncreasing):
            validate_level_set([-2, 0, 0, 2])

    def test_value_vectors_roundtrip(self):
        ls = validate_level_set([-7, -5, -3, -1, 1, 3, 5, 7])
        assert np.array_equal(ls.values, ls.levels)
        assert np.array_equal(ls.squares, ls.levels**2)
        assert np.all(ls.gaps > 0)

    def test_immutable(self):
        ls = validate_level_set(THREE)
        with pytest.raises(ValueError):
            ls.levels[0] = 5.0

    def test_symmetric(self):
        assert validate_level_set(THREE).symmetric()
        assert not validate_level_set([0.0, 1.0, 2.0]).symmetric()


class TestHarmonicSpec:
    def test_table_sized_spec_accepted(self):
        spec = harmonic_spec(2048, {k: 0 for k in TABLE_K} | {1: 1 - 1j}, zero_dc=True)
        assert validate_spec(spec, validate_level_set(THREE)) is spec
        assert spec.r == 11

    def test_missing_fundamental(self):
        spec = harmonic_spec(2048, {5: 1 + 0j})
        with pytest.raises(MissingFundamental):
            validate_spec(spec, validate_level_set(THREE))

    def test_zero_target(self):
        spec = harmonic_spec(2048, {1: 0, 5: 0})
        with pytest.raises(ZeroTarget):
            validate_spec(spec, validate_level_set(THREE))

    def test_too_many_harmonics(self):
        spec = harmonic_spec(64, {k: 1 for k in range(1, 6)})  # r=5 > 64/16
        with pytest.raises(RatioViolated):
            validate_spec(spec, validate_level_set(THREE))

    def test_harmonic_too_high_for_resolution(self):
        spec = harmonic_spec(256, {1: 1, 31: 0})
        with pytest.raises(RatioViolated):
            validate_spec(spec, validate_level_set(THREE))

    def test_even_harmonic_under_half_wave(self):
        spec = harmonic_spec(2048, {1: 1 - 1j, 2: 0}, half_wave=True)
        with pytest.raises(EvenHarmonicUnderHalfWave):
            validate_spec(spec, validate_level_set(THREE))

    def test_index_bounds(self):
        with pytest.raises(IndexOutOfRange):
            harmonic_spec(16, {1: 1, 8: 0})  # k = N/2 not representable as target
        with pytest.raises(ValidationError):
            harmonic_spec(16, [(0, 1.0, 0.0)])

    def test_duplicate_indices(self):
        with pytest.raises(ValidationError):
            HarmonicSpec(64, np.array([1, 1]), np.array([1.0, 2.0]))

    def test_sorted_by_index(self):
        spec = harmonic_spec(2048, [(5, 0.0, 0.0), (1, 1.0, -1.0)])
        assert spec.harmonic_indices.tolist() == [1, 5]
        assert spec.target_of(1) == 1 - 1j

    def test_validation_is_deterministic(self):
        for _ in range(3):
            spec = harmonic_spec(2048, {1: 1 - 1j})
            assert validate_spec(spec, validate_level_set(THREE)).r == 1


class TestWaveformAndAssignment:
    def test_quantized_flag_enforced(self):
        ls = validate_level_set(THREE)
        Waveform(np.array([-2.0, 0.0, 2.0, 2.0]), ls, quantized=True)
        with pytest.raises(ValidationError):
            Waveform(np.array([1.5, 0.0]), ls, quantized=True)

    def test_assignment_row_sums(self):
        AssignmentMatrix(np.array([[0.5, 0.5, 0.0], [0.0, 0.0, 1.0]]))
        with pytest.raises(ValidationError):
            AssignmentMatrix(np.array([[0.5, 0.6, 0.0]]))
        with pytest.raises(ValidationError):
            AssignmentMatrix(np.array([[1.5, -0.5, 0.0]]))

    @given(st.integers(min_value=1, max_value=40), st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_binary_assignment_yields_level_samples(self, n, seed):
        # Any binary row-stochastic selector produces a waveform on the grid.
        ls = validate_level_set(THREE)
        rng = np.random.default_rng(seed)
        z = np.zeros((n, 3))
        z[np.arange(n), rng.integers(0, 3, size=n)] = 1.0
        x = AssignmentMatrix(z).waveform_values(ls)
        assert np.isin(x, ls.levels).all()

    def test_integral_row_count(self):
        z = AssignmentMatrix(np.array([[1.0, 0.0, 0.0], [0.4, 0.6, 0.0], [0.0, 0.0, 1.0]]))
        assert z.integral_rows() == 2
