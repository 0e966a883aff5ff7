"""The exhaustive reference oracles themselves, plus their budget guards."""

import numpy as np
import pytest

from pwmlp import design, harmonic_spec, validate_level_set
from pwmlp.exceptions import BudgetExceeded, NoFeasiblePoint, TooLarge
from pwmlp.oracle import (
    OracleBudget,
    brute_force_design,
    enumerate_vertices,
    grid_delta,
    spectrum_direct,
)
from pwmlp.simplex import StandardLp, solve

UNIT = validate_level_set([-1.0, 0.0, 1.0])

#: Minimum energy over all 3^12 unit-level waveforms hitting the target
#: h_1 = 0.5 - 0.5j within 0.2 -- frozen from the exhaustive run.
BRUTE_N12_ENERGY = 0.25


class TestSpectrumDirect:
    def test_fourth_roots_exact(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        spec = spectrum_direct(x)
        # hand-computed DFT over four samples
        expected_k1 = (2 / 4) * (x[0] - 1j * x[1] - x[2] + 1j * x[3])
        expected_k2 = (2 / 4) * (x[0] - x[1] + x[2] - x[3])
        assert abs(spec[0] - expected_k1) < 1e-14
        assert abs(spec[1] - expected_k2) < 1e-14


class TestBruteForce:
    def test_zero_target_zero_waveform(self):
        spec = harmonic_spec(12, {1: 0}, zero_dc=False)
        waveform, best = brute_force_design(spec, UNIT, OracleBudget(residual_tol=1e-9))
        assert best == 0.0
        assert np.all(waveform.samples == 0.0)

    def test_relaxed_target_frozen_energy(self):
        spec = harmonic_spec(12, {1: 0.5 - 0.5j}, zero_dc=False)
        waveform, best = brute_force_design(spec, UNIT, OracleBudget(residual_tol=0.2))
        assert best == pytest.approx(BRUTE_N12_ENERGY, abs=1e-12)
        assert waveform.quantized

    def test_lp_lower_bounds_oracle(self):
        # The relaxation solves the exact-target problem; every waveform the
        # oracle accepts within tolerance eps can shift the target by at most
        # 2 * r * eps * max|level|, which caps how far the LP optimum can sit
        # above the oracle's energy.  N = 12 sits below the resolution rule
        # of the public pipeline, so the LP is built and solved directly.
        from pwmlp.formulation import build_lp
        from pwmlp.simplex import SimplexSolver, SolveStatus

        spec = harmonic_spec(12, {1: 0.5 - 0.5j}, zero_dc=False)
        _, best = brute_force_design(spec, UNIT, OracleBudget(residual_tol=0.2))
        sol = SimplexSolver(build_lp(spec, UNIT).lp).solve()
        assert sol.status is SolveStatus.OPTIMAL
        slack = 2 * 1 * 0.2 * 1.0
        assert sol.objective <= best + slack

    def test_budget_guard(self):
        spec = harmonic_spec(14, {1: 0.5}, zero_dc=False)
        with pytest.raises(BudgetExceeded):
            brute_force_design(spec, UNIT)  # 3^14 ~ 4.8M > 2M default cap

    def test_no_feasible_point(self):
        spec = harmonic_spec(12, {1: 10.0}, zero_dc=False)  # beyond 2*max|level|
        with pytest.raises(NoFeasiblePoint):
            brute_force_design(spec, UNIT, OracleBudget(residual_tol=1e-9))

    def test_half_wave_reduction(self):
        spec = harmonic_spec(8, {1: -1j}, half_wave=True, zero_dc=False)
        waveform, best = brute_force_design(spec, UNIT, OracleBudget(residual_tol=0.5))
        x = waveform.samples
        assert np.array_equal(x[4:], -x[:4])


class TestEnumerateVertices:
    def test_trivial(self):
        lp = StandardLp(cost=[1.0, 1.0], columns=[[1.0, 1.0]], rhs=[1.0])
        assert enumerate_vertices(lp) == pytest.approx(1.0)

    def test_matches_simplex(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            q = rng.standard_normal((4, 7))
            z0 = np.abs(rng.standard_normal(7))
            cost = q.T @ rng.standard_normal(4) + np.abs(rng.standard_normal(7))
            lp = StandardLp(cost=cost, columns=q, rhs=q @ z0)
            assert enumerate_vertices(lp) == pytest.approx(solve(lp).objective, abs=1e-8)

    def test_infeasible_returns_none(self):
        lp = StandardLp(cost=[0.0, 0.0], columns=[[1.0, -1.0], [1.0, 1.0]], rhs=[1.0, -1.0])
        assert enumerate_vertices(lp) is None

    def test_size_guard(self):
        lp = StandardLp(cost=np.zeros(20), columns=np.ones((1, 20)), rhs=[1.0])
        with pytest.raises(TooLarge):
            enumerate_vertices(lp)


class TestGridDelta:
    def test_three_levels_fine_grid(self):
        assert grid_delta([-2.0, 0.0, 2.0], step=1e-3) == pytest.approx(4.0, abs=2e-3)

    def test_five_levels(self):
        assert grid_delta([-4.0, -2.0, 0.0, 2.0, 4.0], step=1e-2) == pytest.approx(16.0, abs=0.1)

    def test_eight_levels_coarse(self):
        levels = [-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]
        with pytest.raises(TooLarge):
            grid_delta(levels)  # default step is far too fine for m = 8
        assert grid_delta(levels, step=0.05) == pytest.approx(49.0, abs=1.0)

    def test_grid_refinement_converges(self):
        coarse = grid_delta([-2.0, 0.0, 2.0], step=0.1)
        fine = grid_delta([-2.0, 0.0, 2.0], step=1e-3)
        assert coarse <= fine + 1e-12
        assert abs(fine - 4.0) <= abs(coarse - 4.0) + 1e-12
