"""Exhaustive reference computations for cross-checking the fast paths.

Everything in this module trades time for independence: direct-summation
DFTs, enumeration of every candidate waveform, enumeration of every LP
basis, and a grid search over the probability simplex.  None of it belongs
on a production code path; the design pipeline never imports this module.
Budgets keep the exponential enumerations from being invoked at scales
where they cannot finish.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .exceptions import BudgetExceeded, NoFeasiblePoint, TooLarge
from .model import HarmonicSpec, LevelSet, Waveform
from .simplex import StandardLp


@dataclass(frozen=True)
class OracleBudget:
    """Caps for the exhaustive searches."""

    max_enumeration: int = 2_000_000
    residual_tol: float = 1e-9

    def __post_init__(self):
        if self.max_enumeration <= 0:
            raise ValueError("max_enumeration must be positive")


def spectrum_direct(x) -> np.ndarray:
    """Harmonics f_k for k = 1 .. floor(N/2) by direct O(N^2) summation.

    Independent of the FFT path in :mod:`pwmlp.spectrum`: explicit cosine
    and sine sums, one row per harmonic.
    """
    v = x.samples if isinstance(x, Waveform) else np.asarray(x, dtype=float)
    n = v.size
    ks = np.arange(1, n // 2 + 1)
    angles = 2.0 * np.pi * np.outer(ks, np.arange(n)) / n
    re = (2.0 / n) * (np.cos(angles) @ v)
    im = -(2.0 / n) * (np.sin(angles) @ v)
    return re + 1j * im


def _constraint_rows(spec: HarmonicSpec) -> tuple[np.ndarray, np.ndarray]:
    """Full-length Re/Im (+DC) rows and targets for feasibility checking."""
    n = spec.n_samples
    i = np.arange(n)
    rows, rhs = [], []
    for k in spec.harmonic_indices:
        rows.append((2.0 / n) * np.cos(2.0 * np.pi * k * i / n))
        rhs.append(spec.target_of(int(k)).real)
    for k in spec.harmonic_indices:
        rows.append(-(2.0 / n) * np.sin(2.0 * np.pi * k * i / n))
        rhs.append(spec.target_of(int(k)).imag)
    if spec.zero_dc and not spec.half_wave:
        rows.append(np.full(n, 2.0 / n))
        rhs.append(0.0)
    return np.array(rows), np.array(rhs)


def brute_force_design(
    spec: HarmonicSpec,
    levels: LevelSet,
    budget: OracleBudget | None = None,
) -> tuple[Waveform, float]:
    """Search every level-valued waveform; return the best feasible one.

    Feasibility means every constraint row is met within
    ``budget.residual_tol``; among survivors the minimum-energy waveform is
    returned, ties broken toward the lexicographically smallest sample
    sequence.  Half-wave prescriptions are enumerated over the first half
    period only.

    Raises
    ------
    BudgetExceeded
        If more than ``budget.max_enumeration`` waveforms would be visited.
    NoFeasiblePoint
        If no enumerated waveform meets the constraints.
    """
    budget = budget or OracleBudget()
    grid = levels.values
    m = grid.size
    n = spec.n_samples
    n_red = n // 2 if spec.half_wave else n
    total = m**n_red
    if total > budget.max_enumeration:
        raise BudgetExceeded(f"{m}^{n_red} = {total} states exceed the cap of {budget.max_enumeration}")

    rows, rhs = _constraint_rows(spec)
    best_energy = np.inf
    best: np.ndarray | None = None
    chunk = 1 << 15
    # Most-significant digit first, so enumeration order is lexicographic.
    place = m ** np.arange(n_red - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // place[None, :]) % m
        x = grid[digits]
        if spec.half_wave:
            x = np.hstack([x, -x])
        residual = np.abs(x @ rows.T - rhs[None, :]).max(axis=1)
        feasible = residual <= budget.residual_tol
        if not feasible.any():
            continue
        energies = (x[feasible] ** 2).mean(axis=1)
        j = int(np.argmin(energies))
        if energies[j] < best_energy:
            best_energy = float(energies[j])
            best = x[feasible][j]
    if best is None:
        raise NoFeasiblePoint(f"no waveform meets the targets within {budget.residual_tol}")
    return Waveform(best, levels, quantized=True), best_energy


def enumerate_vertices(lp: StandardLp, *, max_cols: int = 14, max_rows: int = 7) -> float | None:
    """Minimum objective over all basic feasible solutions, or None if infeasible.

    Tries every choice of ``n_rows`` columns as a basis, keeps the
    nonnegative ones that solve the full system, and minimizes the cost.
    Only meant for tiny instances; assumes the constraint rows are
    independent (singular candidate bases are skipped).
    """
    n_rows, n_cols = lp.n_rows, lp.n_cols
    if n_cols > max_cols or n_rows > max_rows:
        raise TooLarge(f"vertex enumeration capped at {max_rows} x {max_cols}, got {n_rows} x {n_cols}")
    q = np.column_stack([lp.columns.column(j) for j in range(n_cols)])
    scale = 1.0 + np.abs(lp.rhs).max(initial=0.0)
    best = None
    for cols in combinations(range(n_cols), n_rows):
        b = q[:, cols]
        try:
            zb = np.linalg.solve(b, lp.rhs)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(zb)) or zb.min(initial=0.0) < -1e-9:
            continue
        z = np.zeros(n_cols)
        z[list(cols)] = zb
        if np.abs(q @ z - lp.rhs).max(initial=0.0) > 1e-8 * scale:
            continue
        obj = float(lp.cost @ z)
        if best is None or obj < best:
            best = obj
    return best


def _simplex_grid(units: int, parts: int) -> np.ndarray:
    """All compositions of ``units`` into ``parts`` nonnegative integers."""
    if parts == 1:
        return np.array([[units]], dtype=np.int32)
    blocks = []
    for first in range(units + 1):
        rest = _simplex_grid(units - first, parts - 1)
        blocks.append(
            np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int32), rest])
        )
    return np.vstack(blocks)


def grid_delta(levels: LevelSet | np.ndarray, step: float = 1e-3, *, max_points: int = 6_000_000) -> float:
    """Grid-search the maximum variance over the probability simplex.

    Evaluates ``lam @ S_p - (lam @ S)^2`` at every weight vector with
    entries that are multiples of ``step``; the result is within O(step) of
    the true maximum (and exact whenever 1/(2*step) is an integer, because
    the optimal half/half split then lies on the grid).

    Raises
    ------
    TooLarge
        If the grid would hold more than ``max_points`` weight vectors.
    """
    v = levels.values if isinstance(levels, LevelSet) else np.asarray(levels, dtype=float)
    m = v.size
    units = round(1.0 / step)
    points = comb(units + m - 1, m - 1)
    if points > max_points:
        raise TooLarge(f"{points} grid points exceed the cap of {max_points}; increase step")
    lam = _simplex_grid(units, m).astype(float) / units
    variance = lam @ (v**2) - (lam @ v) ** 2
    return float(variance.max())
