"""Build the level-assignment LP for a harmonic prescription.

Decision variables form an ``n x m`` row-stochastic assignment matrix Z
(one row per time sample, one column per level); the waveform is
``x = Z @ levels``.  The LP minimizes the mean squared sample value --
a linear function of Z -- subject to:

* harmonic rows: real and imaginary parts of ``f_k(x) = h_k`` for every
  prescribed k (plus one zero-mean row when requested),
* stochasticity rows: every row of Z sums to 1,
* nonnegativity of Z.

Variables are ordered level-major: variable ``l * n + i`` is ``Z[i, l]``
(the column-wise vectorization of Z).  The harmonic block then consists of
m copies of the sample-space coefficient matrix, each scaled by one level
value; :class:`PwmColumns` exploits that structure instead of materializing
the Kronecker product.

Half-wave mode restricts the variables to the first half period and
doubles the harmonic coefficients; the second half is reconstructed as
``x[i + N/2] = -x[i]``, which forces every even harmonic (and the mean) of
the expanded waveform to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import (
    AsymmetricLevelsUnderHalfWave,
    EvenHarmonicUnderHalfWave,
    ValidationError,
)
from .model import AssignmentMatrix, HarmonicSpec, LevelSet, Waveform
from .simplex import LpSolution, SolveStatus, StandardLp


class PwmColumns:
    """Column source for the assignment LP.

    Column ``j = l * n + i`` has the harmonic-block entries
    ``coeffs[:, i] * levels[l]`` stacked on the stochasticity indicator
    ``e_i``, so columns, pricing and products are all O(n_h * n) instead of
    O(n_h * n * m).
    """

    def __init__(self, coeffs: np.ndarray, levels: np.ndarray):
        self._a = np.ascontiguousarray(coeffs, dtype=float)
        self._levels = np.asarray(levels, dtype=float)
        self._n_h, self._n = self._a.shape
        self._m = self._levels.size

    @property
    def n_rows(self) -> int:
        return self._n_h + self._n

    @property
    def n_cols(self) -> int:
        return self._n * self._m

    def column(self, j: int) -> np.ndarray:
        l, i = divmod(int(j), self._n)
        col = np.zeros(self.n_rows)
        col[: self._n_h] = self._a[:, i] * self._levels[l]
        col[self._n_h + i] = 1.0
        return col

    def price(self, y: np.ndarray) -> np.ndarray:
        u = y[: self._n_h] @ self._a
        return (self._levels[:, None] * u[None, :] + y[self._n_h :][None, :]).ravel()

    def matvec(self, z: np.ndarray) -> np.ndarray:
        zm = z.reshape(self._m, self._n)
        x = self._levels @ zm
        return np.concatenate([self._a @ x, zm.sum(axis=0)])

    def dense(self) -> np.ndarray:
        """Materialize the full matrix (small instances / tests only)."""
        out = np.empty((self.n_rows, self.n_cols))
        for j in range(self.n_cols):
            out[:, j] = self.column(j)
        return out


@dataclass(frozen=True)
class PwmLp:
    """A built LP instance plus the bookkeeping to interpret its solution.

    ``row_map`` describes each equality row: ``("re", k)`` / ``("im", k)``
    for harmonic rows, ``("dc",)`` for the zero-mean row, ``("stoch", i)``
    for the row-sum of sample i.  ``n_reduced`` is the number of sample
    variables actually in the LP (N, or N/2 under half-wave).
    """

    lp: StandardLp
    spec: HarmonicSpec
    level_set: LevelSet
    n_reduced: int
    harmonic_rows: int
    row_map: tuple
    half_wave: bool

    @property
    def n_vars(self) -> int:
        return self.lp.n_cols

    @property
    def n_rows(self) -> int:
        return self.lp.n_rows

    @property
    def harmonic_block(self) -> np.ndarray:
        """The (harmonic_rows x n_reduced) coefficient block, including DC."""
        return self.lp.columns._a

    @property
    def harmonic_rhs(self) -> np.ndarray:
        return self.lp.rhs[: self.harmonic_rows]


def _harmonic_block(spec: HarmonicSpec, n_red: int, scale: float, with_dc: bool):
    """Stacked Re/Im analysis rows over the reduced sample range."""
    n = spec.n_samples
    i = np.arange(n_red)
    rows = []
    rhs = []
    row_map = []
    for k in spec.harmonic_indices:
        rows.append(scale * (2.0 / n) * np.cos(2.0 * np.pi * k * i / n))
        rhs.append(spec.target_of(int(k)).real)
        row_map.append(("re", int(k)))
    for k in spec.harmonic_indices:
        rows.append(-scale * (2.0 / n) * np.sin(2.0 * np.pi * k * i / n))
        rhs.append(spec.target_of(int(k)).imag)
        row_map.append(("im", int(k)))
    if with_dc:
        # The zero-mean constraint, scaled like a harmonic row (it is the
        # k = 0 cosine row), so one residual bound covers every row.
        rows.append(np.full(n_red, scale * 2.0 / n))
        rhs.append(0.0)
        row_map.append(("dc",))
    return np.array(rows), np.array(rhs), row_map


def _assemble(spec: HarmonicSpec, levels: LevelSet, n_red: int, scale: float, with_dc: bool) -> PwmLp:
    coeffs, b, row_map = _harmonic_block(spec, n_red, scale, with_dc)
    n_h = coeffs.shape[0]
    row_map += [("stoch", i) for i in range(n_red)]
    columns = PwmColumns(coeffs, levels.values)
    rhs = np.concatenate([b, np.ones(n_red)])
    # Variable (i, l) contributes levels[l]^2 to the mean square of the full
    # waveform, averaged over the reduced sample count.
    cost = np.repeat(levels.squares / n_red, n_red)
    # Crash basis: select the level nearest zero for every sample (satisfies
    # all stochasticity rows); artificials cover only the harmonic rows.
    l0 = int(np.argmin(np.abs(levels.values)))
    hint = (l0 * n_red + np.arange(n_red), np.arange(n_h))
    lp = StandardLp(cost=cost, columns=columns, rhs=rhs, basis_hint=hint)
    return PwmLp(
        lp=lp,
        spec=spec,
        level_set=levels,
        n_reduced=n_red,
        harmonic_rows=n_h,
        row_map=tuple(row_map),
        half_wave=spec.half_wave,
    )


def build_lp(spec: HarmonicSpec, levels: LevelSet) -> PwmLp:
    """Full-length LP: ``N * m`` variables, ``N + 2r`` rows (+1 with zero_dc).

    Expects a spec that already passed :func:`~pwmlp.model.validate_spec`
    (the design pipeline validates); only the half-wave dispatch is checked
    here so the two builders cannot be mixed up.
    """
    if spec.half_wave:
        raise ValidationError("half-wave prescriptions are built by apply_half_wave")
    return _assemble(spec, levels, spec.n_samples, scale=1.0, with_dc=spec.zero_dc)


def apply_half_wave(spec: HarmonicSpec, levels: LevelSet) -> PwmLp:
    """Half-wave reduced LP: ``(N/2) * m`` variables, ``N/2 + 2r`` rows.

    Requires every prescribed harmonic odd, an even sample count and a
    level set closed under negation.  Odd-harmonic coefficients double
    because the negated second half contributes exactly the first half's
    sum again; a zero-mean row is never added since anti-symmetry already
    forces a zero average.
    """
    if not spec.half_wave:
        raise ValidationError("spec does not request half-wave output")
    if spec.n_samples % 2 != 0:
        raise ValidationError(f"half-wave output needs an even sample count, got N={spec.n_samples}")
    if np.any(spec.harmonic_indices % 2 == 0):
        raise EvenHarmonicUnderHalfWave(
            f"even harmonics in {spec.harmonic_indices.tolist()} cannot survive half-wave anti-symmetry"
        )
    if not levels.symmetric():
        raise AsymmetricLevelsUnderHalfWave(
            f"levels {levels.levels.tolist()} are not closed under negation"
        )
    return _assemble(spec, levels, spec.n_samples // 2, scale=2.0, with_dc=False)


def formulate(spec: HarmonicSpec, levels: LevelSet) -> PwmLp:
    """Dispatch to :func:`apply_half_wave` or :func:`build_lp`."""
    return apply_half_wave(spec, levels) if spec.half_wave else build_lp(spec, levels)


def recover_waveform(pwm_lp: PwmLp, sol: LpSolution) -> tuple[Waveform, AssignmentMatrix]:
    """Reshape an optimal LP point into the full-length waveform and assignment.

    Under half-wave the second half is the exact negation of the first, and
    the assignment rows mirror the level columns (valid because the level
    set is symmetric).
    """
    if sol.status is not SolveStatus.OPTIMAL:
        raise ValidationError(f"cannot recover a waveform from a {sol.status.value} solution")
    n_red = pwm_lp.n_reduced
    m = pwm_lp.level_set.m
    z_red = sol.z.reshape(m, n_red).T
    x_red = z_red @ pwm_lp.level_set.values
    if pwm_lp.half_wave:
        z_full = np.vstack([z_red, z_red[:, ::-1]])
        x_full = np.concatenate([x_red, -x_red])
    else:
        z_full = z_red
        x_full = x_red
    waveform = Waveform(x_full, pwm_lp.level_set, quantized=False)
    return waveform, AssignmentMatrix(z_full)
