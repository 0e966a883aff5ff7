"""Clamping of relaxed waveforms and certification of the error it causes.

A relaxed LP solution is a vertex, so at most ``n_h`` assignment rows are
fractional (``n_h`` = number of harmonic-type equality rows).  Clamping
each fractional sample to its nearest level therefore moves at most ``n_h``
samples, each by at most half the largest level gap.  That observation
yields two a-priori bounds that every produced design is checked against:

* constraint residual:  ``||A x_c - b||_inf  <=  ||D||_inf * n_h / n``
* energy perturbation:  ``|E(x_c) - E(x*)|   <=  (||D_p||_inf + delta) * n_h / n``

with D the level gaps, D_p the gaps of the squared levels, ``delta`` the
largest variance of any probability distribution supported on the level
set, and ``n`` the reduced sample count the LP optimized over (N, or N/2 in
half-wave mode).  A measured violation indicates a solver or formulation
bug and raises :class:`~pwmlp.exceptions.BoundViolated`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError
from .model import AssignmentMatrix, BoundCertificate, HarmonicSpec, LevelSet, Waveform
from .spectrum import energy, full_spectrum

#: An assignment-row entry at least this large counts the row as integral.
INTEGRAL_THRESHOLD = 1.0 - 1e-6


@dataclass(frozen=True)
class ClampProfile:
    """Per-level-set constants entering the clamping bounds.

    ``d_vec``/``dp_vec`` list the level gaps and squared-level gaps with the
    first gap duplicated, giving one entry per level; only the maxima are
    ever used.  ``delta`` is the maximum variance over the probability
    simplex on the levels, attained by splitting mass evenly between the
    extreme levels: ``((L_m - L_1) / 2)^2``.
    """

    d_vec: np.ndarray
    dp_vec: np.ndarray
    d_inf: float
    dp_inf: float
    delta: float


def clamp_profile(levels: LevelSet) -> ClampProfile:
    v = levels.values
    gaps = np.diff(v)
    sq_gaps = np.abs(np.diff(v**2))
    d_vec = np.concatenate([gaps[:1], gaps])
    dp_vec = np.concatenate([sq_gaps[:1], sq_gaps])
    return ClampProfile(
        d_vec=d_vec,
        dp_vec=dp_vec,
        d_inf=float(gaps.max()),
        dp_inf=float(sq_gaps.max()),
        delta=delta_constant(levels),
    )


def clamp_values(values: np.ndarray, levels: LevelSet | np.ndarray) -> np.ndarray:
    """Replace every entry by its nearest level; exact midpoints go down.

    Works on arrays of any shape; idempotent.
    """
    grid = levels.values if isinstance(levels, LevelSet) else np.asarray(levels, dtype=float)
    arr = np.asarray(values, dtype=float)
    midpoints = 0.5 * (grid[:-1] + grid[1:])
    # searchsorted(side='left') maps a value equal to a midpoint onto the
    # lower level, which is the documented tie rule.
    idx = np.searchsorted(midpoints, arr, side="left")
    return grid[idx]


def clamp(x: Waveform | np.ndarray, levels: LevelSet) -> Waveform:
    """Quantize a waveform onto its level set (nearest level, ties down)."""
    samples = x.samples if isinstance(x, Waveform) else np.asarray(x, dtype=float)
    return Waveform(clamp_values(samples, levels), levels, quantized=True)


def delta_constant(levels: LevelSet | np.ndarray) -> float:
    """Largest variance of a probability distribution supported on the levels.

    The variance ``lam @ S_p - (lam @ S)^2`` of weights ``lam`` on values S
    is maximized by putting half the mass on each extreme value, so the
    maximum is ``((L_max - L_min) / 2)^2``.  The grid-search oracle
    :func:`pwmlp.oracle.grid_delta` confirms this independently in tests.
    """
    v = levels.values if isinstance(levels, LevelSet) else np.asarray(levels, dtype=float)
    if v.size < 2:
        raise ValidationError("need at least two levels")
    return float(((v[-1] - v[0]) / 2.0) ** 2)


def jensen_gap(assignment: AssignmentMatrix, x: Waveform | np.ndarray, levels: LevelSet) -> float:
    """Cost overshoot of a fractional assignment over its waveform's energy.

    Equals the average per-row variance ``lam_i @ S_p - (lam_i @ S)^2``, so
    it is nonnegative, zero exactly for binary assignments, and at most
    ``delta`` times the fraction of fractional rows.
    """
    samples = x.samples if isinstance(x, Waveform) else np.asarray(x, dtype=float)
    z = assignment.entries
    if z.shape[0] != samples.size:
        raise ValidationError("assignment and waveform lengths disagree")
    cost = float((z @ levels.squares).mean())
    return cost - energy(samples)


def assignment_cost(assignment: AssignmentMatrix, levels: LevelSet) -> float:
    """Mean over rows of ``Z[i] @ S_p`` -- the LP objective of an assignment."""
    return float((assignment.entries @ levels.squares).mean())


def certify(
    spec: HarmonicSpec,
    levels: LevelSet,
    x_relaxed: Waveform,
    assignment: AssignmentMatrix,
    x_clamped: Waveform,
    lp_objective: float,
) -> BoundCertificate:
    """Measure the post-clamping quantities and check them against bounds.

    ``x_clamped`` must be the clamp of ``x_relaxed`` and ``assignment`` the
    vertex assignment that produced it.  Residuals are measured through the
    spectrum of the quantized waveform (an independent path from the LP's
    own constraint rows).

    Raises
    ------
    BoundViolated
        If any measured quantity exceeds its analytic bound.
    """
    if not x_clamped.quantized:
        raise ValidationError("x_clamped must be quantized")
    profile = clamp_profile(levels)
    moves = np.abs(x_clamped.samples - x_relaxed.samples)
    if moves.max(initial=0.0) > profile.d_inf + 1e-9:
        raise ValidationError("x_clamped is not a nearest-level clamp of x_relaxed")

    n_red = spec.n_samples // 2 if spec.half_wave else spec.n_samples
    n_h = 2 * spec.r if spec.half_wave else 2 * spec.r + int(spec.zero_dc)

    spec_c = full_spectrum(x_clamped)
    residuals = []
    for k, h in zip(spec.harmonic_indices, spec.targets):
        measured = spec_c[int(k) - 1]
        residuals.append(abs(measured.real - h.real))
        residuals.append(abs(measured.imag - h.imag))
    if spec.zero_dc and not spec.half_wave:
        residuals.append(abs(2.0 * x_clamped.samples.mean()))
    residual_inf = float(max(residuals))
    residual_bound = profile.d_inf * n_h / n_red

    energy_gap = abs(energy(x_clamped) - energy(x_relaxed))
    energy_gap_bound = (profile.dp_inf + profile.delta) * n_h / n_red

    multiplicity = 2 if spec.half_wave else 1
    integral_rows = assignment.integral_rows(INTEGRAL_THRESHOLD)
    integral_floor = spec.n_samples - multiplicity * n_h

    return BoundCertificate(
        residual_inf=residual_inf,
        residual_bound=residual_bound,
        energy_gap=float(energy_gap),
        energy_gap_bound=energy_gap_bound,
        delta=profile.delta,
        integral_rows=integral_rows,
        integral_rows_floor=integral_floor,
        harmonic_rows=n_h,
    )
