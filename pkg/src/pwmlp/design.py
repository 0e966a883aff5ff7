"""End-to-end design pipeline and scikit-learn style front ends.

:func:`design` is the functional entry point: build the LP, solve it to a
vertex, clamp the relaxed waveform onto the level grid, analyze the
spectrum and certify the analytic error bounds.  :class:`PwmDesigner`
wraps the same pipeline as an estimator (``fit`` consumes the harmonic
targets, fitted attributes expose the results), and
:class:`LevelQuantizer` exposes the clamping step as a transformer, so
both compose with scikit-learn tooling such as ``clone`` and
``get_params``/``set_params``.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .exceptions import InfeasibleTargets, NumericalBreakdown, ValidationError
from .formulation import formulate, recover_waveform
from .model import (
    AssignmentMatrix,
    DesignResult,
    HarmonicSpec,
    LevelSet,
    Waveform,
    harmonic_spec,
    validate_level_set,
    validate_spec,
)
from .refine import certify, clamp_values
from .simplex import SimplexSolver, SolveStatus
from .spectrum import full_spectrum, thd


def design(
    levels,
    harmonics,
    n_samples: int = 2048,
    *,
    half_wave: bool = False,
    zero_dc: bool = True,
    refactor_every: int = 100,
    iteration_limit: Optional[int] = None,
    log=None,
) -> DesignResult:
    """Design a multilevel waveform with the prescribed harmonic content.

    Parameters
    ----------
    levels : sequence of float or LevelSet
        Admissible sample values, strictly increasing, at least three.
    harmonics : mapping, sequence of (k, re, im), or HarmonicSpec
        Prescribed harmonic numbers and complex target values.  When a
        ready-made :class:`HarmonicSpec` is passed, ``n_samples``,
        ``half_wave`` and ``zero_dc`` are taken from it.
    n_samples : int
        Time resolution N of one period.
    half_wave : bool
        Force ``x[i + N/2] = -x[i]`` (zero even harmonics); requires odd
        prescribed harmonics and a negation-symmetric level set.
    zero_dc : bool
        Constrain the waveform average to zero (implied under half-wave).
    log : callable, optional
        Solver iteration callback ``(iteration, phase, objective, infeasibility)``.

    Returns
    -------
    DesignResult

    Raises
    ------
    InfeasibleTargets
        If no level-valued relaxation can meet the targets.
    """
    level_set = levels if isinstance(levels, LevelSet) else validate_level_set(levels)
    if isinstance(harmonics, HarmonicSpec):
        spec = harmonics
    else:
        spec = harmonic_spec(n_samples, harmonics, half_wave=half_wave, zero_dc=zero_dc)
    spec = validate_spec(spec, level_set)

    pwm_lp = formulate(spec, level_set)
    solver = SimplexSolver(
        pwm_lp.lp, refactor_every=refactor_every, iteration_limit=iteration_limit, log=log
    )
    sol = solver.solve()
    if sol.status is SolveStatus.INFEASIBLE:
        raise InfeasibleTargets(
            "no level-valued waveform can carry the prescribed harmonics "
            f"(levels {level_set.levels.tolist()})"
        )
    if sol.status is SolveStatus.UNBOUNDED:
        raise NumericalBreakdown("the relaxation is bounded by construction", sol.iterations)

    relaxed, assignment = recover_waveform(pwm_lp, sol)
    if spec.half_wave:
        # Clamp the free half only, then expand, so the anti-symmetry
        # identity survives exactly even at clamping ties.
        half = clamp_values(relaxed.samples[: spec.n_samples // 2], level_set)
        quantized = Waveform(np.concatenate([half, -half]), level_set, quantized=True)
    else:
        quantized = Waveform(clamp_values(relaxed.samples, level_set), level_set, quantized=True)

    certificate = certify(spec, level_set, relaxed, assignment, quantized, sol.objective)
    spectrum_c = full_spectrum(quantized)
    distortion = thd(quantized, spec.harmonic_indices)
    return DesignResult(
        waveform_relaxed=relaxed,
        waveform=quantized,
        assignment=assignment,
        spectrum=spectrum_c,
        thd=distortion,
        lp_objective=sol.objective,
        certificate=certificate,
        prescribed=spec,
        iterations=sol.iterations,
    )


class PwmDesigner(BaseEstimator):
    """Estimator interface around :func:`design`.

    Hyperparameters are the level set and the discretization/symmetry
    options; ``fit`` takes the harmonic targets (a mapping ``{k: h_k}``, an
    array of ``(k, re, im)`` rows, or a :class:`HarmonicSpec`) and stores
    the designed waveform and its certificates as fitted attributes.

    Attributes
    ----------
    result_ : DesignResult
    waveform_ : ndarray            -- quantized samples
    relaxed_waveform_ : ndarray    -- pre-clamping LP samples
    assignment_ : ndarray          -- row-stochastic selector matrix
    spectrum_ : ndarray of complex -- harmonics 1 .. N/2 of the output
    thd_ : float
    objective_ : float             -- LP optimum (mean-square energy proxy)
    certificate_ : BoundCertificate
    n_iterations_ : int
    """

    def __init__(
        self,
        levels=None,
        n_samples: int = 2048,
        half_wave: bool = False,
        zero_dc: bool = True,
        refactor_every: int = 100,
        iteration_limit: Optional[int] = None,
    ):
        self.levels = levels
        self.n_samples = n_samples
        self.half_wave = half_wave
        self.zero_dc = zero_dc
        self.refactor_every = refactor_every
        self.iteration_limit = iteration_limit

    def fit(self, X, y=None):
        """Run the design for harmonic targets ``X``; returns self."""
        if self.levels is None:
            raise ValidationError("PwmDesigner needs a 'levels' parameter")
        result = design(
            self.levels,
            X,
            n_samples=self.n_samples,
            half_wave=self.half_wave,
            zero_dc=self.zero_dc,
            refactor_every=self.refactor_every,
            iteration_limit=self.iteration_limit,
        )
        self.result_ = result
        self.waveform_ = result.waveform.samples
        self.relaxed_waveform_ = result.waveform_relaxed.samples
        self.assignment_ = result.assignment.entries
        self.spectrum_ = result.spectrum
        self.thd_ = result.thd
        self.objective_ = result.lp_objective
        self.certificate_ = result.certificate
        self.n_iterations_ = result.iterations
        return self

    def predict(self, T):
        """Evaluate the designed piecewise-constant waveform.

        ``T`` holds time fractions in units of the period; values outside
        [0, 1) wrap around.
        """
        if not hasattr(self, "waveform_"):
            raise NotFittedError("PwmDesigner must be fitted before predict")
        t = np.asarray(T, dtype=float).ravel()
        n = self.waveform_.size
        idx = np.floor((t % 1.0) * n).astype(int) % n
        return self.waveform_[idx]


class LevelQuantizer(TransformerMixin, BaseEstimator):
    """Stateless transformer clamping every entry to its nearest level."""

    def __init__(self, levels=None):
        self.levels = levels

    def fit(self, X=None, y=None):
        if self.levels is None:
            raise ValidationError("LevelQuantizer needs a 'levels' parameter")
        self.level_set_ = (
            self.levels if isinstance(self.levels, LevelSet) else validate_level_set(self.levels)
        )
        return self

    def transform(self, X):
        if not hasattr(self, "level_set_"):
            raise NotFittedError("LevelQuantizer must be fitted before transform")
        return clamp_values(np.asarray(X, dtype=float), self.level_set_)
