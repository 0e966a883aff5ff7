"""Core domain types: level sets, harmonic prescriptions, waveforms and results.

Everything here is immutable after construction (arrays are frozen with
``writeable = False``), so instances can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .exceptions import (
    EvenHarmonicUnderHalfWave,
    IndexOutOfRange,
    MissingFundamental,
    NotStrictlyIncreasing,
    RatioViolated,
    TooFewLevels,
    ValidationError,
    ZeroTarget,
)

#: Tolerance used whenever a real value is compared against 0 or 1.
EPS_FEAS = 1e-9

#: The prescribed harmonic set must satisfy ``r <= N / RESOLUTION_FACTOR``
#: and ``max(K) <= N / RESOLUTION_FACTOR`` so the sampled Fourier sums stay
#: close to the continuous-time coefficients they stand in for.
RESOLUTION_FACTOR = 16


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class LevelSet:
    """The ordered discrete values a waveform may take.

    Parameters
    ----------
    levels : ndarray
        Strictly increasing real values ``L_1 < ... < L_m`` with ``m >= 3``.
    """

    levels: np.ndarray

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        if levels.ndim != 1 or levels.size < 3:
            raise TooFewLevels(f"need at least 3 levels, got {levels.size}")
        if not np.all(np.isfinite(levels)):
            raise ValidationError("levels must be finite")
        if np.any(np.diff(levels) <= 0):
            raise NotStrictlyIncreasing(f"levels must be strictly increasing, got {levels.tolist()}")
        object.__setattr__(self, "levels", _frozen(levels))

    @property
    def m(self) -> int:
        return self.levels.size

    @property
    def values(self) -> np.ndarray:
        """The column of level values (often written S)."""
        return self.levels

    @property
    def squares(self) -> np.ndarray:
        """Elementwise squared levels (often written S_p)."""
        return _frozen(self.levels**2)

    @property
    def gaps(self) -> np.ndarray:
        """Consecutive level differences, all positive."""
        return _frozen(np.diff(self.levels))

    def symmetric(self) -> bool:
        """True when every ``-L`` is itself a level (closed under negation)."""
        return bool(np.allclose(self.levels, -self.levels[::-1], rtol=0.0, atol=0.0))


def validate_level_set(levels: Sequence[float]) -> LevelSet:
    """Validate raw level values and wrap them in a :class:`LevelSet`."""
    return LevelSet(np.asarray(levels, dtype=float))


@dataclass(frozen=True)
class HarmonicSpec:
    """A prescribed harmonic content for a waveform of ``n_samples`` samples.

    ``harmonic_indices`` is kept sorted ascending with ``targets`` aligned to
    it.  Construction normalizes the order; invalid structure raises one of
    the validation errors.

    Parameters
    ----------
    n_samples : int
        Number of time samples N in one period.
    harmonic_indices : ndarray of int
        The prescribed harmonic numbers ``K = {k_1, ..., k_r}``.
    targets : ndarray of complex
        Target value ``h_k = h_c + 1j*h_s`` for each ``k`` in order.
    half_wave : bool
        Request half-wave anti-symmetric output (``x[i + N/2] = -x[i]``).
    zero_dc : bool
        Constrain the average of the waveform to zero.
    """

    n_samples: int
    harmonic_indices: np.ndarray
    targets: np.ndarray
    half_wave: bool = False
    zero_dc: bool = False

    def __post_init__(self):
        n = int(self.n_samples)
        if n < 2:
            raise ValidationError(f"n_samples must be >= 2, got {n}")
        k = np.asarray(self.harmonic_indices, dtype=int)
        h = np.asarray(self.targets, dtype=complex)
        if k.ndim != 1 or h.shape != k.shape or k.size == 0:
            raise ValidationError("harmonic_indices and targets must be matching 1-d sequences")
        if np.unique(k).size != k.size:
            raise ValidationError(f"duplicate harmonic indices in {k.tolist()}")
        if np.any(k < 1) or np.any(2 * k >= n):
            raise IndexOutOfRange(f"harmonic indices must satisfy 1 <= k < N/2, got {k.tolist()} for N={n}")
        order = np.argsort(k)
        object.__setattr__(self, "n_samples", n)
        object.__setattr__(self, "harmonic_indices", _frozen(k[order]))
        object.__setattr__(self, "targets", _frozen(h[order]))
        object.__setattr__(self, "half_wave", bool(self.half_wave))
        object.__setattr__(self, "zero_dc", bool(self.zero_dc))

    @property
    def r(self) -> int:
        """Number of prescribed harmonics."""
        return self.harmonic_indices.size

    def target_of(self, k: int) -> complex:
        i = int(np.searchsorted(self.harmonic_indices, k))
        if i >= self.r or self.harmonic_indices[i] != k:
            raise KeyError(f"harmonic {k} is not prescribed")
        return complex(self.targets[i])


def harmonic_spec(
    n_samples: int,
    harmonics: Mapping[int, complex] | Sequence[Sequence[float]],
    *,
    half_wave: bool = False,
    zero_dc: bool = False,
) -> HarmonicSpec:
    """Build a :class:`HarmonicSpec` from a mapping ``{k: h_k}`` or rows ``(k, re, im)``."""
    if isinstance(harmonics, Mapping):
        ks = np.array(sorted(harmonics), dtype=int)
        hs = np.array([complex(harmonics[int(k)]) for k in ks])
    else:
        rows = [tuple(row) for row in harmonics]
        if not all(len(row) == 3 for row in rows):
            raise ValidationError("harmonic rows must be (k, re, im) triples")
        ks = np.array([int(row[0]) for row in rows], dtype=int)
        hs = np.array([float(row[1]) + 1j * float(row[2]) for row in rows])
    return HarmonicSpec(n_samples, ks, hs, half_wave=half_wave, zero_dc=zero_dc)


def validate_spec(spec: HarmonicSpec, levels: LevelSet) -> HarmonicSpec:
    """Check a harmonic prescription against all structural requirements.

    The level set is part of the signature because a prescription is only
    meaningful relative to a level set; level-dependent reachability is
    diagnosed later by the LP itself (infeasibility), and half-wave level
    symmetry at formulation time.

    Raises
    ------
    MissingFundamental, ZeroTarget, RatioViolated, EvenHarmonicUnderHalfWave
    """
    if not isinstance(levels, LevelSet):
        raise ValidationError("levels must be a LevelSet")
    k = spec.harmonic_indices
    n = spec.n_samples
    if 1 not in k:
        raise MissingFundamental("the fundamental harmonic (k=1) must be prescribed")
    if np.all(np.abs(spec.targets) == 0.0):
        raise ZeroTarget("all harmonic targets are zero")
    if spec.r * RESOLUTION_FACTOR > n:
        raise RatioViolated(f"r={spec.r} prescribed harmonics need N >= {spec.r * RESOLUTION_FACTOR}, got N={n}")
    if int(k.max()) * RESOLUTION_FACTOR > n:
        raise RatioViolated(f"max harmonic {int(k.max())} needs N >= {int(k.max()) * RESOLUTION_FACTOR}, got N={n}")
    if spec.half_wave:
        if n % 2 != 0:
            raise ValidationError(f"half-wave output needs an even number of samples, got N={n}")
        even = k[k % 2 == 0]
        if even.size:
            raise EvenHarmonicUnderHalfWave(
                f"even harmonics {even.tolist()} cannot be prescribed on a half-wave anti-symmetric waveform"
            )
    return spec


@dataclass(frozen=True)
class Waveform:
    """A sampled one-period waveform tied to its level set.

    ``quantized=True`` asserts that every sample is exactly a level value.
    """

    samples: np.ndarray
    level_set: LevelSet
    quantized: bool = False

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise ValidationError("samples must be a non-empty 1-d sequence")
        if self.quantized and not np.isin(x, self.level_set.levels).all():
            raise ValidationError("quantized waveform has samples outside the level set")
        object.__setattr__(self, "samples", _frozen(x))

    @property
    def n_samples(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class AssignmentMatrix:
    """Row-stochastic N x m selector Z; the waveform is ``Z @ levels``.

    Binary rows pick a single level per sample; fractional rows mix levels
    and correspond to samples that will need clamping.
    """

    entries: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.entries, dtype=float)
        if z.ndim != 2:
            raise ValidationError("assignment matrix must be 2-d")
        if z.min(initial=0.0) < -EPS_FEAS:
            raise ValidationError(f"assignment entries must be >= -{EPS_FEAS}, min is {z.min()}")
        row_sums = z.sum(axis=1)
        worst = np.abs(row_sums - 1.0).max()
        if worst > EPS_FEAS:
            raise ValidationError(f"assignment rows must sum to 1 within {EPS_FEAS}, worst error {worst:.3e}")
        object.__setattr__(self, "entries", _frozen(z))

    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    def waveform_values(self, levels: LevelSet) -> np.ndarray:
        return self.entries @ levels.values

    def integral_rows(self, threshold: float = 1.0 - 1e-6) -> int:
        """Number of rows that select a single level (max entry >= threshold)."""
        return int(np.sum(self.entries.max(axis=1) >= threshold))


@dataclass(frozen=True)
class BoundCertificate:
    """Measured post-clamping quantities next to their analytic bounds.

    Construction enforces the three certified inequalities; a violation
    raises :class:`~pwmlp.exceptions.BoundViolated` because it can only be
    produced by a solver or formulation defect.
    """

    residual_inf: float
    residual_bound: float
    energy_gap: float
    energy_gap_bound: float
    delta: float
    integral_rows: int
    integral_rows_floor: int
    #: Number of harmonic-type equality rows (2r, plus one for a zero-mean row).
    harmonic_rows: int = 0

    #: Slack allowed when checking measured values against analytic bounds.
    TOLERANCE = 1e-9

    def __post_init__(self):
        from .exceptions import BoundViolated

        if self.residual_inf > self.residual_bound + self.TOLERANCE:
            raise BoundViolated(
                f"constraint residual {self.residual_inf:.3e} exceeds bound {self.residual_bound:.3e}"
            )
        if self.energy_gap > self.energy_gap_bound + self.TOLERANCE:
            raise BoundViolated(
                f"energy gap {self.energy_gap:.3e} exceeds bound {self.energy_gap_bound:.3e}"
            )
        if self.integral_rows < self.integral_rows_floor:
            raise BoundViolated(
                f"only {self.integral_rows} integral assignment rows, "
                f"vertex structure guarantees at least {self.integral_rows_floor}"
            )

    @property
    def residual_ok(self) -> bool:
        return self.residual_inf <= self.residual_bound + self.TOLERANCE

    @property
    def energy_gap_ok(self) -> bool:
        return self.energy_gap <= self.energy_gap_bound + self.TOLERANCE

    @property
    def integrality_ok(self) -> bool:
        return self.integral_rows >= self.integral_rows_floor

    def as_dict(self) -> dict:
        return {
            "residual_inf": self.residual_inf,
            "residual_bound": self.residual_bound,
            "residual_ok": self.residual_ok,
            "energy_gap": self.energy_gap,
            "energy_gap_bound": self.energy_gap_bound,
            "energy_gap_ok": self.energy_gap_ok,
            "delta": self.delta,
            "integral_rows": self.integral_rows,
            "integral_rows_floor": self.integral_rows_floor,
            "integrality_ok": self.integrality_ok,
            "harmonic_rows": self.harmonic_rows,
        }


@dataclass(frozen=True)
class DesignResult:
    """Everything produced by one design run.

    ``waveform`` is the final quantized output; ``waveform_relaxed`` is the
    pre-clamping LP solution, which need not lie on the level grid.
    ``spectrum`` holds the complex harmonics of the quantized waveform for
    k = 1 .. floor(N/2); ``thd`` is recomputed from that spectrum at
    construction and must agree with the stored value to 1e-12.
    """

    waveform_relaxed: Waveform
    waveform: Waveform
    assignment: AssignmentMatrix
    spectrum: np.ndarray
    thd: float
    lp_objective: float
    certificate: BoundCertificate
    prescribed: HarmonicSpec
    iterations: int = 0

    def __post_init__(self):
        if not self.waveform.quantized:
            raise ValidationError("final waveform must be quantized")
        object.__setattr__(self, "spectrum", _frozen(np.asarray(self.spectrum, dtype=complex)))
        k = self.prescribed.harmonic_indices
        power = np.abs(self.spectrum) ** 2
        recomputed = 1.0 - power[k - 1].sum() / power.sum()
        if abs(recomputed - self.thd) > 1e-12:
            raise ValidationError(
                f"stored thd {self.thd!r} disagrees with spectrum-derived value {recomputed!r}"
            )

    @property
    def energy(self) -> float:
        x = self.waveform.samples
        return float(x @ x) / x.size
