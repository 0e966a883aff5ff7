"""Discrete Fourier analysis of sampled waveforms.

The harmonic functional used throughout the package is

    f_k(x) = (2/N) * sum_{i=0}^{N-1} x(i) * exp(-2j*pi*k*i/N),

i.e. twice the usual DFT coefficient over N.  With this normalization a
unit-amplitude cosine at harmonic k has ``f_k = 1``.  The full spectrum is
computed with an FFT (O(N log N)); a direct O(N^2) summation lives in
:mod:`pwmlp.oracle` as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .exceptions import IndexOutOfRange, ZeroSignal
from .model import Waveform

#: Below this total out-of-DC power the distortion ratio is a 0/0 and undefined.
ZERO_POWER = 1e-15


def _samples(x) -> np.ndarray:
    if isinstance(x, Waveform):
        return x.samples
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class FourierRow:
    """Real and imaginary parts of the length-N harmonic-k analysis row.

    Entry i is ``(2/N) * exp(-2j*pi*k*i/N)`` split into ``re`` and ``im``;
    the squared complex norm of the row is ``4/N``.
    """

    k: int
    re: np.ndarray
    im: np.ndarray

    @property
    def norm_sq(self) -> float:
        return float(self.re @ self.re + self.im @ self.im)


def fourier_row(k: int, n_samples: int) -> FourierRow:
    """Analysis row for harmonic ``k`` of an ``n_samples``-point waveform.

    Valid for ``1 <= k <= n_samples/2``; the upper end (Nyquist, even N) has
    an identically zero imaginary part.
    """
    n = int(n_samples)
    if k < 1 or 2 * k > n:
        raise IndexOutOfRange(f"harmonic index must satisfy 1 <= k <= N/2, got k={k}, N={n}")
    theta = 2.0 * np.pi * k * np.arange(n) / n
    re = (2.0 / n) * np.cos(theta)
    im = -(2.0 / n) * np.sin(theta)
    re.flags.writeable = False
    im.flags.writeable = False
    return FourierRow(int(k), re, im)


def harmonic(x, k: int) -> complex:
    """Complex harmonic ``f_k(x)`` of a waveform (array or :class:`Waveform`)."""
    v = _samples(x)
    n = v.size
    if k < 1 or 2 * k > n:
        raise IndexOutOfRange(f"harmonic index must satisfy 1 <= k <= N/2, got k={k}, N={n}")
    i = np.arange(n)
    phase = np.exp(-2j * np.pi * k * i / n)
    return complex((2.0 / n) * (v @ phase))


def full_spectrum(x) -> np.ndarray:
    """Harmonics ``f_k(x)`` for k = 1 .. floor(N/2), FFT-based.

    Element ``j`` (0-based) is the harmonic of index ``j + 1``.
    """
    v = _samples(x)
    n = v.size
    if n < 2:
        raise IndexOutOfRange(f"need at least 2 samples, got {n}")
    coeffs = np.fft.rfft(v) * (2.0 / n)
    return coeffs[1 : n // 2 + 1]


def energy(x) -> float:
    """Mean squared sample value ``(1/N) * sum x(i)^2``."""
    v = _samples(x)
    return float(v @ v) / v.size


def thd(x, harmonic_indices: Iterable[int]) -> float:
    """Fraction of harmonic power outside the prescribed index set.

        thd = 1 - sum_{k in K} |f_k(x)|^2 / sum_{k=1}^{floor(N/2)} |f_k(x)|^2

    The denominator runs over every representable harmonic except DC; the
    Nyquist coefficient (k = N/2 for even N) is included unweighted.  The
    result is invariant under positive scaling of ``x`` and lies in [0, 1].

    Raises
    ------
    ZeroSignal
        If the total out-of-DC power falls below ``ZERO_POWER``.
    """
    spec = full_spectrum(x)
    power = np.abs(spec) ** 2
    total = power.sum()
    if total < ZERO_POWER:
        raise ZeroSignal(f"total harmonic power {total:.3e} is below {ZERO_POWER}")
    k = np.asarray(list(harmonic_indices), dtype=int)
    if k.size and (k.min() < 1 or 2 * k.max() > _samples(x).size):
        raise IndexOutOfRange(f"prescribed indices {k.tolist()} outside [1, N/2]")
    kept = power[k - 1].sum()
    return float(1.0 - kept / total)
