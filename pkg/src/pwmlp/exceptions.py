"""Exception hierarchy shared by the whole package."""


class PwmlpError(Exception):
    """Base class for every error raised by this package."""


# ---------------------------------------------------------------------------
# Input validation

class ValidationError(PwmlpError, ValueError):
    """An input failed a structural or numerical validity check."""


class TooFewLevels(ValidationError):
    """A level set needs at least three distinct values."""


class NotStrictlyIncreasing(ValidationError):
    """Level values must be strictly increasing."""


class MissingFundamental(ValidationError):
    """The fundamental (harmonic 1) must be part of the prescribed set."""


class ZeroTarget(ValidationError):
    """At least one prescribed harmonic target must be nonzero."""


class RatioViolated(ValidationError):
    """The prescribed set is too dense or too high for the sample count."""


class EvenHarmonicUnderHalfWave(ValidationError):
    """Half-wave anti-symmetric waveforms cannot carry even harmonics."""


class AsymmetricLevelsUnderHalfWave(ValidationError):
    """Half-wave output needs a level set closed under negation."""


class IndexOutOfRange(ValidationError):
    """A harmonic index lies outside the representable range [1, N/2]."""


class ZeroSignal(ValidationError):
    """Distortion of an all-zero spectrum is undefined (0/0)."""


# ---------------------------------------------------------------------------
# LP solver

class SolverError(PwmlpError):
    """Base class for failures inside the simplex solver."""

    def __init__(self, message: str, iterations: int = 0):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class NumericalBreakdown(SolverError):
    """Basis factorization became singular beyond recovery."""


class IterationLimitExceeded(SolverError):
    """The anti-cycling iteration cap was hit; treated as a hard failure."""


class InfeasibleTargets(PwmlpError):
    """The harmonic targets are unreachable for the given level set."""


# ---------------------------------------------------------------------------
# Certification

class BoundViolated(PwmlpError):
    """A measured quantity exceeded its analytic bound.

    This indicates a solver or formulation bug, not a user error.
    """


# ---------------------------------------------------------------------------
# Brute-force oracles

class OracleError(PwmlpError):
    """Base class for errors raised by the exhaustive reference oracles."""


class BudgetExceeded(OracleError):
    """The enumeration would exceed the configured state cap."""


class NoFeasiblePoint(OracleError):
    """Exhaustive search found no waveform meeting the constraints."""


class TooLarge(OracleError):
    """The requested enumeration is combinatorially out of reach."""


# ---------------------------------------------------------------------------
# Configuration / CLI

class ConfigError(PwmlpError):
    """Base class for run-configuration problems."""


class ParseError(ConfigError):
    """The configuration file could not be parsed."""
