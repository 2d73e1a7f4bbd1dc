"""Exception and warning types shared across the toolkit."""

__all__ = [
    "VerificationError",
    "EmptySeries",
    "LengthMismatch",
    "OutOfRangeProbability",
    "NonBinaryOutcome",
    "BadProbability",
    "BadOutcomeLabel",
    "MissingColumn",
    "OddsNotAboveOne",
    "NonAscendingThresholds",
    "BadBinCount",
    "SeriesMismatch",
    "DegenerateUncertainty",
    "DegenerateClass",
    "DegenerateVariance",
    "DegenerateInput",
    "NotConverged",
    "ZeroVariance",
    "BadLevel",
    "BadReps",
    "BadLaw",
    "DuplicateMatchIdWarning",
]


class VerificationError(Exception):
    """Base class for all errors raised by this package."""


class EmptySeries(VerificationError):
    """A series must contain at least one observation."""


class LengthMismatch(VerificationError):
    """Forecasts and outcomes are not index-aligned."""


class OutOfRangeProbability(VerificationError):
    """A probability lies outside [0, 1] beyond the clamp tolerance."""


class NonBinaryOutcome(VerificationError):
    """An outcome value is neither 0 nor 1."""


class BadProbability(VerificationError):
    """A parsed probability field is malformed or the row sum is off."""


class BadOutcomeLabel(VerificationError):
    """An outcome label is not one of H, D, A."""


class MissingColumn(VerificationError):
    """A required CSV column is absent from the header."""


class OddsNotAboveOne(VerificationError):
    """A decimal odd must be strictly greater than 1.0."""


class NonAscendingThresholds(VerificationError):
    """Bin thresholds must be strictly ascending and inside (0, 1)."""


class BadBinCount(VerificationError):
    """Requested bin count is outside [1, N]."""


class SeriesMismatch(VerificationError):
    """A binning does not belong to the series it is combined with."""


class DegenerateUncertainty(VerificationError):
    """All outcomes are equal, so the skill score is undefined."""


class DegenerateClass(VerificationError):
    """One outcome class is empty."""


class DegenerateVariance(VerificationError):
    """The null variance of the test statistic is zero."""


class DegenerateInput(VerificationError):
    """Regression input is constant in forecasts or outcomes."""


class NotConverged(VerificationError):
    """The requested quantity needs a converged fit."""


class ZeroVariance(VerificationError):
    """All observations are tied, so the rank statistic has no spread."""


class BadLevel(VerificationError):
    """Band confidence level must lie in (0.5, 1)."""


class BadReps(VerificationError):
    """Resample count is too small."""


class BadLaw(VerificationError):
    """Forecast law is not supported on (0, 1)."""


class DuplicateMatchIdWarning(UserWarning):
    """Two rows share a match id; parsing continues."""
