"""Exception hierarchy shared by all tvsetar modules."""

from __future__ import annotations


class TvSetarError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TvSetarError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedWavelet(TvSetarError, ValueError):
    """Requested (family, vanishing moments) pair has no shipped filter."""


class InsufficientResolution(TvSetarError, ValueError):
    """Sampling grid too coarse for the requested resolution level."""


class NonergodicModel(TvSetarError, ValueError):
    """Regime slopes violate phi1_low < 1, phi1_high < 1, phi1_low*phi1_high < 1."""


class InvalidVariance(TvSetarError, ValueError):
    pass


class DegenerateRegime(TvSetarError):
    """A regime is too small or the regression design is singular."""

    def __init__(self, message: str, n_low: int = 0, n_high: int = 0):
        super().__init__(message)
        self.n_low = n_low
        self.n_high = n_high


class FitFailed(TvSetarError):
    """Every candidate threshold produced a degenerate regression."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class BootstrapUnstable(TvSetarError):
    """More than 10% of bootstrap refits failed."""

    def __init__(self, message: str, dropped: int, requested: int):
        super().__init__(message)
        self.dropped = dropped
        self.requested = requested


class ConstantSeries(TvSetarError, ValueError):
    """Series has zero sample variance."""


class ConfigError(TvSetarError, ValueError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class IngestionError(TvSetarError, ValueError):
    """Input table could not be parsed; ``row`` is 1-based and counts the header."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(f"row {row}: {message}" if row is not None else message)
        self.row = row
