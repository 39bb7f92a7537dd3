"""Exception types raised across the package."""


class FetalSepError(Exception):
    """Base class for all package errors."""


class ParseError(FetalSepError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DataError(FetalSepError, ValueError):
    pass


class LayoutError(FetalSepError, ValueError):
    pass


class ShapeError(FetalSepError, ValueError):
    pass


class DivergedError(FetalSepError, RuntimeError):
    pass


class ConfigError(FetalSepError, ValueError):
    pass


class MetricError(FetalSepError, ValueError):
    pass


class PeakError(FetalSepError, ValueError):
    def __init__(self, band, message=None):
        super().__init__(message or f"no spectral peak in {band} band")
        self.band = band


class IoError(FetalSepError, OSError):
    pass
