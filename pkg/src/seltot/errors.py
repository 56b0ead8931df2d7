"""Exception taxonomy.

Three broad classes matter to callers (and to the CLI exit codes): bad
inputs or out-of-region requests (ConfigError family), missing or broken
data files (DataError), and numerical failures inside an otherwise valid
computation (NumericsError family).
"""


class SeltotError(Exception):
    """Base class for all package errors."""


class ConfigError(SeltotError):
    """Invalid parameters, violated preconditions, out-of-region requests."""


class RegionError(ConfigError):
    """Evaluation requested outside the validity window of a representation."""


class BranchCutError(ConfigError):
    """Argument lies on the branch cut (negative real axis)."""


class PoleError(ConfigError):
    """Evaluation exactly at (or too close to) a pole."""


class DataError(SeltotError):
    """Missing or malformed data file."""


class NumericsError(SeltotError):
    """A numerical procedure failed to reach its target."""


class ConvergenceError(NumericsError):
    """Series or iteration exceeded its term budget."""


class TailBoundError(NumericsError):
    """Estimated truncation error exceeds the allowed tolerance."""


class ScanError(NumericsError):
    """Zero scanning failed to bracket a sign change."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval
