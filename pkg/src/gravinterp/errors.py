"""Exception types raised by gravinterp.

Programming-contract violations (wrong argument counts, out-of-range
degrees, empty point lists) raise plain ``ValueError``. The classes here
cover data, configuration, and numerical failures that callers are
expected to handle.
"""


class GravinterpError(Exception):
    """Base class for all gravinterp-specific errors."""


class ParseError(GravinterpError):
    """A malformed input record.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ValidationError(GravinterpError):
    """An observation violates its field invariants (e.g. latitude > 90)."""


class ConfigError(GravinterpError):
    """An invalid run configuration (bad split, bad grids, missing spec)."""


class DegenerateScaleError(GravinterpError):
    """A length scale required to be positive is zero (coincident points)."""


class ConditioningError(GravinterpError):
    """A local solve was rejected by the reciprocal-condition gate.

    Carries the condition estimate so failures can be reported, not
    silently turned into garbage values.
    """

    def __init__(self, rcond: float, size: int):
        super().__init__(
            f"local {size}x{size} system rejected: rcond={rcond:.6e}"
        )
        self.rcond = rcond
        self.size = size


class KernelDomainError(GravinterpError):
    """Kernel arguments left the kernel's domain (Q <= 0 or log arg <= 0)."""


class StatisticsError(GravinterpError):
    """Too few residuals to form a standard deviation."""
