"""
Exception hierarchy shared by the series, sampler, statistics, oracle and experiment packages.
"""

class MallowsError(Exception):
    """Base class for every error raised by mallowscycles."""

class DomainError(MallowsError, ValueError):
    """A parameter lies outside the regime an operation is defined for."""

class ReflectionError(DomainError):
    """A window's index interval is not closed under the requested reflection."""

class RangeOverflowError(MallowsError, OverflowError):
    """A result would exceed the floating-point range."""

class PrecisionError(MallowsError, ArithmeticError):
    """A requested tolerance cannot be certified in double precision."""

class InsufficientDataError(MallowsError, ValueError):
    """Too few blocks, replicates or observations for an estimator."""

class SchemaError(MallowsError, ValueError):
    """A CSV file does not carry the columns a consumer needs."""
    def __init__(self, path: str, missing: list[str] | None = None, reason: str | None = None) -> None:
        self.path = path
        self.missing = missing or []
        detail = reason if reason else f"missing columns {', '.join(self.missing)}"
        super().__init__(f"{path}: {detail}")

class OutputLockedError(MallowsError):
    """Another process holds the lock on an output file."""
