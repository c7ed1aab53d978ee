from __future__ import annotations


class AADError(ValueError):
    """Base class for every error raised by the library; carries the CLI exit code."""

    exit_code: int = 2


class InputError(AADError):
    exit_code = 2


class StatisticalError(AADError):
    exit_code = 3


class LengthMismatch(InputError):
    pass


class DegenerateWindow(InputError):
    pass


class InvalidWindow(InputError):
    pass


class OutOfDomain(InputError):
    pass


class NormConstraint(InputError):
    pass


class GridMismatch(InputError):
    pass


class EmptySet(InputError):
    pass


class MissingPool(InputError):
    pass


class InsufficientPool(InputError):
    pass


class ParseError(InputError):
    pass


class ZeroVariance(StatisticalError):
    pass


class TooFewSamples(StatisticalError):
    pass
