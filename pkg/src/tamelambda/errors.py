"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""


class TameLambdaError(Exception):
    exit_code = 1


class DomainError(TameLambdaError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 2


class HypothesisError(DomainError):
    """A theorem hypothesis does not hold for the given input.

    Outside the hypotheses nothing is proved, so the tool refuses instead
    of extrapolating.
    """


class UnsupportedError(DomainError):
    exit_code = 2


class InvariantError(TameLambdaError, AssertionError):
    """Two independent computations disagree, or an internal check failed."""

    exit_code = 3


class ResourceError(TameLambdaError):
    exit_code = 4
