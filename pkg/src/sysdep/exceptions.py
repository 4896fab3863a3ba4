"""Exception hierarchy shared by every module."""


class SysdepError(Exception):
    """Base class for all package errors."""


class InvalidParameter(SysdepError, ValueError):
    """A model parameter violates its constraint.

    Attributes
    ----------
    field : str
        Name of the offending field.
    constraint : str
        Human readable statement of the violated constraint.
    """

    def __init__(self, field: str, constraint: str):
        self.field = field
        self.constraint = constraint
        super().__init__(f"{field}: {constraint}")


class DomainError(SysdepError, ValueError):
    """Argument outside the domain of a function (negative time, bad index)."""


class DegenerateError(SysdepError, ArithmeticError):
    """The requested quantity is undefined at this point (e.g. F(t) == 0)."""


class IntegrationFailure(SysdepError, ArithmeticError):
    """A tail bound for the mean residual life integral could not be found."""


class SizeLimit(SysdepError, ValueError):
    """Subset enumeration requested beyond the supported component count."""


class Unsupported(SysdepError, NotImplementedError):
    """Operation not available for this family or configuration."""


class UnsupportedFamily(Unsupported):
    """No exact sampler exists for this family."""
