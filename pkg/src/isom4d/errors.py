"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class Isom4dError(Exception):
    """Base class for all errors raised by isom4d."""


class NotSymmetric(Isom4dError, ValueError):
    pass


class NotPositiveDefinite(Isom4dError, ValueError):
    pass


class Singular(Isom4dError, ValueError):
    pass


class ZeroPolynomial(Isom4dError, ValueError):
    pass


class UnknownAlgebra(Isom4dError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class UnknownGroup(Isom4dError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ParamOutOfDomain(Isom4dError, ValueError):
    """A parameter binding violates a domain constraint; the message names it."""


class NoTemplate(Isom4dError, LookupError):
    """No automorphism template or metric family exists for this algebra."""


class ClosedFormMismatch(Isom4dError, AssertionError):
    """phi(U) disagrees with the transcribed closed-form metric matrix."""

    def __init__(self, message: str, cells: list[tuple[int, int, str, str]] | None = None):
        super().__init__(message)
        self.cells = cells or []


class NonCircleComponent(Isom4dError, ValueError):
    pass


class Unrecognized(Isom4dError, ValueError):
    pass


class ClosureViolation(Isom4dError, ArithmeticError):
    pass


class BasisMismatch(Isom4dError, AssertionError):
    pass
