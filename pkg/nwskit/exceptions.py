"""
Exception hierarchy for the NWS toolkit.

Pole markers are values, not exceptions; everything here signals a failed
precondition or an unusable computation.
"""
from typing import Optional


class NWSError(Exception):
    """Base class for all toolkit errors."""


class ExprSyntaxError(NWSError):
    """Expression text does not conform to the grammar."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UndeclaredVariableError(NWSError):
    """An identifier is neither a function, a constant nor a declared variable."""

    def __init__(self, name: str, offset: Optional[int] = None):
        super().__init__(f"Undeclared variable '{name}'")
        self.name = name
        self.offset = offset


class ZeroTestInconclusive(NWSError):
    """Too many sample points of a zero test hit poles."""


class DomainError(NWSError):
    """Argument outside the domain of a special function."""


class InvariantViolationError(NWSError):
    """A sampled invariant of a triple, transform or vector field fails."""


class NotReducibleError(NWSError):
    """A reducing transformation was requested for a non-reducible triple."""


class RealValuednessError(NWSError):
    """A square root of a nonpositive coefficient would be required."""


class InversionError(NWSError):
    """A monotone function could not be inverted on the requested range."""


class QuadratureError(NWSError):
    """Quadrature hit a pole or failed to converge."""


class PatternMismatchError(NWSError):
    """A coefficient does not have the form required by a classification row."""


class SignMismatchError(NWSError):
    """A solution family was requested for the wrong sign of lambda."""


class ParameterDomainError(NWSError):
    """A family parameter takes a forbidden value."""


class StepSizeUnderflowError(NWSError):
    """The adaptive time integrator could not make progress."""

    def __init__(self, t: float, h: float):
        super().__init__(f"Step size underflow at t={t:.6g} (h={h:.3g})")
        self.t = t
        self.h = h


class BoundaryPoleError(NWSError):
    """Initial or boundary data of a method-of-lines run hits a pole."""


class AllPolesError(NWSError):
    """Every point of a residual grid is a pole."""


class PoleEncountered(ArithmeticError):
    """Internal signal raised inside evaluators and caught at API boundaries."""

    def __init__(self, where: str = ""):
        super().__init__(where)
        self.where = where
