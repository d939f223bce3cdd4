"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ScatteringError(Exception):
    """Base class for all errors raised by ptfano."""


class InvalidModelError(ScatteringError, ValueError):
    pass


class OutOfBandError(ScatteringError, ValueError):
    """Frequency outside the open propagating band |omega| < 2|J|."""


class PoleError(ScatteringError, ZeroDivisionError):
    """An effective defect potential is evaluated at (or numerically on) a pole."""


class UnsupportedAnalysisError(ScatteringError):
    """No closed form exists for the requested model/operation pair."""


class SingularSystemError(ScatteringError, ArithmeticError):
    """The boundary-matched linear system is (numerically) singular.

    ``nearest_mode`` is the eigenfrequency of the isolated defect block
    closest to the requested frequency, the usual culprit.
    """

    def __init__(self, message: str, omega: float, condition: float, nearest_mode: complex | None = None):
        super().__init__(message)
        self.omega = omega
        self.condition = condition
        self.nearest_mode = nearest_mode
