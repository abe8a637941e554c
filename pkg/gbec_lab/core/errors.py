"""
Exceptions raised by the gbec-lab solvers
"""

from typing import Optional


class GbecError(Exception):
    """Base class for every error raised by gbec-lab"""


class DomainError(GbecError, ValueError):
    """An argument lies outside the domain of the operation"""


class DivergentSeries(GbecError):
    """A Bose series is evaluated where it diverges (alpha = 0, n <= 1)"""


class NoSolution(GbecError):
    """The equation has no root for the given arguments"""


class NonConvergence(GbecError):
    """An iterative solver ran out of iterations"""

    def __init__(self, message: str, last_iterate: Optional[float] = None):
        super().__init__(message)
        self.last_iterate = last_iterate


class BracketFailure(GbecError):
    """A bracketing solver could not enclose the root"""


class InsufficientData(GbecError):
    """Too few points for a scaling fit"""


class InvalidExponents(GbecError):
    """Box exponents violate ordering or the unit-sum constraint"""


class CutoffTooTight(GbecError):
    """The truncated spectrum leaves too many particles in the tail"""


class ConfigError(GbecError):
    """Invalid run configuration"""
