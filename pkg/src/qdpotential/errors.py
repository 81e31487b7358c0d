"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures onto its documented status codes without a lookup table.
"""

from __future__ import annotations


class QDError(Exception):
    exit_code = 1


class ParseError(QDError):
    exit_code = 2


class DomainError(QDError):
    exit_code = 3


class SingularDataError(QDError):
    exit_code = 4


class IncompatibleDataError(QDError):
    exit_code = 5


class ResidualError(QDError):
    exit_code = 6

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class AlgebraError(QDError):
    """Zero divisors, ambiguous poles, multivalued primitives and similar."""


class RootFindingError(QDError):
    def __init__(self, message: str, best):
        super().__init__(message)
        self.best = best
