# -*- coding: utf-8 -*-
"""
EXCEPTIONS RAISED BY GRAVITYDANTIC \n
Validation failures on models surface as pydantic ValidationError, which is a ValueError.
The classes below cover the numerical and configuration failures that happen afterwards.
"""
# Import other packages
from typing import List, Union


"""
BASE
"""


class GravitydanticError(Exception):
    """
    Base class for every error raised by the package itself.
    """


"""
DOMAIN & GEOMETRY
"""


class DomainError(GravitydanticError, ValueError):
    """
    A worldline was evaluated outside its interaction window.
    """


class SingularityError(GravitydanticError, ArithmeticError):
    """
    Two evaluation points coincide, so a kernel diverges.
    """


class ConfigurationError(GravitydanticError, ValueError):
    """
    The branch layout does not satisfy the symmetry assumed by the correction matrices.
    """


"""
NUMERICS
"""


class SolverError(GravitydanticError, RuntimeError):
    """
    A light-cone root could not be bracketed or polished to tolerance.
    """


class AccuracyError(GravitydanticError, ArithmeticError):
    """
    A quadrature or extrapolation did not reach its tolerance.
    The estimate that failed is kept on the instance.
    """

    def __init__(
        self,
        message: str,
        estimate: Union[None, float] = None,
        tolerance: Union[None, float] = None,
    ):
        super().__init__(message)
        self.estimate = estimate
        self.tolerance = tolerance


"""
CONFIGURATION DOCUMENTS
"""


class ConfigParseError(GravitydanticError, ValueError):
    """
    The config document is malformed or does not follow the schema.
    Carries the line and column of a syntax error, or the offending field paths.
    """

    def __init__(
        self,
        message: str,
        line: Union[None, int] = None,
        column: Union[None, int] = None,
        fields: Union[None, List[str]] = None,
    ):
        super().__init__(message)
        self.line = line
        self.column = column
        self.fields = fields or []


class ConfigValidationError(GravitydanticError, ValueError):
    """
    The config document parsed, but describes a physically invalid experiment.
    Every violation found is listed, not only the first.
    """

    def __init__(self, violations: List[str]):
        super().__init__(
            "Invalid configuration:\n" + "\n".join(f"  - {v}" for v in violations)
        )
        self.violations = violations
