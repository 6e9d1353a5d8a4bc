# -*- coding: utf-8 -*-
"""
ADAPTIVE QUADRATURE AND EXTRAPOLATION HELPERS \n
Thin wrappers over scipy.integrate that report error estimates and fail loudly,
plus the Richardson limit used to remove the iε smearing of singular kernels.
"""
# Import utils
from gravitydantic.models._utils.errors import AccuracyError

# Import other packages
import logging
import numpy as np
from scipy.integrate import IntegrationWarning, quad, quad_vec
from typing import Callable, Iterable, List, Sequence, Tuple
import warnings

logger = logging.getLogger(__name__)


"""
DEFAULTS
"""


_DEFAULT_EPSABS = 1e-9
_DEFAULT_EPSREL = 1e-7
_DEFAULT_LIMIT = 200

# Successive differences of a convergent schedule must shrink at least this much
_CAUCHY_CONTRACTION = 0.75


"""
HELPERS
"""


# Keep only breakpoints strictly inside the interval, sorted and deduplicated
def _interior_points(a: float, b: float, points: Iterable[float]) -> List[float]:
    span = b - a
    pad = 1e-13 * max(1.0, abs(a), abs(b))
    inside = sorted(
        {float(p) for p in points if np.isfinite(p) and a + pad < p < b - pad}
    )
    kept = []
    for p in inside:
        if not kept or p - kept[-1] > 1e-12 * span:
            kept.append(p)
    return kept


# The tolerance quad promises for a given result
def _tolerance(value: float, epsabs: float, epsrel: float) -> float:
    return max(epsabs, epsrel * float(np.max(np.abs(value))))


"""
FUNCTIONS
"""


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    points: Iterable[float] = (),
    epsabs: float = _DEFAULT_EPSABS,
    epsrel: float = _DEFAULT_EPSREL,
    limit: int = _DEFAULT_LIMIT,
) -> Tuple[float, float]:
    """
    Integrate a scalar function over [a, b] with scipy's adaptive quad.
    Breakpoints outside the open interval are dropped.
    Returns the value and the absolute error estimate, or raises AccuracyError
    when quad warns and its estimate misses the requested tolerance.
    """
    if b <= a:
        return 0.0, 0.0
    interior = _interior_points(a, b, points)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, error = quad(
            f,
            a,
            b,
            points=interior or None,
            epsabs=epsabs,
            epsrel=epsrel,
            limit=limit + 2 * len(interior),
        )
    warned = any(issubclass(w.category, IntegrationWarning) for w in caught)
    tolerance = _tolerance(value, epsabs, epsrel)
    if warned and error > tolerance:
        raise AccuracyError(
            f"Quadrature on [{a:.6g}, {b:.6g}] did not converge: "
            f"error estimate {error:.3e} exceeds tolerance {tolerance:.3e}.",
            estimate=error,
            tolerance=tolerance,
        )
    return value, error


def integrate_vector(
    f: Callable[[float], np.ndarray],
    a: float,
    b: float,
    points: Iterable[float] = (),
    epsabs: float = _DEFAULT_EPSABS,
    epsrel: float = _DEFAULT_EPSREL,
    limit: int = _DEFAULT_LIMIT,
) -> Tuple[np.ndarray, float]:
    """
    Integrate a vector-valued function over [a, b] with scipy's quad_vec.
    All components share one adaptive partition, measured in the max norm.
    """
    if b <= a:
        probe = np.asarray(f(a), dtype=float)
        return np.zeros_like(probe), 0.0
    interior = _interior_points(a, b, points)
    value, error, info = quad_vec(
        f,
        a,
        b,
        epsabs=epsabs,
        epsrel=epsrel,
        norm="max",
        limit=limit * (1 + len(interior)),
        points=interior or None,
        full_output=True,
    )
    tolerance = _tolerance(value, epsabs, epsrel)
    if not info.success and error > tolerance:
        raise AccuracyError(
            f"Vector quadrature on [{a:.6g}, {b:.6g}] did not converge: "
            f"{info.message}",
            estimate=error,
            tolerance=tolerance,
        )
    return np.asarray(value, dtype=float), float(error)


def integrate_nested(
    f: Callable[[float, float], float],
    outer: Tuple[float, float],
    inner: Callable[[float], Tuple[float, float]],
    outer_points: Iterable[float] = (),
    inner_points: Callable[[float], Iterable[float]] = lambda t: (),
    epsabs: float = _DEFAULT_EPSABS,
    epsrel: float = _DEFAULT_EPSREL,
    limit: int = _DEFAULT_LIMIT,
) -> Tuple[float, float]:
    """
    Tensor-product adaptive quadrature of f(t, s) over t in outer and s in inner(t).
    The reported error adds the outer estimate and the worst inner estimate
    scaled by the outer length.
    """
    inner_errors = [0.0]

    # Inner integral at fixed outer coordinate
    def _inner(t: float) -> float:
        lo, hi = inner(t)
        value, error = integrate(
            lambda s: f(t, s),
            lo,
            hi,
            points=inner_points(t),
            epsabs=epsabs,
            epsrel=epsrel,
            limit=limit,
        )
        inner_errors.append(error)
        return value

    a, b = outer
    value, error = integrate(
        _inner, a, b, points=outer_points, epsabs=epsabs, epsrel=epsrel, limit=limit
    )
    return value, error + (b - a) * max(inner_errors)


def integrate_nested_vector(
    f: Callable[[float, float], np.ndarray],
    outer: Tuple[float, float],
    inner: Callable[[float], Tuple[float, float]],
    outer_points: Iterable[float] = (),
    inner_points: Callable[[float], Iterable[float]] = lambda t: (),
    epsabs: float = _DEFAULT_EPSABS,
    epsrel: float = _DEFAULT_EPSREL,
    limit: int = _DEFAULT_LIMIT,
) -> Tuple[np.ndarray, float]:
    """
    Same as integrate_nested for vector-valued integrands, one value per component.
    """
    inner_errors = [0.0]

    def _inner(t: float) -> np.ndarray:
        lo, hi = inner(t)
        value, error = integrate_vector(
            lambda s: f(t, s),
            lo,
            hi,
            points=inner_points(t),
            epsabs=epsabs,
            epsrel=epsrel,
            limit=limit,
        )
        inner_errors.append(error)
        return value

    a, b = outer
    value, error = integrate_vector(
        _inner, a, b, points=outer_points, epsabs=epsabs, epsrel=epsrel, limit=limit
    )
    return value, error + (b - a) * max(inner_errors)


"""
EXTRAPOLATION
"""


def smearing_terms(count: int) -> List[Callable[[np.ndarray], np.ndarray]]:
    """
    Basis of the small-ε expansion of an iε-smeared principal value:
    1, x, x ln x, x², x² ln x, x³, ... truncated to count terms.
    """
    terms = [lambda x: np.ones_like(x)]
    power = 1
    while len(terms) < count:
        terms.append(lambda x, p=power: x**p)
        if len(terms) < count:
            terms.append(lambda x, p=power: x**p * np.log(x))
        power += 1
    return terms


def _fit_limit(x: np.ndarray, values: np.ndarray, count: int) -> float:
    terms = smearing_terms(count)
    matrix = np.column_stack([term(x) for term in terms])
    coefficients, *_ = np.linalg.lstsq(matrix, values, rcond=None)
    return float(coefficients[0])


def _check_cauchy(values: np.ndarray, scale: float) -> None:
    differences = np.abs(np.diff(values))
    if differences[-1] <= scale:
        return
    if differences[-1] > _CAUCHY_CONTRACTION * differences[0]:
        raise AccuracyError(
            "Smeared values do not converge as ε decreases "
            f"(last step {differences[-1]:.3e}, first step {differences[0]:.3e}).",
            estimate=float(differences[-1]),
            tolerance=scale,
        )


def richardson_limit(
    epsilons: Sequence[float],
    values: Sequence[float],
    epsabs: float = _DEFAULT_EPSABS,
) -> Tuple[float, float]:
    """
    Extrapolate a sequence of smeared values to ε → 0.
    The values are fitted exactly by the first len(values) smearing_terms; the error
    estimate compares that limit with the one from the smallest len(values) - 1 ε.
    A sequence whose steps do not contract raises AccuracyError.
    """
    x = np.asarray(epsilons, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.size < 3 or x.size != y.size:
        raise ValueError("Richardson extrapolation needs at least three levels.")
    if np.any(x <= 0) or np.any(np.diff(x) >= 0):
        raise ValueError("The ε schedule must be positive and strictly decreasing.")
    _check_cauchy(y, max(epsabs, 1e-12 * float(np.max(np.abs(y)))))

    # Normalize so the basis is well conditioned
    x = x / x[0]
    limit = _fit_limit(x, y, x.size)
    coarser = _fit_limit(x[1:], y[1:], x.size - 1)
    error = abs(limit - coarser)
    logger.debug(
        "Richardson table %s -> limit %.12g (error %.3e)", y.tolist(), limit, error
    )
    return limit, error
