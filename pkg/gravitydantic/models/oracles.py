# -*- coding: utf-8 -*-
"""
CLOSED FORMS FOR BRANCHES AT REST \n
For two static branches a distance d apart over a window T every pair functional
reduces to a lag integral with an elementary antiderivative. These values check
the general quadrature and replace it when T is far beyond the direct range.
"""
# Import other packages
import math
import numpy as np
from scipy.integrate import quad


"""
HELPERS
"""


# log(1 + z) for complex z, accurate when |z| is small
def _log1p_complex(z: complex) -> complex:
    if abs(z) < 1e-2:
        total, term = 0j, z
        for k in range(1, 10):
            total += term / k
            term *= -z
        return total
    return complex(np.log(1.0 + z))


# (W + d) log(W + d) - (W - d) log(W - d), stable for |W| much larger than d
def _paired_log(W: complex, d: float) -> complex:
    if abs(W) > 100.0 * d:
        return (
            2.0 * d * complex(np.log(W))
            + (W + d) * _log1p_complex(d / W)
            - (W - d) * _log1p_complex(-d / W)
        )
    return (W + d) * complex(np.log(W + d)) - (W - d) * complex(np.log(W - d))


def principal_lag_integral(T: float, d: float) -> float:
    """
    I(T, d) with PV∫∫_{[0,T]²} dt dt' / (d² - (t - t')²) = 2 I(T, d).
    Grows like 1 + ln(T/d) for T ≫ d.
    """
    x = T / d
    if x > 2.0:
        return 0.5 * (
            2.0 * math.log(x)
            + (x + 1.0) * math.log1p(1.0 / x)
            - (x - 1.0) * math.log1p(-1.0 / x)
        )
    lower = 0.0 if x == 1.0 else (x - 1.0) * math.log(abs(x - 1.0))
    return 0.5 * ((x + 1.0) * math.log1p(x) - lower)


"""
FUNCTIONS
"""


def static_delta(m1: float, m2: float, T: float, d: float) -> float:
    """
    Radiation functional of two static branches, 2 m1 m2 (T - d) / (4π d).
    Zero for T ≤ d.
    """
    return 2.0 * m1 * m2 * max(T - d, 0.0) / (4.0 * math.pi * d)


def static_hadamard(m1: float, m2: float, T: float, d: float) -> float:
    """
    Hadamard functional of two static branches, m1 m2 I(T, d) / π².
    """
    return m1 * m2 * principal_lag_integral(T, d) / math.pi**2


def static_hadamard_cauchy(
    m1: float,
    m2: float,
    T: float,
    d: float,
    epsabs: float = 1e-13,
    epsrel: float = 1e-12,
) -> float:
    """
    The same Hadamard functional from scipy's Cauchy-weighted principal value,
    independent of the closed form.
    """
    if T <= d:
        value, _ = quad(
            lambda s: (T - s) / (d * d - s * s), 0.0, T, epsabs=epsabs, epsrel=epsrel
        )
    else:
        value, _ = quad(
            lambda s: -(T - s) / (d + s),
            0.0,
            T,
            weight="cauchy",
            wvar=d,
            epsabs=epsabs,
            epsrel=epsrel,
            limit=400,
        )
    return m1 * m2 * 2.0 * value / (2.0 * math.pi**2)


def static_self_noise(m: float, T: float, cutoff: float) -> float:
    """
    Wightman noise of a branch at rest with itself, m² ln(1 + T²/a²) / (4π²).
    """
    return m * m * math.log1p((T / cutoff) ** 2) / (4.0 * math.pi**2)


def static_cross_noise(
    m1: float, m2: float, T: float, d: float, cutoff: float
) -> float:
    """
    Wightman noise between two branches at rest a distance d apart, with the
    time-smeared kernel Re 1/(4π² (d² - (t - t' - ia)²)).
    """
    if d == 0.0:
        return static_self_noise(math.sqrt(m1 * m2), T, cutoff)
    c = 1j * cutoff
    W = T - c
    total = (
        _paired_log(W, d)
        - 1j * math.pi * (W - d)
        + (W - d) * complex(np.log(d + c))
        - (W + d) * complex(np.log(d - c))
    )
    return m1 * m2 * (total / d).real / (4.0 * math.pi**2)


def static_dominance_ratio(
    distances: dict, T: float, m1: float = 1.0, m2: float = 1.0
) -> float:
    """
    |Δ_LL + Δ_RR - Δ_LR - Δ_RL| / |H_LL + H_RR - H_LR - H_RL| for static branches
    at the given pair distances, keyed L1L2, L1R2, R1L2, R1R2.
    """
    signs = {"L1L2": 1.0, "R1R2": 1.0, "L1R2": -1.0, "R1L2": -1.0}
    delta = sum(s * static_delta(m1, m2, T, distances[k]) for k, s in signs.items())
    hadamard = sum(
        s * static_hadamard(m1, m2, T, distances[k]) for k, s in signs.items()
    )
    return abs(delta) / abs(hadamard)
