# -*- coding: utf-8 -*-
"""
RETARDED TIMES AND THE RELATIVISTIC PAIR HAMILTONIAN \n
Solves t - t_r = |x - z(t_r)| for a worldline source and evaluates the symmetrized
interaction energy between two worldlines, which reduces to -G m1 m2 / d at rest.
"""
# Import Pydantic models and types
from pydantic import BaseModel, ConfigDict
from typing import Tuple, Union

# Import models and utils
from gravitydantic.models.core import FourVector, WorldlineModel
from gravitydantic.models._utils.errors import SingularityError, SolverError
from gravitydantic.models._utils.quadrature import integrate

# Import other packages
import math
from scipy.optimize import brentq


"""
DEFAULTS
"""


_RESIDUAL_TOLERANCE = 1e-12  # Scaled by max(1, |t|)
_NEWTON_STEPS = 3
_COINCIDENCE = 1e-300


"""
MODELS
"""


class RetardedSolution(BaseModel):
    """
    The emission event on a source worldline whose light signal reaches a field point.
    unit_separation points from the emission point to the field point.
    """

    model_config = ConfigDict(frozen=True)

    t_r: float
    unit_separation: Tuple[float, float, float]
    distance: float
    doppler_factor: float
    in_window: bool


"""
HELPERS
"""


# Light-cone residual and its derivative for a signal travelling in direction sign
def _residual(source: WorldlineModel, t: float, x, s: float, sign: float):
    z, v = source.kinematics(s)
    r = (x[0] - z[0], x[1] - z[1], x[2] - z[2])
    distance = math.sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
    value = sign * (t - s) - distance
    if distance > _COINCIDENCE:
        slope = -sign + (r[0] * v[0] + r[1] * v[1] + r[2] * v[2]) / distance
    else:
        slope = -sign
    return value, slope


def _light_cone_root(
    source: WorldlineModel, t: float, x, sign: float
) -> Tuple[float, float]:
    """
    Root s of sign·(t - s) = |x - z(s)|, retarded for sign = +1 and advanced for -1.
    The residual is monotone for subluminal sources, so [t - R/(1 - v), t] brackets it.
    """
    z = source.kinematics(t)[0]
    reach = math.dist(x, z)
    tolerance = _RESIDUAL_TOLERANCE * max(1.0, abs(t))
    if reach <= _COINCIDENCE:
        return t, 0.0
    spread = reach / (1.0 - source.max_speed)
    near, far = t, t - sign * spread
    residual = lambda s: _residual(source, t, x, s, sign)[0]

    # Widen the far end until the residual changes sign
    for _ in range(60):
        if residual(far) >= 0.0:
            break
        spread *= 2.0
        far = t - sign * spread
    else:
        raise SolverError(f"Light-cone root for field time {t} could not be bracketed.")
    lo, hi = sorted((near, far))
    root = brentq(residual, lo, hi, xtol=1e-15, rtol=4.0 * 2.220446049250313e-16)

    # Safeguarded Newton polish
    value, slope = _residual(source, t, x, root, sign)
    for _ in range(_NEWTON_STEPS):
        if abs(value) <= 0.25 * tolerance or slope == 0.0:
            break
        candidate = root - value / slope
        if not lo <= candidate <= hi:
            break
        candidate_value, candidate_slope = _residual(source, t, x, candidate, sign)
        if abs(candidate_value) >= abs(value):
            break
        root, value, slope = candidate, candidate_value, candidate_slope
    if abs(value) > tolerance:
        raise SolverError(
            f"Light-cone residual {abs(value):.3e} at field time {t} exceeds "
            f"{tolerance:.1e}."
        )
    return root, value


def _solution(source: WorldlineModel, t: float, x, root: float) -> RetardedSolution:
    z, v = source.kinematics(root)
    r = (x[0] - z[0], x[1] - z[1], x[2] - z[2])
    distance = math.sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
    if distance > _COINCIDENCE:
        n = (r[0] / distance, r[1] / distance, r[2] / distance)
    else:
        n = (0.0, 0.0, 0.0)
    return RetardedSolution(
        t_r=root,
        unit_separation=n,
        distance=distance,
        doppler_factor=1.0 - (n[0] * v[0] + n[1] * v[1] + n[2] * v[2]),
        in_window=source.in_domain(root),
    )


"""
FUNCTIONS
"""


def solve_retarded_time(
    source: WorldlineModel, field_point: FourVector
) -> RetardedSolution:
    """
    Solve t - t_r - |x - z(t_r)| = 0 for the unique t_r <= t.
    Emission before the window start is returned with in_window set to False.
    """
    t, x = field_point.t, tuple(field_point.components[1:])
    root, _ = _light_cone_root(source, t, x, 1.0)
    return _solution(source, t, x, root)


def light_cone_times(source: WorldlineModel, t: float, x) -> Tuple[float, float]:
    """
    Retarded and advanced times on source that are null-separated from (t, x).
    """
    retarded = _light_cone_root(source, t, x, 1.0)[0]
    advanced = _light_cone_root(source, t, x, -1.0)[0]
    return retarded, advanced


def bitensor_contract(u_a: FourVector, u_b: FourVector) -> float:
    """
    P_{μνα'β'} u_a^μ u_a^ν u_b^α' u_b^β' = 2 (η u_a u_b)² - 1.
    """
    product = u_a.minkowski(u_b)
    return 2.0 * product * product - 1.0


# Fast contraction from plain velocities, used inside quadrature loops
def _contract_velocities(va, vb) -> Tuple[float, float, float]:
    ga = 1.0 / math.sqrt(1.0 - (va[0] * va[0] + va[1] * va[1] + va[2] * va[2]))
    gb = 1.0 / math.sqrt(1.0 - (vb[0] * vb[0] + vb[1] * vb[1] + vb[2] * vb[2]))
    product = ga * gb * (va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2] - 1.0)
    return 2.0 * product * product - 1.0, ga, gb


def retarded_field_density(
    receiver: WorldlineModel, source: WorldlineModel, t: float
) -> float:
    """
    P / [u⁰ u⁰_r (1 - r̂·ż_r) R] for the field of source at receiver's point at time t,
    zero when the emission precedes the window.
    """
    x, v = receiver.kinematics(t)
    root, _ = _light_cone_root(source, t, x, 1.0)
    if root < 0.0:
        return 0.0
    solution = _solution(source, t, x, root)
    if solution.distance <= _COINCIDENCE:
        raise SingularityError(f"Worldlines coincide at time {t}.")
    contraction, g_receiver, g_source = _contract_velocities(
        v, source.kinematics(root)[1]
    )
    return contraction / (
        g_receiver * g_source * solution.doppler_factor * solution.distance
    )


def pair_hamiltonian(
    w1: WorldlineModel, w2: WorldlineModel, t: float, G: float = 1.0
) -> float:
    """
    H_I(t) = (H12 + H21)/2, each term the energy of one worldline in the retarded
    field of the other: -G m1 m2 [2(η u u_r)² - 1] / [u⁰ u⁰_r (1 - r̂·ż_r) R].
    """
    for w in (w1, w2):
        w.four_velocity(t)
    if math.dist(w1.kinematics(t)[0], w2.kinematics(t)[0]) <= _COINCIDENCE:
        raise SingularityError(f"Worldlines coincide at time {t}.")
    coupling = -G * w1.mass * w2.mass
    density = retarded_field_density(w2, w1, t) + retarded_field_density(w1, w2, t)
    return 0.5 * coupling * density


def arrival_time(
    receiver: WorldlineModel, source: WorldlineModel, emitted: float = 0.0
) -> float:
    """
    Receiver time at which a signal emitted by source at time emitted arrives.
    With the default emission at t = 0 the retarded integrand switches on there.
    """
    z0 = source.kinematics(emitted)[0]
    f = lambda t: t - emitted - math.dist(receiver.kinematics(t)[0], z0)
    if f(emitted) >= 0.0:
        return emitted
    reach = math.dist(receiver.kinematics(emitted)[0], z0)
    hi = emitted + reach / (1.0 - receiver.max_speed)
    while f(hi) < 0.0:
        hi *= 2.0
    return brentq(f, emitted, hi, xtol=1e-15)


def integrated_pair_hamiltonian(
    w1: WorldlineModel,
    w2: WorldlineModel,
    G: float = 1.0,
    epsabs: float = 1e-9,
    epsrel: float = 1e-7,
) -> Tuple[float, float]:
    """
    ∫₀ᵀ H_I(t) dt with breakpoints where each retarded term switches on.
    Returns the value and its error estimate.
    """
    T = min(w1.duration, w2.duration)
    points = [arrival_time(w1, w2), arrival_time(w2, w1)]
    points += [*w1.breakpoints(), *w2.breakpoints()]
    return integrate(
        lambda t: pair_hamiltonian(w1, w2, t, G),
        0.0,
        T,
        points=points,
        epsabs=epsabs,
        epsrel=epsrel,
    )


def departure_time(
    receiver: WorldlineModel,
    source: WorldlineModel,
    absorbed: Union[None, float] = None,
) -> float:
    """
    Receiver time whose signal reaches source exactly at time absorbed.
    With the default, the window end, the advanced integrand switches off there.
    """
    T = source.duration if absorbed is None else absorbed
    zT = source.kinematics(T)[0]
    f = lambda t: T - t - math.dist(receiver.kinematics(t)[0], zT)
    if f(T) >= 0.0:
        return T
    lo = T - math.dist(receiver.kinematics(T)[0], zT) / (1.0 - receiver.max_speed)
    while f(lo) < 0.0:
        lo -= max(abs(T), 1.0)
    return brentq(f, lo, T, xtol=1e-15)
