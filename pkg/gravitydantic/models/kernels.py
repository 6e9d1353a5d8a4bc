# -*- coding: utf-8 -*-
"""
PAIR FUNCTIONALS OF TWO WORLDLINES \n
Each functional is a double worldline integral of a kernel contracted with the two
point-particle stress tensors through the flat polarization bitensor P:
the radiation functional Δ (retarded plus advanced), the Hadamard functional H
and their Feynman composition -(i/2)Δ + (1/2)H. The Wightman noise terms couple
through the trace of each stress tensor instead.
"""
# Import Pydantic models and types
from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import Dict, List, Literal, Sequence, Tuple, Union

# Import models and utils
from gravitydantic.models.core import (
    BranchConfig,
    branches_congruent,
    hull_distance,
    WorldlineModel,
)
from gravitydantic.models.oracles import (
    static_cross_noise,
    static_delta,
    static_hadamard,
    static_self_noise,
)
from gravitydantic.models.retarded import (
    _contract_velocities,
    arrival_time,
    departure_time,
    light_cone_times,
    retarded_field_density,
)
from gravitydantic.models._utils.errors import AccuracyError
from gravitydantic.models._utils.labels import kernel_kinds, pair_labels
from gravitydantic.models._utils.quadrature import (
    integrate,
    integrate_nested,
    integrate_nested_vector,
    integrate_vector,
    richardson_limit,
)

# Import other packages
from joblib import delayed, Parallel
import logging
import math
import numpy as np

logger = logging.getLogger(__name__)


"""
DEFAULTS
"""


_DEFAULT_EPSABS = 1e-9
_DEFAULT_EPSREL = 1e-7
_DEFAULT_EPSILON_0 = 1e-2
_DEFAULT_EPSILON_RATIO = 0.5
_DEFAULT_EPSILON_LEVELS = 5
_DEFAULT_NOISE_CUTOFF = 1e-2
_OPEN_ARMS_WARNING = "interferometer arms are open; noise terms depend on the cutoff"


"""
SETTINGS
"""


class NumericsSettings(BaseModel):
    """
    Tolerances, the iε schedule and the caps that bound a run.
    epsilon_0 and noise_cutoff are fractions of the smallest inter-particle distance;
    the smearing of the interval σ is epsilon times that distance squared.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Quadrature
    epsabs: float = Field(_DEFAULT_EPSABS, gt=0)
    epsrel: float = Field(_DEFAULT_EPSREL, gt=0)
    quad_limit: int = Field(200, ge=50)

    # Principal-value regularization
    epsilon_0: float = Field(_DEFAULT_EPSILON_0, gt=0)
    epsilon_ratio: float = Field(_DEFAULT_EPSILON_RATIO, gt=0, lt=1)
    epsilon_levels: int = Field(_DEFAULT_EPSILON_LEVELS, ge=3, le=8)

    # Particle-size cutoff of the noise terms
    noise_cutoff: float = Field(_DEFAULT_NOISE_CUTOFF, gt=0)
    noise_sensitivity: bool = False

    # Caps and reproducibility
    max_direct_duration: float = Field(1e6, gt=0)
    oracle_tolerance: float = Field(1e-4, gt=0)
    max_grid_points: int = Field(10000, ge=1)
    n_jobs: int = 1
    seed: int = 0
    validation_trials: int = Field(100, ge=1)

    @field_validator("n_jobs")
    @classmethod
    def _must_be_job_count(cls, v):
        if v == 0 or v < -1:
            raise ValueError("n_jobs must be positive or -1 for all cores.")
        return v


def default_epsilon_schedule(numerics: NumericsSettings, scale: float) -> List[float]:
    """
    Geometric schedule of smearings of σ for a pair at distance scale.
    """
    return [
        numerics.epsilon_0 * numerics.epsilon_ratio**k * scale**2
        for k in range(numerics.epsilon_levels)
    ]


"""
MODELS
"""


class PairFunctional(BaseModel):
    """
    A double worldline integral of one kernel between two branches.
    Δ-type and H-type values are real; Feynman values are complex.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Union[float, complex]
    kind: kernel_kinds
    pair: Union[None, Tuple[str, str]] = None
    quadrature_error_estimate: float = 0.0


class NoiseTerms(BaseModel):
    """
    Wightman noise of each particle: L_V of a branch with itself and L_I between the
    two branches of the same particle, with the cutoff that regularizes them.
    """

    model_config = ConfigDict(frozen=True)

    cutoff: float
    l_v_1: float
    l_i_1: float
    l_v_2: float
    l_i_2: float
    quadrature_error_estimate: float = 0.0
    cutoff_sensitivity: Union[None, float] = None
    warnings: List[str] = []

    @property
    def l_v(self) -> float:
        return 0.5 * (self.l_v_1 + self.l_v_2)

    @property
    def l_i(self) -> float:
        return 0.5 * (self.l_i_1 + self.l_i_2)

    @property
    def differences(self) -> Tuple[float, float]:
        return self.l_v_1 - self.l_i_1, self.l_v_2 - self.l_i_2


class FunctionalSet(BaseModel):
    """
    Every functional one configuration needs, keyed by branch pair.
    Sections that were not requested stay None.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    deltas: Union[None, Dict[pair_labels, PairFunctional]] = None
    hadamards: Union[None, Dict[pair_labels, PairFunctional]] = None
    noise: Union[None, NoiseTerms] = None
    method: Literal["quadrature", "closed_form"] = "quadrature"

    @staticmethod
    def _combine(values: Dict[str, PairFunctional]):
        return (
            values["L1L2"].value
            + values["R1R2"].value
            - values["L1R2"].value
            - values["R1L2"].value
        )

    @property
    def delta_combination(self) -> float:
        """
        Δ_LL + Δ_RR - Δ_LR - Δ_RL.
        """
        return self._combine(self.deltas)

    @property
    def hadamard_combination(self) -> float:
        """
        H_LR + H_RL - H_LL - H_RR.
        """
        return -self._combine(self.hadamards)

    @property
    def feynman(self) -> Dict[pair_labels, PairFunctional]:
        return {
            label: compose_feynman(self.deltas[label], self.hadamards[label])
            for label in self.deltas
        }

    @property
    def feynman_combination(self) -> complex:
        """
        G_LL + G_RR - G_LR - G_RL.
        """
        return complex(self._combine(self.feynman))

    @property
    def max_functional(self) -> float:
        values = [0.0]
        for section in (self.deltas, self.hadamards):
            if section:
                values += [abs(f.value) for f in section.values()]
        if self.noise:
            values += [abs(self.noise.l_v_1), abs(self.noise.l_v_2)]
        return max(values)


"""
HELPERS
"""


def _stationary(w1: WorldlineModel, w2: WorldlineModel) -> bool:
    return w1.max_speed == 0.0 and w2.max_speed == 0.0


def _causally_disconnected(w1: WorldlineModel, w2: WorldlineModel) -> bool:
    return min(w1.duration, w2.duration) < hull_distance(w1, w2)


# 4π² Re W for the time-smeared vacuum Wightman function
def _wightman_real(r2: float, lag: float, a2: float) -> float:
    x = r2 - lag * lag + a2
    return x / (x * x + 4.0 * a2 * lag * lag)


# dτ/dt of a branch moving at v
def _lapse(v) -> float:
    return math.sqrt(1.0 - (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))


def _squared_separation(w1, w2, t, s):
    z1, v1 = w1.kinematics(t)
    z2, v2 = w2.kinematics(s)
    dx, dy, dz = z1[0] - z2[0], z1[1] - z2[1], z1[2] - z2[2]
    return dx * dx + dy * dy + dz * dz, v1, v2


# Outer times where the inner light-cone singularities cross the square's edges
def _outer_points(w1: WorldlineModel, w2: WorldlineModel) -> List[float]:
    points = list(w1.breakpoints())
    for emitted in (0.0, *w2.breakpoints()):
        points.append(arrival_time(w1, w2, emitted))
    for absorbed in (*w2.breakpoints(), w2.duration):
        points.append(departure_time(w1, w2, absorbed))
    return points


def _inner_points(w1: WorldlineModel, w2: WorldlineModel, t: float) -> List[float]:
    x = w1.kinematics(t)[0]
    return [*light_cone_times(w2, t, x), *w2.breakpoints()]


def _retarded_part(
    receiver: WorldlineModel, source: WorldlineModel, numerics: NumericsSettings
) -> Tuple[float, float]:
    """
    m_r m_s/(4π) ∫ dt P / [u⁰ u⁰_r (1 - r̂·ż_r) R]: the receiver's share of the
    retarded field of source, after the delta function fixes the emission time.
    """
    if _causally_disconnected(receiver, source):
        return 0.0, 0.0
    start = arrival_time(receiver, source)
    points = [*receiver.breakpoints()]
    points += [arrival_time(receiver, source, tb) for tb in source.breakpoints()]
    value, error = integrate(
        lambda t: retarded_field_density(receiver, source, t),
        start,
        receiver.duration,
        points=points,
        epsabs=numerics.epsabs,
        epsrel=numerics.epsrel,
        limit=numerics.quad_limit,
    )
    scale = receiver.mass * source.mass / (4.0 * math.pi)
    return scale * value, scale * error


def _validate_schedule(schedule: Sequence[float]) -> np.ndarray:
    etas = np.asarray(schedule, dtype=float)
    if etas.size < 3:
        raise ValueError("The ε schedule needs at least three levels.")
    if np.any(etas <= 0.0) or np.any(np.diff(etas) >= 0.0):
        raise ValueError("The ε schedule must be positive and strictly decreasing.")
    return etas


"""
RADIATION FUNCTIONAL
"""


def retarded_pair_functional(
    w1: WorldlineModel,
    w2: WorldlineModel,
    numerics: Union[None, NumericsSettings] = None,
    pair: Union[None, Tuple[str, str]] = None,
) -> PairFunctional:
    """
    ∬ T1 G_R T2: the stress of w1 in the retarded field of w2.
    """
    numerics = numerics or NumericsSettings()
    value, error = _retarded_part(w1, w2, numerics)
    return PairFunctional(
        value=value, kind="Retarded", pair=pair, quadrature_error_estimate=error
    )


def advanced_pair_functional(
    w1: WorldlineModel,
    w2: WorldlineModel,
    numerics: Union[None, NumericsSettings] = None,
    pair: Union[None, Tuple[str, str]] = None,
) -> PairFunctional:
    """
    ∬ T1 G_A T2, equal to the stress of w2 in the retarded field of w1.
    """
    numerics = numerics or NumericsSettings()
    value, error = _retarded_part(w2, w1, numerics)
    return PairFunctional(
        value=value, kind="Advanced", pair=pair, quadrature_error_estimate=error
    )


def delta_pair_functional(
    w1: WorldlineModel,
    w2: WorldlineModel,
    numerics: Union[None, NumericsSettings] = None,
    pair: Union[None, Tuple[str, str]] = None,
) -> PairFunctional:
    """
    Δ = retarded + advanced. Exactly zero, without quadrature, when the window is
    shorter than the closest approach of the two branches.
    """
    numerics = numerics or NumericsSettings()
    if _causally_disconnected(w1, w2):
        logger.debug("Pair %s is spacelike over the window; Δ = 0.", pair)
        return PairFunctional(value=0.0, kind="RadiationDelta", pair=pair)
    retarded = retarded_pair_functional(w1, w2, numerics)
    advanced = advanced_pair_functional(w1, w2, numerics)
    return PairFunctional(
        value=retarded.value + advanced.value,
        kind="RadiationDelta",
        pair=pair,
        quadrature_error_estimate=retarded.quadrature_error_estimate
        + advanced.quadrature_error_estimate,
    )


def causal_pair_functional(
    w1: WorldlineModel,
    w2: WorldlineModel,
    numerics: Union[None, NumericsSettings] = None,
    pair: Union[None, Tuple[str, str]] = None,
) -> PairFunctional:
    """
    E = advanced - retarded, proportional to the field commutator.
    """
    numerics = numerics or NumericsSettings()
    retarded = retarded_pair_functional(w1, w2, numerics)
    advanced = advanced_pair_functional(w1, w2, numerics)
    return PairFunctional(
        value=advanced.value - retarded.value,
        kind="CausalE",
        pair=pair,
        quadrature_error_estimate=retarded.quadrature_error_estimate
        + advanced.quadrature_error_estimate,
    )


"""
HADAMARD FUNCTIONAL
"""


def _stationary_hadamard(w1, w2, etas, numerics) -> Tuple[np.ndarray, float]:
    T = min(w1.duration, w2.duration)
    r2 = float(np.sum((w1.position(0.0) - w2.position(0.0)) ** 2))

    def _lag(s: float) -> np.ndarray:
        sigma = r2 - s * s
        return 2.0 * (T - s) * sigma / (sigma * sigma + etas * etas)

    return integrate_vector(
        _lag,
        0.0,
        T,
        points=[math.sqrt(r2)],
        epsabs=numerics.epsabs,
        epsrel=numerics.epsrel,
        limit=numerics.quad_limit,
    )


def _nested_hadamard(w1, w2, etas, numerics) -> Tuple[np.ndarray, float]:
    T = min(w1.duration, w2.duration)

    def _kernel(t: float, s: float) -> np.ndarray:
        r2, v1, v2 = _squared_separation(w1, w2, t, s)
        contraction, g1, g2 = _contract_velocities(v1, v2)
        sigma = r2 - (t - s) * (t - s)
        return contraction / (g1 * g2) * sigma / (sigma * sigma + etas * etas)

    return integrate_nested_vector(
        _kernel,
        (0.0, T),
        lambda t: (0.0, T),
        outer_points=_outer_points(w1, w2),
        inner_points=lambda t: _inner_points(w1, w2, t),
        epsabs=numerics.epsabs,
        epsrel=numerics.epsrel,
        limit=numerics.quad_limit,
    )


def hadamard_pair_functional(
    w1: WorldlineModel,
    w2: WorldlineModel,
    epsilon_schedule: Union[None, Sequence[float]] = None,
    numerics: Union[None, NumericsSettings] = None,
    pair: Union[None, Tuple[str, str]] = None,
) -> PairFunctional:
    """
    H = (m1 m2 / 2π²) PV∬ dt dt' P/(u⁰ u⁰') 1/σ with σ = |z1 - z2|² - (t - t')².
    Each level of the schedule replaces 1/σ by σ/(σ² + ε²); the sequence is then
    Richardson-extrapolated to ε → 0. Branches that touch have no finite limit.
    """
    numerics = numerics or NumericsSettings()
    distance = hull_distance(w1, w2)
    if distance <= 0.0:
        raise AccuracyError(
            "Branches touch, so the Hadamard functional diverges in the coincidence "
            "limit.",
            estimate=math.inf,
        )
    if epsilon_schedule is None:
        epsilon_schedule = default_epsilon_schedule(numerics, distance)
    etas = _validate_schedule(epsilon_schedule)
    if _stationary(w1, w2):
        values, error = _stationary_hadamard(w1, w2, etas, numerics)
    else:
        values, error = _nested_hadamard(w1, w2, etas, numerics)
    prefactor = w1.mass * w2.mass / (2.0 * math.pi**2)
    limit, extrapolation_error = richardson_limit(
        etas, prefactor * values, epsabs=numerics.epsabs
    )
    return PairFunctional(
        value=limit,
        kind="Hadamard",
        pair=pair,
        quadrature_error_estimate=extrapolation_error + prefactor * error,
    )


"""
FEYNMAN COMPOSITION
"""


def compose_feynman(delta: PairFunctional, hadamard: PairFunctional) -> PairFunctional:
    """
    G = -(i/2) Δ + (1/2) H, exactly.
    """
    return PairFunctional(
        value=complex(0.5 * hadamard.value, -0.5 * delta.value),
        kind="FeynmanG",
        pair=delta.pair,
        quadrature_error_estimate=0.5
        * (delta.quadrature_error_estimate + hadamard.quadrature_error_estimate),
    )


def feynman_pair_functional(
    w1: WorldlineModel,
    w2: WorldlineModel,
    numerics: Union[None, NumericsSettings] = None,
    epsilon_schedule: Union[None, Sequence[float]] = None,
    pair: Union[None, Tuple[str, str]] = None,
) -> PairFunctional:
    numerics = numerics or NumericsSettings()
    return compose_feynman(
        delta_pair_functional(w1, w2, numerics, pair),
        hadamard_pair_functional(w1, w2, epsilon_schedule, numerics, pair),
    )


"""
NOISE TERMS
"""


def single_branch_noise(
    w: WorldlineModel,
    w_other: WorldlineModel,
    cutoff: float,
    numerics: Union[None, NumericsSettings] = None,
) -> Tuple[float, float]:
    """
    ∬ dt dt' (m/u⁰)(m'/u⁰') Re W_a between two branches, W_a the vacuum Wightman
    function with the time shifted by -i·cutoff. Each branch enters through the
    trace of its stress tensor, m dτ/dt, which keeps the kernel positive: for
    congruent branches L_V - L_I is the variance of the field smeared with the
    difference of the two sources. For a branch with itself the value at rest is
    taken in closed form and only the motion is integrated.
    Returns the value and its error estimate.
    """
    numerics = numerics or NumericsSettings()
    T = min(w.duration, w_other.duration)
    a2 = cutoff * cutoff
    coupling = w.mass * w_other.mass / (4.0 * math.pi**2)
    options = dict(
        epsabs=numerics.epsabs, epsrel=numerics.epsrel, limit=numerics.quad_limit
    )

    # Same branch
    if w == w_other:
        at_rest = static_self_noise(w.mass, T, cutoff)
        if w.max_speed == 0.0:
            return at_rest, 0.0

        def _motion(t: float, s: float) -> float:
            r2, v1, v2 = _squared_separation(w, w, t, s)
            moving = _lapse(v1) * _lapse(v2) * _wightman_real(r2, t - s, a2)
            return moving - _wightman_real(0.0, t - s, a2)

        value, error = integrate_nested(
            _motion,
            (0.0, T),
            lambda t: (0.0, T),
            outer_points=w.breakpoints(),
            inner_points=lambda t: [t, *w.breakpoints()],
            **options,
        )
        return at_rest + coupling * value, coupling * error

    # Both at rest, so the kernel depends on the lag only
    if _stationary(w, w_other):
        r2 = float(np.sum((w.position(0.0) - w_other.position(0.0)) ** 2))
        value, error = integrate(
            lambda s: 2.0 * (T - s) * _wightman_real(r2, s, a2),
            0.0,
            T,
            points=[math.sqrt(r2)],
            **options,
        )
        return coupling * value, coupling * error

    def _kernel(t: float, s: float) -> float:
        r2, v1, v2 = _squared_separation(w, w_other, t, s)
        return _lapse(v1) * _lapse(v2) * _wightman_real(r2, t - s, a2)

    value, error = integrate_nested(
        _kernel,
        (0.0, T),
        lambda t: (0.0, T),
        outer_points=[*w.breakpoints(), *w_other.breakpoints()],
        inner_points=lambda t: [t, *_inner_points(w, w_other, t)],
        **options,
    )
    return coupling * value, coupling * error


def _particle_noise(left, right, cutoff, numerics) -> Tuple[float, float, float]:
    l_v, error_v = single_branch_noise(left, left, cutoff, numerics)
    l_i, error_i = single_branch_noise(left, right, cutoff, numerics)
    return l_v, l_i, error_v + error_i


def vacuum_noise_terms(
    config: BranchConfig, numerics: Union[None, NumericsSettings] = None
) -> NoiseTerms:
    """
    L_V and L_I for both particles. The cutoff is noise_cutoff times the smallest
    distance between the particles. Branch-symmetry and open-arm problems are
    attached as warnings rather than raised.
    Cross noise above self noise beyond the quadrature error raises AccuracyError.
    """
    numerics = numerics or NumericsSettings()
    cutoff = numerics.noise_cutoff * config.min_separation
    warnings = []
    values, error = [], 0.0
    for particle, (left, right) in enumerate(
        ((config.l1, config.r1), (config.l2, config.r2)), start=1
    ):
        if not branches_congruent(left, right):
            warnings.append(
                f"particle {particle}: branches are not related by a rotation and "
                "translation, so their self-noise terms differ"
            )
        l_v, l_i, err = _particle_noise(left, right, cutoff, numerics)
        if l_i > l_v + err:
            raise AccuracyError(
                f"Particle {particle}: cross noise {l_i:.9g} exceeds self noise "
                f"{l_v:.9g} beyond the quadrature error; the kernel is positive, so "
                "tighten epsabs/epsrel or raise noise_cutoff.",
                estimate=l_i - l_v,
                tolerance=err,
            )
        values += [l_v, l_i]
        error += err
    if not config.closed_arms:
        warnings.append(
            f"{_OPEN_ARMS_WARNING} {cutoff:.3g}"
        )

    # Rerun at half the cutoff to see how much the differences move
    sensitivity = None
    if numerics.noise_sensitivity:
        halved = [
            _particle_noise(left, right, 0.5 * cutoff, numerics)
            for left, right in ((config.l1, config.r1), (config.l2, config.r2))
        ]
        changes = [
            abs((h[0] - h[1]) - (values[2 * k] - values[2 * k + 1]))
            / max(abs(values[2 * k] - values[2 * k + 1]), numerics.epsabs)
            for k, h in enumerate(halved)
        ]
        sensitivity = max(changes)
    for message in warnings:
        logger.warning(message)
    return NoiseTerms(
        cutoff=cutoff,
        l_v_1=values[0],
        l_i_1=values[1],
        l_v_2=values[2],
        l_i_2=values[3],
        quadrature_error_estimate=error,
        cutoff_sensitivity=sensitivity,
        warnings=warnings,
    )


"""
ALL FUNCTIONALS OF A CONFIGURATION
"""


def _closed_form_functionals(
    config: BranchConfig, numerics: NumericsSettings, deltas, hadamards, noise
) -> FunctionalSet:
    if any(w.max_speed > 0.0 for w in config.branches().values()):
        raise AccuracyError(
            f"Duration {config.duration:.6g} exceeds max_direct_duration "
            f"{numerics.max_direct_duration:.6g} and only branches at rest have "
            "closed forms; use the dominance-ratio extrapolation instead."
        )
    m1, m2 = config.masses
    T = config.duration
    distances = {label: hull_distance(w1, w2) for label, w1, w2 in config.pairs()}
    sections = {}
    if deltas:
        sections["deltas"] = {
            label: PairFunctional(
                value=static_delta(m1, m2, T, d),
                kind="RadiationDelta",
                pair=(label[:2], label[2:]),
            )
            for label, d in distances.items()
        }
    if hadamards:
        sections["hadamards"] = {
            label: PairFunctional(
                value=static_hadamard(m1, m2, T, d),
                kind="Hadamard",
                pair=(label[:2], label[2:]),
            )
            for label, d in distances.items()
        }
    if noise:
        cutoff = numerics.noise_cutoff * config.min_separation
        spread_1 = hull_distance(config.l1, config.r1)
        spread_2 = hull_distance(config.l2, config.r2)
        warnings = []
        if not config.closed_arms:
            warnings.append(f"{_OPEN_ARMS_WARNING} {cutoff:.3g}")
        sections["noise"] = NoiseTerms(
            cutoff=cutoff,
            l_v_1=static_self_noise(m1, T, cutoff),
            l_i_1=static_cross_noise(m1, m1, T, spread_1, cutoff),
            l_v_2=static_self_noise(m2, T, cutoff),
            l_i_2=static_cross_noise(m2, m2, T, spread_2, cutoff),
            warnings=warnings,
        )
    return FunctionalSet(**sections, method="closed_form")


def compute_functionals(
    config: BranchConfig,
    numerics: Union[None, NumericsSettings] = None,
    deltas: bool = True,
    hadamards: bool = True,
    noise: bool = True,
) -> FunctionalSet:
    """
    Evaluate the requested functionals of a configuration. Independent functionals
    run through joblib with numerics.n_jobs workers; results do not depend on the
    scheduling. Windows beyond max_direct_duration use the closed forms for
    branches at rest and raise AccuracyError otherwise.
    """
    numerics = numerics or NumericsSettings()
    if config.duration > numerics.max_direct_duration:
        logger.info(
            "Duration %.6g is beyond direct quadrature; using closed forms.",
            config.duration,
        )
        return _closed_form_functionals(config, numerics, deltas, hadamards, noise)

    # One task per functional
    tasks = []
    for label, w1, w2 in config.pairs():
        pair = (label[:2], label[2:])
        if deltas:
            task = delayed(delta_pair_functional)(w1, w2, numerics, pair)
            tasks.append(("deltas", label, task))
        if hadamards:
            task = delayed(hadamard_pair_functional)(w1, w2, None, numerics, pair)
            tasks.append(("hadamards", label, task))
    if noise:
        tasks.append(("noise", None, delayed(vacuum_noise_terms)(config, numerics)))
    results = Parallel(n_jobs=numerics.n_jobs)(task for _, _, task in tasks)

    # Assemble in task order
    sections = {}
    for (section, label, _), result in zip(tasks, results):
        if section == "noise":
            sections["noise"] = result
        else:
            sections.setdefault(section, {})[label] = result
    return FunctionalSet(**sections)
