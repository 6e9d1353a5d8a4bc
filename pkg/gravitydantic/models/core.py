# -*- coding: utf-8 -*-
"""
CORE PYDANTIC MODELS FOR UNITS, FOUR-VECTORS, WORLDLINES AND BRANCHES \n
Internally c = ħ = 1 and every length and time is measured in one internal unit,
the length scale l0. Masses then carry inverse-length units. The metric signature
is (-, +, +, +).
"""
# Import Pydantic models and types
from __future__ import annotations
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)
from typing import Annotated, Dict, Iterator, Literal, Tuple, Union

# Import utils
from gravitydantic.models._utils.errors import DomainError
from gravitydantic.models._utils.labels import (
    branch_labels,
    layouts,
    pair_labels,
)

# Import other packages
import math
import numpy as np
import re
from scipy import constants


"""
DEFAULTS
"""


_DEFAULT_LENGTH_SCALE = 1e-6  # Meters per internal unit
_PEAK_SMOOTHSTEP_SLOPE = 1.875  # max of d/dx (10x³ - 15x⁴ + 6x⁵)
_CONGRUENCE_SAMPLES = 33
_QUANTITY_PATTERN = re.compile(
    r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([a-zA-Z]+)\s*$"
)

Vector3 = Tuple[float, float, float]


"""
VALIDATORS & THEIR HELPERS
"""


# Fixed natural units may only ever be one
def _must_be_one(v):
    if v != 1.0:
        raise ValueError(f"Natural units fix this constant to 1, not {v}.")
    return v


# Accept any three-element sequence as a vector of floats
def _must_be_vector3(v):
    if isinstance(v, np.ndarray):
        v = v.tolist()
    if len(v) != 3:
        raise ValueError(f"Expected three spatial components, got {len(v)}.")
    return tuple(float(x) for x in v)


def _norm(v) -> float:
    return math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


# The smoothstep profile used to displace a branch and bring it back
def _smoothstep(x: float) -> Tuple[float, float]:
    value = x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
    slope = 30.0 * x * x * (1.0 - x) * (1.0 - x)
    return value, slope


# Closest distance between segments [p0, p1] and [q0, q1]
def segment_distance(p0, p1, q0, q1) -> float:
    p0, p1, q0, q1 = (np.asarray(x, dtype=float) for x in (p0, p1, q0, q1))
    d1, d2, r = p1 - p0, q1 - q0, p0 - q0
    a, e, f = d1 @ d1, d2 @ d2, d2 @ r
    tiny = 1e-300
    if a <= tiny and e <= tiny:
        return float(np.linalg.norm(r))
    if a <= tiny:
        s, t = 0.0, min(max(f / e, 0.0), 1.0)
    else:
        c = d1 @ r
        if e <= tiny:
            s, t = min(max(-c / a, 0.0), 1.0), 0.0
        else:
            b = d1 @ d2
            denom = a * e - b * b
            s = min(max((b * f - c * e) / denom, 0.0), 1.0) if denom > tiny else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                s, t = min(max(-c / a, 0.0), 1.0), 0.0
            elif t > 1.0:
                s, t = min(max((b - c) / a, 0.0), 1.0), 1.0
    return float(np.linalg.norm(p0 + d1 * s - (q0 + d2 * t)))


"""
UNITS
"""


class UnitsSystem(BaseModel):
    """
    Natural units with c = ħ = 1 and a configurable length scale l0 in meters.
    G defaults to Newton's constant expressed in this scale, (ħG/c³)/l0².
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Properties
    c_fixed: float = 1.0
    hbar_fixed: float = 1.0
    length_scale_l0: float = Field(_DEFAULT_LENGTH_SCALE, gt=0)
    G: Union[None, float] = Field(None, gt=0)

    # Validation
    _units_fixed = field_validator("c_fixed", "hbar_fixed")(_must_be_one)

    @model_validator(mode="before")
    @classmethod
    def _derive_coupling(cls, data):
        if isinstance(data, dict) and data.get("G") is None:
            scale = data.get("length_scale_l0", _DEFAULT_LENGTH_SCALE)
            planck_area = constants.hbar * constants.G / constants.c**3
            data = {**data, "G": planck_area / scale**2}
        return data

    # Lengths
    def length_to_internal(self, meters: float) -> float:
        return meters / self.length_scale_l0

    def length_to_si(self, value: float) -> float:
        return value * self.length_scale_l0

    # Times
    def time_to_internal(self, seconds: float) -> float:
        return seconds * constants.c / self.length_scale_l0

    def time_to_si(self, value: float) -> float:
        return value * self.length_scale_l0 / constants.c

    # Masses
    def mass_to_internal(self, kilograms: float) -> float:
        return kilograms * constants.c * self.length_scale_l0 / constants.hbar

    def mass_to_si(self, value: float) -> float:
        return value * constants.hbar / (constants.c * self.length_scale_l0)

    def parse_quantity(self, text: str, dimension: Literal["length", "time", "mass"]):
        """
        Convert a string such as "1e-6 m", "1 s" or "1e-14 kg" to internal units.
        The suffix must match the expected dimension.
        """
        match = _QUANTITY_PATTERN.match(text)
        if not match:
            raise ValueError(f"Cannot read quantity '{text}'; use '<number> <unit>'.")
        number, unit = float(match.group(1)), match.group(2)
        converters = {
            "m": ("length", self.length_to_internal),
            "s": ("time", self.time_to_internal),
            "kg": ("mass", self.mass_to_internal),
        }
        if unit not in converters:
            raise ValueError(f"Unknown unit '{unit}'; use one of m, s, kg.")
        expected, convert = converters[unit]
        if expected != dimension:
            raise ValueError(
                f"Quantity '{text}' is a {expected}, expected a {dimension}."
            )
        return convert(number)


"""
FOUR-VECTORS
"""


class FourVector(BaseModel):
    """
    Components (t, x, y, z) in internal units.
    """

    model_config = ConfigDict(frozen=True)

    components: Tuple[float, float, float, float]

    def __init__(self, components=None, **kwargs) -> None:
        if components is not None:
            kwargs["components"] = tuple(float(c) for c in components)
        super(FourVector, self).__init__(**kwargs)

    @property
    def t(self) -> float:
        return self.components[0]

    @property
    def spatial(self) -> np.ndarray:
        return np.array(self.components[1:])

    def minkowski(self, other: FourVector) -> float:
        """
        η_{μν} a^μ b^ν with η = diag(-1, 1, 1, 1).
        """
        a, b = self.components, other.components
        return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]

    def as_array(self) -> np.ndarray:
        return np.array(self.components)


"""
WORLDLINES
"""


class WorldlineModel(BaseModel):
    """
    A timelike trajectory z(t) carrying a mass, defined on the window [0, T].
    Positions and velocities are closed-form and extended analytically outside
    the window, so light-cone roots may be bracketed on either side of it.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Properties
    mass: float = Field(gt=0)
    duration: float = Field(gt=0)

    def kinematics(self, t: float) -> Tuple[Vector3, Vector3]:
        """
        Position and velocity at time t as plain float tuples.
        """
        raise NotImplementedError

    def position(self, t: float) -> np.ndarray:
        return np.array(self.kinematics(t)[0])

    def velocity(self, t: float) -> np.ndarray:
        return np.array(self.kinematics(t)[1])

    def in_domain(self, t: float) -> bool:
        return 0.0 <= t <= self.duration

    def breakpoints(self) -> Tuple[float, ...]:
        """
        Times inside the window where the motion changes phase.
        """
        return ()

    def four_velocity(self, t: float) -> FourVector:
        """
        u^μ = u⁰ (1, dz/dt) with u⁰ = 1/√(1 - |dz/dt|²).
        """
        if not self.in_domain(t):
            raise DomainError(
                f"Time {t} is outside the worldline domain [0, {self.duration}]."
            )
        v = self.kinematics(t)[1]
        gamma = 1.0 / math.sqrt(1.0 - (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))
        return FourVector((gamma, gamma * v[0], gamma * v[1], gamma * v[2]))

    @property
    def max_speed(self) -> float:
        raise NotImplementedError

    def hull(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        End points of a segment that contains every position on [0, T].
        """
        raise NotImplementedError


class StaticWorldline(WorldlineModel):
    """
    A branch at rest at a fixed point.
    """

    family: Literal["static"] = "static"
    point: Vector3

    _static_vector = field_validator("point", mode="before")(_must_be_vector3)

    def kinematics(self, t: float) -> Tuple[Vector3, Vector3]:
        return self.point, (0.0, 0.0, 0.0)

    @property
    def max_speed(self) -> float:
        return 0.0

    def hull(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.point), np.array(self.point)


class SplitWorldline(WorldlineModel):
    """
    Split, hold and recombine: the branch leaves base along a C² smoothstep,
    reaches base + offset after ramp_time, holds, and returns to base at T.
    """

    family: Literal["split"] = "split"
    base: Vector3
    offset: Vector3
    ramp_time: float = Field(gt=0)

    _split_vectors = field_validator("base", "offset", mode="before")(
        _must_be_vector3
    )

    @model_validator(mode="after")
    def _must_be_subluminal_ramp(self):
        violations = []
        if 2.0 * self.ramp_time > self.duration:
            violations.append(
                f"ramp_time: two ramps of {self.ramp_time} do not fit in duration "
                f"{self.duration}."
            )
        if self.max_speed >= 1.0:
            violations.append(
                f"ramp_time: offset {_norm(self.offset)} over ramp {self.ramp_time} "
                f"implies peak speed {self.max_speed:.6g}, which is not below 1."
            )
        if violations:
            raise ValueError(" ".join(violations))
        return self

    def kinematics(self, t: float) -> Tuple[Vector3, Vector3]:
        b, o, ramp = self.base, self.offset, self.ramp_time
        if t <= 0.0 or t >= self.duration:
            return b, (0.0, 0.0, 0.0)
        if t < ramp:
            s, ds = _smoothstep(t / ramp)
            ds /= ramp
        elif t > self.duration - ramp:
            s, ds = _smoothstep((self.duration - t) / ramp)
            ds /= -ramp
        else:
            s, ds = 1.0, 0.0
        return (
            (b[0] + o[0] * s, b[1] + o[1] * s, b[2] + o[2] * s),
            (o[0] * ds, o[1] * ds, o[2] * ds),
        )

    def breakpoints(self) -> Tuple[float, ...]:
        return (self.ramp_time, self.duration - self.ramp_time)

    @property
    def max_speed(self) -> float:
        return _PEAK_SMOOTHSTEP_SLOPE * _norm(self.offset) / self.ramp_time

    def hull(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.base), np.array(self.base) + np.array(self.offset)


class UniformWorldline(WorldlineModel):
    """
    Straight motion z(t) = start + velocity·t at constant subluminal speed.
    """

    family: Literal["uniform"] = "uniform"
    start: Vector3
    velocity_vector: Vector3

    _uniform_vectors = field_validator("start", "velocity_vector", mode="before")(
        _must_be_vector3
    )

    @field_validator("velocity_vector")
    @classmethod
    def _must_be_subluminal(cls, v):
        if _norm(v) >= 1.0:
            raise ValueError(f"Speed {_norm(v)} is not below the speed of light.")
        return v

    def kinematics(self, t: float) -> Tuple[Vector3, Vector3]:
        s, v = self.start, self.velocity_vector
        return (s[0] + v[0] * t, s[1] + v[1] * t, s[2] + v[2] * t), v

    @property
    def max_speed(self) -> float:
        return _norm(self.velocity_vector)

    def hull(self) -> Tuple[np.ndarray, np.ndarray]:
        start = np.array(self.start)
        return start, start + self.duration * np.array(self.velocity_vector)


# Any worldline, told apart by its family field
Worldline = Annotated[
    Union[StaticWorldline, SplitWorldline, UniformWorldline],
    Field(discriminator="family"),
]


"""
MAPPING DICTIONARY
"""


_WORLDLINE_MAPPINGS = {
    "static": StaticWorldline,
    "split": SplitWorldline,
    "uniform": UniformWorldline,
}


"""
WORLDLINE FUNCTIONS
"""


def get_worldline(data: dict) -> WorldlineModel:
    """
    Return the worldline model for a mapping, selected by its family field.
    """
    if "family" not in data:
        raise ValueError("Worldline data must include a family.")
    if data["family"] not in _WORLDLINE_MAPPINGS:
        raise ValueError(f"Worldline family {data['family']} is not supported.")
    return _WORLDLINE_MAPPINGS[data["family"]](**data)


def make_static_worldline(mass: float, position, T: float) -> StaticWorldline:
    return StaticWorldline(mass=mass, point=position, duration=T)


def make_split_worldline(
    mass: float, base, offset, ramp_time: float, T: float
) -> SplitWorldline:
    return SplitWorldline(
        mass=mass, base=base, offset=offset, ramp_time=ramp_time, duration=T
    )


def make_uniform_worldline(mass: float, start, velocity, T: float) -> UniformWorldline:
    return UniformWorldline(
        mass=mass, start=start, velocity_vector=velocity, duration=T
    )


def hull_distance(w1: WorldlineModel, w2: WorldlineModel) -> float:
    """
    Lower bound on |z1(t) - z2(t')| over the window, exact for the three families.
    """
    return segment_distance(*w1.hull(), *w2.hull())


def branches_congruent(w_a: WorldlineModel, w_b: WorldlineModel) -> bool:
    """
    True when two branches differ only by a rotation, reflection and translation.
    Compares masses, windows and the Gram matrices of sampled velocities.
    """
    if w_a.mass != w_b.mass or w_a.duration != w_b.duration:
        return False
    times = np.linspace(0.0, w_a.duration, _CONGRUENCE_SAMPLES)
    va = np.array([w_a.velocity(t) for t in times])
    vb = np.array([w_b.velocity(t) for t in times])
    return bool(np.allclose(va @ va.T, vb @ vb.T, rtol=1e-12, atol=1e-14))


"""
BRANCH CONFIGURATION
"""


class BranchConfig(BaseModel):
    """
    The four branches of the two particles, sharing the window [0, duration].
    Particle 1 follows L1 or R1, particle 2 follows L2 or R2.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Branches
    l1: Worldline
    r1: Worldline
    l2: Worldline
    r2: Worldline
    duration: float = Field(gt=0)

    @model_validator(mode="after")
    def _must_share_window(self):
        violations = [
            f"{label}: window {w.duration} differs from duration {self.duration}."
            for label, w in self.branches().items()
            if not math.isclose(w.duration, self.duration, rel_tol=1e-12)
        ]
        if violations:
            raise ValueError(" ".join(violations))
        return self

    def branches(self) -> Dict[branch_labels, WorldlineModel]:
        return {"L1": self.l1, "R1": self.r1, "L2": self.l2, "R2": self.r2}

    def branch(self, label: branch_labels) -> WorldlineModel:
        return self.branches()[label]

    def pair(self, label: pair_labels) -> Tuple[WorldlineModel, WorldlineModel]:
        """
        The worldlines of particle 1 and particle 2 for a key such as "L1R2".
        """
        return self.branch(label[:2]), self.branch(label[2:])

    def pairs(self) -> Iterator[Tuple[pair_labels, WorldlineModel, WorldlineModel]]:
        for label in ("L1L2", "L1R2", "R1L2", "R1R2"):
            yield (label, *self.pair(label))

    @property
    def masses(self) -> Tuple[float, float]:
        return self.l1.mass, self.l2.mass

    @property
    def closed_arms(self) -> bool:
        """
        True when each particle's branches share their start and end points.
        """
        for a, b in ((self.l1, self.r1), (self.l2, self.r2)):
            for t in (0.0, self.duration):
                if not np.allclose(a.position(t), b.position(t), rtol=0, atol=1e-14):
                    return False
        return True

    @property
    def min_separation(self) -> float:
        """
        Smallest distance any branch of particle 1 comes to any branch of particle 2.
        """
        return min(hull_distance(w1, w2) for _, w1, w2 in self.pairs())


"""
EXPERIMENT LAYOUT
"""


class ExperimentSpec(BaseModel):
    """
    Parameters of a two-interferometer experiment, from which a BranchConfig is built.
    Each particle splits symmetrically by ±offset/2 around its centre; the nearest
    branches of the two particles are separation apart while the branches hold.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Geometry
    family: Literal["static", "split"] = "static"
    layout: layouts = "collinear"
    m1: float = Field(gt=0)
    m2: float = Field(gt=0)
    separation: float = Field(gt=0)
    offset: float = Field(ge=0)
    duration: float = Field(gt=0)
    ramp_time: Union[None, float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _must_be_physical(self):
        if self.family != "split":
            return self
        ramp = self.resolved_ramp_time
        violations = []
        if 2.0 * ramp > self.duration:
            violations.append(
                f"ramp_time: two ramps of {ramp} do not fit in duration "
                f"{self.duration}."
            )
        peak = _PEAK_SMOOTHSTEP_SLOPE * 0.5 * self.offset / ramp
        if peak >= 1.0:
            violations.append(
                f"ramp_time: offset {self.offset} split over ramp {ramp} implies "
                f"peak speed {peak:.6g}, which is not below 1."
            )
        if violations:
            raise ValueError(" ".join(violations))
        return self

    @property
    def resolved_ramp_time(self) -> float:
        return self.ramp_time if self.ramp_time is not None else self.duration / 4.0

    def centres(self) -> Tuple[np.ndarray, np.ndarray]:
        if self.layout == "collinear":
            return np.zeros(3), np.array([self.offset + self.separation, 0.0, 0.0])
        return np.zeros(3), np.array([0.0, self.separation, 0.0])

    def build(self) -> BranchConfig:
        return build_branch_config(self)


def build_branch_config(experiment: ExperimentSpec) -> BranchConfig:
    """
    Lay out the four branches of an experiment.
    Static branches sit at their hold positions for the whole window.
    """
    axis = np.array([1.0, 0.0, 0.0])
    half = 0.5 * experiment.offset * axis
    T = experiment.duration
    branches = {}
    for particle, (centre, mass) in enumerate(
        zip(experiment.centres(), (experiment.m1, experiment.m2)), start=1
    ):
        for label, sign in (("l", -1.0), ("r", 1.0)):
            displacement = sign * half
            if experiment.family == "static":
                w = make_static_worldline(mass, centre + displacement, T)
            else:
                w = make_split_worldline(
                    mass, centre, displacement, experiment.resolved_ramp_time, T
                )
            branches[f"{label}{particle}"] = w
    return BranchConfig(**branches, duration=T)
