# -*- coding: utf-8 -*-
"""
PARAMETER SWEEPS AND REGIME DIAGNOSTICS \n
Evaluates grid points independently and returns one flat ModelReport per point in
row-major order over the declared axes. A failure at one point is recorded in its
report and does not stop the sweep.
"""
# Import Pydantic models and types
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
    ValidationError,
)
from typing import Iterator, List, Literal, Sequence, Tuple, Union

# Import models and utils
from gravitydantic.models.classical import (
    classical_negativity,
    phase_table_from_deltas,
)
from gravitydantic.models.core import BranchConfig, ExperimentSpec
from gravitydantic.models.kernels import (
    compute_functionals,
    FunctionalSet,
    NumericsSettings,
)
from gravitydantic.models.quantum import (
    assemble_perturbed_state,
    check_branch_symmetry,
    effective_noise,
    quantum_negativity,
    second_order_bound,
)
from gravitydantic.models._utils.labels import (
    output_kinds,
    ratio_flags,
    regime_flags,
    sweep_parameters,
)

# Import other packages
import itertools
from joblib import delayed, Parallel
import logging
import math
import numpy as np

logger = logging.getLogger(__name__)


"""
DEFAULTS
"""


_ALL_OUTPUTS = ["classical", "quantum", "noise"]
_MODEL_PARAMETERS = ("m1", "m2", "separation", "offset", "duration")


"""
VALIDATORS
"""


# Offsets may be zero, every other swept parameter must be positive
def _must_be_axis(axis):
    if not axis.values:
        raise ValueError(f"{axis.name}: an axis needs at least one value.")
    lowest = min(axis.values)
    if axis.name == "offset" and lowest < 0.0:
        raise ValueError(f"offset: values must be non-negative, got {lowest}.")
    if axis.name != "offset" and lowest <= 0.0:
        raise ValueError(f"{axis.name}: values must be positive, got {lowest}.")
    return axis


"""
MODELS
"""


class SweepAxis(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: sweep_parameters
    values: List[float]

    @model_validator(mode="after")
    def _must_be_valid(self):
        return _must_be_axis(self)


class SweepSpec(BaseModel):
    """
    Axes varied over a base experiment. The grid is the product of the axes,
    enumerated with the last axis varying fastest.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    axes: List[SweepAxis]
    base: ExperimentSpec
    G: float = Field(gt=0)
    outputs: List[output_kinds] = _ALL_OUTPUTS
    max_grid_points: int = Field(10000, ge=1)

    @field_validator("axes")
    @classmethod
    def _must_be_distinct(cls, v):
        names = [axis.name for axis in v]
        repeated = sorted({n for n in names if names.count(n) > 1})
        if repeated:
            raise ValueError(f"Axes repeat the parameters {', '.join(repeated)}.")
        return v

    @model_validator(mode="after")
    def _must_fit_cap(self):
        if self.size > self.max_grid_points:
            raise ValueError(
                f"max_grid_points: grid of {self.size} points exceeds the cap of "
                f"{self.max_grid_points}."
            )
        return self

    @property
    def size(self) -> int:
        return math.prod(len(axis.values) for axis in self.axes)

    def grid(self) -> Iterator[Tuple[int, dict]]:
        names = [axis.name for axis in self.axes]
        for index, values in enumerate(
            itertools.product(*(axis.values for axis in self.axes))
        ):
            yield index, dict(zip(names, values))


class DominanceRatio(BaseModel):
    """
    |Δ_LL + Δ_RR - Δ_LR - Δ_RL| / |H_LL + H_RR - H_LR - H_RL| with a flag for a
    vanishing denominator.
    """

    model_config = ConfigDict(frozen=True)

    value: float
    flag: ratio_flags = "finite"


class DominanceExtrapolation(BaseModel):
    """
    Linear law ratio(T) = slope·T + intercept fitted on short windows, checked on a
    longer one, and evaluated at a target window out of direct reach.
    """

    model_config = ConfigDict(frozen=True)

    durations: List[float]
    ratios: List[float]
    slope: float
    intercept: float
    validation_duration: float
    validation_residual: float
    target_duration: float
    ratio: float
    exponent: int


class ModelReport(BaseModel):
    """
    One flat row per grid point. Diagnostics that were not requested or could not be
    computed stay None; complex values are split into _re and _im columns.
    """

    model_config = ConfigDict(frozen=True)

    # Bookkeeping
    index: int = 0
    status: Literal["ok", "invalid", "failed"] = "ok"
    message: Union[None, str] = None
    method: Union[None, str] = None

    # Parameters
    m1: Union[None, float] = None
    m2: Union[None, float] = None
    separation: Union[None, float] = None
    offset: Union[None, float] = None
    duration: Union[None, float] = None
    G: Union[None, float] = None

    # Functionals
    delta_l1l2: Union[None, float] = None
    delta_l1r2: Union[None, float] = None
    delta_r1l2: Union[None, float] = None
    delta_r1r2: Union[None, float] = None
    hadamard_l1l2: Union[None, float] = None
    hadamard_l1r2: Union[None, float] = None
    hadamard_r1l2: Union[None, float] = None
    hadamard_r1r2: Union[None, float] = None
    l_v: Union[None, float] = None
    l_i: Union[None, float] = None
    l_v_1: Union[None, float] = None
    l_i_1: Union[None, float] = None
    l_v_2: Union[None, float] = None
    l_i_2: Union[None, float] = None
    noise_cutoff: Union[None, float] = None

    # Negativities and comparisons
    n_c_exact: Union[None, float] = None
    n_c_leading: Union[None, float] = None
    n_g: Union[None, float] = None
    classical_limit: Union[None, float] = None
    effective_noise: Union[None, float] = None
    feynman_combination_re: Union[None, float] = None
    feynman_combination_im: Union[None, float] = None
    dominance_ratio: Union[None, float] = None
    dominance_flag: Union[None, ratio_flags] = None
    regime: Union[None, regime_flags] = None

    # Error summaries
    delta_error: Union[None, float] = None
    hadamard_error: Union[None, float] = None
    noise_error: Union[None, float] = None
    second_order_bound: Union[None, float] = None
    warnings: Union[None, str] = None


"""
RATIOS AND REGIMES
"""


def ratio_from_functionals(functionals: FunctionalSet) -> DominanceRatio:
    numerator = abs(functionals.delta_combination)
    denominator = abs(functionals.hadamard_combination)
    if denominator == 0.0:
        if numerator == 0.0:
            return DominanceRatio(value=math.nan, flag="undefined")
        return DominanceRatio(value=math.inf, flag="infinite")
    return DominanceRatio(value=numerator / denominator)


def dominance_ratio(
    config: BranchConfig, numerics: Union[None, NumericsSettings] = None
) -> DominanceRatio:
    """
    Compare the radiation and Hadamard combinations that enter the negativities.
    """
    functionals = compute_functionals(
        config, numerics, deltas=True, hadamards=True, noise=False
    )
    return ratio_from_functionals(functionals)


def classify_regime(
    functionals: FunctionalSet, ratio: Union[None, DominanceRatio] = None
) -> Union[None, regime_flags]:
    """
    spacelike when every Δ vanishes, timelike-dominated when the Δ combination is at
    least the Hadamard one, mixed otherwise.
    """
    if all(f.value == 0.0 for f in functionals.deltas.values()):
        return "spacelike"
    if ratio is None or ratio.flag == "undefined":
        return None
    return "timelike-dominated" if ratio.value >= 1.0 else "mixed"


"""
GRID POINTS
"""


def _parameters(experiment: ExperimentSpec, G: float) -> dict:
    return {name: getattr(experiment, name) for name in _MODEL_PARAMETERS} | {"G": G}


def _max_error(section) -> float:
    return max(f.quadrature_error_estimate for f in section.values())


def _report_fields(
    config: BranchConfig,
    functionals: FunctionalSet,
    G: float,
    outputs: Sequence[str],
) -> dict:
    fields = {"method": functionals.method}
    if functionals.deltas:
        for label, f in functionals.deltas.items():
            fields[f"delta_{label.lower()}"] = f.value
        fields["delta_error"] = _max_error(functionals.deltas)
    if functionals.hadamards:
        for label, f in functionals.hadamards.items():
            fields[f"hadamard_{label.lower()}"] = f.value
        fields["hadamard_error"] = _max_error(functionals.hadamards)
    if functionals.noise:
        noise = functionals.noise
        fields |= dict(
            l_v=noise.l_v,
            l_i=noise.l_i,
            l_v_1=noise.l_v_1,
            l_i_1=noise.l_i_1,
            l_v_2=noise.l_v_2,
            l_i_2=noise.l_i_2,
            noise_cutoff=noise.cutoff,
            noise_error=noise.quadrature_error_estimate,
            warnings="; ".join(noise.warnings) or None,
        )

    # Classical model
    if "classical" in outputs:
        table = phase_table_from_deltas(
            {k: f.value for k, f in functionals.deltas.items()}, G
        )
        fields["n_c_exact"] = classical_negativity(table, exact=True)
        fields["n_c_leading"] = classical_negativity(table, exact=False)

    # Quantum model
    ratio = None
    if "quantum" in outputs:
        check_branch_symmetry(config)
        state = assemble_perturbed_state(functionals, G)
        limit = assemble_perturbed_state(
            functionals, G, include_quantum=False, include_noise=False
        )
        feynman = functionals.feynman_combination
        ratio = ratio_from_functionals(functionals)
        fields |= dict(
            n_g=quantum_negativity(state),
            classical_limit=quantum_negativity(limit),
            effective_noise=effective_noise(state),
            feynman_combination_re=feynman.real,
            feynman_combination_im=feynman.imag,
            dominance_ratio=ratio.value,
            dominance_flag=ratio.flag,
            second_order_bound=second_order_bound(state),
        )
    if functionals.deltas:
        fields["regime"] = classify_regime(functionals, ratio)
    return fields


def evaluate_point(
    experiment: ExperimentSpec,
    numerics: Union[None, NumericsSettings] = None,
    G: float = 1.0,
    outputs: Sequence[output_kinds] = _ALL_OUTPUTS,
    index: int = 0,
) -> ModelReport:
    """
    Every requested diagnostic of one experiment. Numerical and configuration
    failures are caught and recorded in the report: status "invalid" for rejected
    inputs and configurations, "failed" for numerical errors.
    """
    numerics = numerics or NumericsSettings()
    parameters = _parameters(experiment, G)
    try:
        config = experiment.build()
        functionals = compute_functionals(
            config,
            numerics,
            deltas="classical" in outputs or "quantum" in outputs,
            hadamards="quantum" in outputs,
            noise="quantum" in outputs or "noise" in outputs,
        )
        fields = _report_fields(config, functionals, G, outputs)
    except (ValueError, ArithmeticError, RuntimeError) as e:
        logger.warning("Grid point %d failed: %s", index, e)
        return ModelReport(
            index=index,
            status="invalid" if isinstance(e, ValueError) else "failed",
            message=f"{type(e).__name__}: {e}",
            **parameters,
        )
    return ModelReport(index=index, **parameters, **fields)


def _evaluate_grid_point(
    spec: SweepSpec, index: int, values: dict, numerics: NumericsSettings
) -> ModelReport:
    G = values.get("G", spec.G)
    update = {k: v for k, v in values.items() if k != "G"}
    try:
        experiment = ExperimentSpec(**(spec.base.model_dump() | update))
    except ValidationError as e:
        parameters = _parameters(spec.base, G) | update
        return ModelReport(
            index=index,
            status="invalid",
            message=f"ValidationError: {e}",
            **parameters,
        )
    return evaluate_point(experiment, numerics, G, spec.outputs, index)


def run_sweep(
    spec: SweepSpec, numerics: Union[None, NumericsSettings] = None
) -> List[ModelReport]:
    """
    One ModelReport per grid point, in grid order whatever the scheduling.
    Points run through joblib with numerics.n_jobs workers; each point then
    evaluates its own functionals serially.
    """
    numerics = numerics or NumericsSettings()
    inner = numerics.model_copy(update={"n_jobs": 1})
    logger.info("Sweeping %d grid points.", spec.size)
    reports = Parallel(n_jobs=numerics.n_jobs)(
        delayed(_evaluate_grid_point)(spec, index, values, inner)
        for index, values in spec.grid()
    )
    failed = sum(report.status != "ok" for report in reports)
    if failed:
        logger.warning("%d of %d grid points failed.", failed, len(reports))
    return list(reports)


"""
EXTRAPOLATION TO LONG WINDOWS
"""


def extrapolate_dominance_ratio(
    experiment: ExperimentSpec,
    target_duration: float,
    numerics: Union[None, NumericsSettings] = None,
    durations: Sequence[float] = (20.0, 40.0),
    validation_duration: float = 80.0,
) -> DominanceExtrapolation:
    """
    Fit ratio(T) = slope·T + intercept on windows given in multiples of the
    separation, check the law on a longer window and evaluate it at the target.
    Past a few light-crossing times the Δ combination grows linearly in T while the
    Hadamard combination settles to a constant.
    """
    numerics = numerics or NumericsSettings()
    scale = experiment.separation

    def _ratio(multiple: float) -> float:
        update = {"duration": multiple * scale}
        if experiment.ramp_time is not None:
            update["ramp_time"] = experiment.ramp_time * multiple * scale / (
                experiment.duration
            )
        config = ExperimentSpec(**(experiment.model_dump() | update)).build()
        return dominance_ratio(config, numerics).value

    times = [multiple * scale for multiple in durations]
    ratios = [_ratio(multiple) for multiple in durations]
    slope, intercept = np.polyfit(times, ratios, 1)
    checked = _ratio(validation_duration)
    predicted = slope * validation_duration * scale + intercept
    residual = abs(predicted - checked) / abs(checked)
    ratio = slope * target_duration + intercept
    logger.info(
        "Dominance law %.6g T + %.6g, residual %.3e at T = %.6g.",
        slope,
        intercept,
        residual,
        validation_duration * scale,
    )
    return DominanceExtrapolation(
        durations=times,
        ratios=ratios,
        slope=float(slope),
        intercept=float(intercept),
        validation_duration=validation_duration * scale,
        validation_residual=float(residual),
        target_duration=target_duration,
        ratio=float(ratio),
        exponent=math.floor(math.log10(abs(ratio))),
    )
