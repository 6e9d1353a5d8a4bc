# -*- coding: utf-8 -*-
"""
RUN CONFIGURATION DOCUMENTS \n
A run is described by a JSON document with the sections units, experiment, numerics,
sweep and output. Quantities may be bare numbers in internal units or strings with
an SI suffix, "1e-6 m", "1 s" or "1e-14 kg", converted with the units section.
"""
# Import Pydantic models and types
from pydantic import (
    BaseModel,
    ConfigDict,
    model_validator,
    ValidationError,
)
from typing import List, Union

# Import models and utils
from gravitydantic.models.core import ExperimentSpec, UnitsSystem
from gravitydantic.models.kernels import NumericsSettings
from gravitydantic.models.scanner import SweepAxis, SweepSpec, _ALL_OUTPUTS
from gravitydantic.models._utils.errors import ConfigParseError, ConfigValidationError
from gravitydantic.models._utils.labels import output_formats, output_kinds

# Import other packages
import json


"""
DEFAULTS
"""


# Dimension of every quantity that accepts a unit suffix
_DIMENSIONS = {
    "m1": "mass",
    "m2": "mass",
    "separation": "length",
    "offset": "length",
    "duration": "time",
    "ramp_time": "time",
}

# Pydantic error types that mean the document does not follow the schema
_SCHEMA_ERRORS = {
    "extra_forbidden",
    "missing",
    "model_type",
    "model_attributes_type",
    "dict_type",
    "list_type",
    "literal_error",
    "float_type",
    "float_parsing",
    "int_type",
    "int_parsing",
    "int_from_float",
    "bool_type",
    "bool_parsing",
    "string_type",
}


"""
VALIDATORS & THEIR HELPERS
"""


def _convert(units: UnitsSystem, section: str, name: str, value):
    if not isinstance(value, str) or name not in _DIMENSIONS:
        return value
    try:
        return units.parse_quantity(value, _DIMENSIONS[name])
    except ValueError as e:
        raise ValueError(f"{section}.{name}: {e}") from e


# Replace quantity strings by internal values before field validation
def _must_convert_quantities(data):
    if not isinstance(data, dict):
        return data
    try:
        units = UnitsSystem.model_validate(data.get("units") or {})
    except ValidationError:
        return data
    data = dict(data)
    experiment = data.get("experiment")
    if isinstance(experiment, dict):
        data["experiment"] = {
            k: _convert(units, "experiment", k, v) for k, v in experiment.items()
        }
    sweep = data.get("sweep")
    if isinstance(sweep, dict) and isinstance(sweep.get("axes"), list):
        axes = []
        for axis in sweep["axes"]:
            if isinstance(axis, dict) and isinstance(axis.get("values"), list):
                name = axis.get("name")
                axis = {
                    **axis,
                    "values": [
                        _convert(units, "sweep", name, v) for v in axis["values"]
                    ],
                }
            axes.append(axis)
        data["sweep"] = {**sweep, "axes": axes}
    return data


"""
SECTIONS
"""


class SweepSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    axes: List[SweepAxis]
    outputs: List[output_kinds] = _ALL_OUTPUTS


class OutputSection(BaseModel):
    """
    Where results go. path None writes to standard output.
    diagnostics selects what the single command computes.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    format: output_formats = "csv"
    path: Union[None, str] = None
    diagnostics: List[output_kinds] = _ALL_OUTPUTS


class RunConfig(BaseModel):
    """
    A fully validated run. Every default is filled in, so model_dump() is the
    resolved configuration echoed in output headers.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    units: UnitsSystem = UnitsSystem()
    experiment: ExperimentSpec
    numerics: NumericsSettings = NumericsSettings()
    sweep: Union[None, SweepSection] = None
    output: OutputSection = OutputSection()

    _quantities = model_validator(mode="before")(_must_convert_quantities)

    @property
    def G(self) -> float:
        return self.units.G

    def sweep_spec(self) -> SweepSpec:
        """
        The sweep section over the experiment, capped by numerics.max_grid_points.
        """
        if self.sweep is None:
            raise ValueError("The configuration has no sweep section.")
        return SweepSpec(
            axes=self.sweep.axes,
            base=self.experiment,
            G=self.G,
            outputs=self.sweep.outputs,
            max_grid_points=self.numerics.max_grid_points,
        )

    def with_overrides(
        self,
        epsrel: Union[None, float] = None,
        seed: Union[None, int] = None,
        format: Union[None, str] = None,
        path: Union[None, str] = None,
    ) -> "RunConfig":
        """
        Copy with command-line overrides applied and validated again.
        """
        data = self.model_dump()
        numerics = {"epsrel": epsrel, "seed": seed}
        output = {"format": format, "path": path}
        data["numerics"] |= {k: v for k, v in numerics.items() if v is not None}
        data["output"] |= {k: v for k, v in output.items() if v is not None}
        return RunConfig.model_validate(data)


"""
FUNCTIONS
"""


def _location(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a JSON config document.
    Malformed JSON and schema violations raise ConfigParseError with the line and
    column or the offending fields; physically invalid values raise
    ConfigValidationError listing every violation.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigParseError(
            f"Malformed config at line {e.lineno}, column {e.colno}: {e.msg}",
            line=e.lineno,
            column=e.colno,
        ) from e
    if not isinstance(data, dict):
        raise ConfigParseError("The config document must be a JSON object.")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        errors = e.errors()
        schema = [err for err in errors if err["type"] in _SCHEMA_ERRORS]
        if schema:
            fields = [_location(err) for err in schema]
            details = "; ".join(f"{_location(err)}: {err['msg']}" for err in schema)
            raise ConfigParseError(
                f"Config does not follow the schema: {details}", fields=fields
            ) from e
        raise ConfigValidationError(
            [f"{_location(err)}: {err['msg']}" for err in errors]
        ) from e


def load_config(path: str) -> RunConfig:
    with open(path) as f:
        return parse_config(f.read())
