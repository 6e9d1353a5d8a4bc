# -*- coding: utf-8 -*-
"""
FUNCTIONS FOR RUNNING COMMANDS AND SERIALIZING THEIR REPORTS
"""
# Import Pydantic models and their functions
from gravitydantic.models import *
from gravitydantic.models._utils.labels import commands

# Import other packages
import csv
import io
import json
import logging
import numpy as np
from typing import Callable, Dict, List, Tuple

logger = logging.getLogger(__name__)

__version__ = "0.1.0"


"""
DEFAULTS
"""


_EXIT_OK = 0
_EXIT_INVALID = 1
_EXIT_NUMERICAL = 2
_PURITY_TOLERANCE = 1e-12
_NEGATIVITY_TOLERANCE = 1e-10
_SUBSYSTEM_TOLERANCE = 1e-12
_HAMILTONIAN_TOLERANCE = 1e-6


"""
HELPERS
"""


def _relative_error(analytic: float, numeric: float) -> float:
    if analytic == 0.0:
        return abs(numeric)
    return abs(numeric - analytic) / abs(analytic)


def _status_of_reports(reports: List[ModelReport]) -> int:
    statuses = {report.status for report in reports}
    if "failed" in statuses:
        return _EXIT_NUMERICAL
    if "invalid" in statuses:
        return _EXIT_INVALID
    return _EXIT_OK


def _check(name: str, value: float, tolerance: float, detail: str = "") -> dict:
    return {
        "check": name,
        "passed": bool(value <= tolerance),
        "value": float(value),
        "tolerance": tolerance,
        "detail": detail,
    }


"""
COMMANDS
"""


def run_single(config: RunConfig) -> Tuple[int, List[dict]]:
    """
    Every requested diagnostic of the configured experiment, as one row.
    """
    report = evaluate_point(
        config.experiment, config.numerics, config.G, config.output.diagnostics
    )
    return _status_of_reports([report]), [report.model_dump()]


def run_sweep_command(config: RunConfig) -> Tuple[int, List[dict]]:
    """
    One row per grid point of the sweep section, failed points included.
    """
    reports = run_sweep(config.sweep_spec(), config.numerics)
    return _status_of_reports(reports), [report.model_dump() for report in reports]


def run_oracle(config: RunConfig) -> Tuple[int, List[dict]]:
    """
    Closed-form values next to the quadrature for branches at rest.
    Exits with 2 when any relative error exceeds numerics.oracle_tolerance.
    """
    experiment = config.experiment
    if experiment.family != "static":
        raise ConfigValidationError(
            [
                "experiment.family: the oracle needs static branches, not "
                f"{experiment.family}."
            ]
        )
    branches = experiment.build()
    numerics = config.numerics
    m1, m2, T = experiment.m1, experiment.m2, experiment.duration
    rows = []

    # Pair functionals
    for label, w1, w2 in branches.pairs():
        d = hull_distance(w1, w2)
        numeric_delta = delta_pair_functional(w1, w2, numerics).value
        numeric_hadamard = hadamard_pair_functional(w1, w2, numerics=numerics).value
        rows += [
            ("delta", label, static_delta(m1, m2, T, d), numeric_delta),
            ("hadamard", label, static_hadamard(m1, m2, T, d), numeric_hadamard),
            (
                "hadamard_cauchy",
                label,
                static_hadamard(m1, m2, T, d),
                static_hadamard_cauchy(m1, m2, T, d),
            ),
        ]

    # Cross noise between the two branches of each particle
    cutoff = numerics.noise_cutoff * branches.min_separation
    for particle, (left, right) in enumerate(
        ((branches.l1, branches.r1), (branches.l2, branches.r2)), start=1
    ):
        spread = hull_distance(left, right)
        analytic = static_cross_noise(left.mass, right.mass, T, spread, cutoff)
        numeric, _ = single_branch_noise(left, right, cutoff, numerics)
        rows.append(("cross_noise", f"particle{particle}", analytic, numeric))

    # Relative errors
    output = [
        {
            "quantity": quantity,
            "label": label,
            "analytic": float(analytic),
            "numeric": float(numeric),
            "relative_error": _relative_error(analytic, numeric),
        }
        for quantity, label, analytic, numeric in rows
    ]
    worst = max(row["relative_error"] for row in output)
    status = _EXIT_OK if worst <= numerics.oracle_tolerance else _EXIT_NUMERICAL
    if status:
        logger.error(
            "Oracle relative error %.3e exceeds %.1e.", worst, numerics.oracle_tolerance
        )
    return status, output


def _validation_checks(config: RunConfig) -> List[dict]:
    branches = config.experiment.build()
    numerics = config.numerics
    G = config.G
    check_branch_symmetry(branches)
    functionals = compute_functionals(branches, numerics)
    checks = []

    # Classical model
    table = phase_table_from_deltas(
        {k: f.value for k, f in functionals.deltas.items()}, G
    )
    rho_c = classical_final_state(table)
    checks.append(
        _check("classical_purity", abs(rho_c.purity - 1.0), _PURITY_TOLERANCE)
    )
    checks.append(
        _check(
            "classical_negativity_matches_partial_transpose",
            abs(classical_negativity(table) - negativity(rho_c)),
            _NEGATIVITY_TOLERANCE,
        )
    )

    # Increments and the assembled state
    state = assemble_perturbed_state(functionals, G)
    for name in ("d_rho_c", "d_rho_l", "d_rho_q"):
        diagnostics = validate_state(getattr(state, name), "increment")
        checks.append(
            _check(
                f"{name}_traceless_hermitian",
                max(diagnostics.trace_defect, diagnostics.hermiticity_defect),
                1e-14,
            )
        )
    diagnostics = validate_state(state.total, "full")
    checks.append(
        _check(
            "perturbed_state_hermitian",
            diagnostics.hermiticity_defect,
            1e-14,
            f"second-order bound {second_order_bound(state):.3e}",
        )
    )
    coefficient = positivity_coefficient(state)
    checks.append(
        _check(
            "perturbed_state_positivity",
            max(0.0, -diagnostics.min_eigenvalue),
            coefficient * G**2,
            f"lowest eigenvalue {diagnostics.min_eigenvalue:.3e}, "
            f"C = {coefficient:.3e}",
        )
    )

    # Classical limit of the quantum pipeline
    limit = assemble_perturbed_state(
        functionals, G, include_quantum=False, include_noise=False
    )
    leading = classical_negativity(table, exact=False)
    checks.append(
        _check(
            "classical_limit_equivalence",
            _relative_error(leading, quantum_negativity(limit)),
            _NEGATIVITY_TOLERANCE,
        )
    )

    # Symmetry of Δ in its arguments
    w1, w2 = branches.pair("L1L2")
    forward = delta_pair_functional(w1, w2, numerics).value
    backward = delta_pair_functional(w2, w1, numerics).value
    checks.append(
        _check(
            "delta_argument_symmetry",
            _relative_error(forward, backward),
            10.0 * numerics.epsrel,
        )
    )

    # Noise inequality, per particle
    noise = functionals.noise
    for particle, (l_v, l_i) in enumerate(
        ((noise.l_v_1, noise.l_i_1), (noise.l_v_2, noise.l_i_2)), start=1
    ):
        checks.append(
            _check(
                f"noise_inequality_particle{particle}",
                l_i - l_v,
                noise.quadrature_error_estimate,
            )
        )

    # Negativity does not depend on which particle is transposed
    checks.append(
        _check(
            "negativity_subsystem_symmetry",
            abs(quantum_negativity(state, 1) - quantum_negativity(state, 2)),
            _SUBSYSTEM_TOLERANCE,
        )
    )

    # Local unitaries leave the negativity unchanged
    generator = np.random.default_rng(numerics.seed)
    reference = negativity(rho_c)
    drift = max(
        abs(negativity(conjugate(rho_c, random_local_unitary(generator))) - reference)
        for _ in range(numerics.validation_trials)
    )
    checks.append(
        _check(
            "local_unitary_invariance",
            drift,
            _NEGATIVITY_TOLERANCE,
            f"{numerics.validation_trials} trials, seed {numerics.seed}",
        )
    )

    # The pair Hamiltonian gives the same phases
    if branches.duration <= numerics.max_direct_duration:
        routed = hamiltonian_deltas(branches, G, numerics)
        mismatch = max(
            _relative_error(table.delta[k], routed[k]) for k in table.delta
        )
        checks.append(
            _check("hamiltonian_phase_route", mismatch, _HAMILTONIAN_TOLERANCE)
        )
    return checks


def run_validate(config: RunConfig) -> Tuple[int, List[dict]]:
    """
    Run the invariant suite on the configured experiment.
    Exits with 1 when any check fails.
    """
    checks = _validation_checks(config)
    failed = [row["check"] for row in checks if not row["passed"]]
    if failed:
        logger.error("Failed checks: %s", ", ".join(failed))
    return (_EXIT_INVALID if failed else _EXIT_OK), checks


"""
MAPPING DICTIONARY
"""


# Map command names to the functions that run them
_COMMAND_MAPPINGS: Dict[commands, Callable[[RunConfig], Tuple[int, List[dict]]]] = {
    "single": run_single,
    "sweep": run_sweep_command,
    "validate": run_validate,
    "oracle": run_oracle,
}


"""
SERIALIZATION
"""


def get_provenance(config: RunConfig, command: str) -> dict:
    """
    Tool version, the fully resolved configuration, units and tolerances.
    """
    units = config.units
    numerics = config.numerics
    return {
        "tool": "gravitydantic",
        "version": __version__,
        "command": command,
        "units": {
            "c": units.c_fixed,
            "hbar": units.hbar_fixed,
            "length_scale_m": units.length_scale_l0,
            "time_scale_s": units.time_to_si(1.0),
            "mass_scale_kg": units.mass_to_si(1.0),
            "G": units.G,
        },
        "tolerances": {
            "epsabs": numerics.epsabs,
            "epsrel": numerics.epsrel,
            "epsilon_0": numerics.epsilon_0,
            "epsilon_ratio": numerics.epsilon_ratio,
            "epsilon_levels": numerics.epsilon_levels,
            "noise_cutoff": numerics.noise_cutoff,
        },
        "config": config.model_dump(mode="json"),
    }


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: List[dict], provenance: dict) -> str:
    """
    "# " header lines carrying the provenance, then one header row and the rows.
    Floats are written with repr so reading them back is exact.
    """
    buffer = io.StringIO()
    for key, value in provenance.items():
        buffer.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    if rows:
        writer = csv.writer(buffer, lineterminator="\n")
        columns = list(rows[0])
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])
    return buffer.getvalue()


def rows_to_json(rows: List[dict], provenance: dict, indent: int = 2) -> str:
    return json.dumps({"provenance": provenance, "rows": rows}, indent=indent)


def read_csv_rows(text: str) -> List[dict]:
    """
    Rows of a CSV report with the header lines skipped and numbers parsed back.
    """
    lines = [line for line in text.splitlines() if not line.startswith("# ")]
    rows = []
    for row in csv.DictReader(lines):
        parsed = {}
        for key, cell in row.items():
            if cell == "":
                parsed[key] = None
                continue
            try:
                parsed[key] = int(cell)
            except ValueError:
                try:
                    parsed[key] = float(cell)
                except ValueError:
                    parsed[key] = {"True": True, "False": False}.get(cell, cell)
        rows.append(parsed)
    return rows


"""
FUNCTIONS
"""


def run_command(command: commands, config: RunConfig) -> Tuple[int, str]:
    """
    Run a command on a parsed configuration.
    Returns the exit status and the serialized output in the configured format.
    """
    if command not in _COMMAND_MAPPINGS:
        raise ValueError(f"Command {command} is not supported.")
    logger.info("Running %s.", command)
    status, rows = _COMMAND_MAPPINGS[command](config)
    provenance = get_provenance(config, command)

    # Serialize in the configured format
    if config.output.format == "json":
        output = rows_to_json(rows, provenance)
    else:
        output = rows_to_csv(rows, provenance)

    # Return the status and the output text
    return status, output
