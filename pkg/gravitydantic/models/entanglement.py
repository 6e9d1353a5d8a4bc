# -*- coding: utf-8 -*-
"""
DENSITY MATRICES ON THE TWO-PARTICLE BRANCH SPACE \n
Basis order (L1L2, R1L2, L1R2, R1R2), so the basis index is a + 2b with a the branch
of particle 1 and b the branch of particle 2 (0 for L, 1 for R).
"""
# Import Pydantic models and types
from pydantic import BaseModel, ConfigDict, field_validator
from typing import List, Literal, Sequence, Union

# Import utils
from gravitydantic.models._utils.labels import state_kinds

# Import other packages
import logging
import numpy as np
from scipy.stats import unitary_group

logger = logging.getLogger(__name__)


"""
DEFAULTS
"""


_FULL_TOLERANCE = 1e-12
_INCREMENT_TOLERANCE = 1e-14
_EIGENVALUE_SLACK = 1e-10
_DEGENERACY_TOLERANCE = 1e-9

# Eigenvalues this close to zero, relative to the increment, are rounding
_ROUNDING = 1e-12

# Axis permutations of the (b, a, b', a') tensor that transpose one factor
_PARTIAL_TRANSPOSE_AXES = {1: (0, 3, 2, 1), 2: (2, 1, 0, 3)}


"""
VALIDATORS
"""


# Store entries as a read-only 4x4 complex array
def _must_be_matrix4(v):
    v = np.array(v, dtype=complex)
    if v.shape != (4, 4):
        raise ValueError(f"Expected a 4x4 matrix, got shape {v.shape}.")
    v.setflags(write=False)
    return v


"""
MODELS
"""


class DensityMatrix4(BaseModel):
    """
    A 4x4 complex matrix on the branch basis, either a full state or an increment.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    _matrix_entries = field_validator("entries", mode="before")(_must_be_matrix4)

    def __init__(self, entries=None, **kwargs) -> None:
        if entries is not None:
            kwargs["entries"] = entries
        super(DensityMatrix4, self).__init__(**kwargs)

    def __add__(self, other: "DensityMatrix4") -> "DensityMatrix4":
        return DensityMatrix4(self.entries + other.entries)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def hermitian_part(self) -> np.ndarray:
        return 0.5 * (self.entries + self.entries.conj().T)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.hermitian_part())


class StateDiagnostics(BaseModel):
    """
    Defects of a matrix against the properties its kind requires.
    """

    model_config = ConfigDict(frozen=True)

    kind: state_kinds
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    max_eigenvalue: float
    violations: List[str] = []

    @property
    def valid(self) -> bool:
        return not self.violations


"""
FUNCTIONS
"""


def pure_state(amplitudes: Sequence[complex]) -> DensityMatrix4:
    """
    |ψ⟩⟨ψ| for a normalized amplitude vector in the branch basis.
    """
    psi = np.asarray(amplitudes, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix4(np.outer(psi, psi.conj()))


def partial_transpose(rho: DensityMatrix4, subsystem: Literal[1, 2]) -> DensityMatrix4:
    """
    Transpose the indices of particle 1 or particle 2.
    """
    if subsystem not in _PARTIAL_TRANSPOSE_AXES:
        raise ValueError(f"Subsystem must be 1 or 2, not {subsystem}.")
    tensor = rho.entries.reshape(2, 2, 2, 2)
    return DensityMatrix4(
        tensor.transpose(_PARTIAL_TRANSPOSE_AXES[subsystem]).reshape(4, 4)
    )


def _hermiticity_defect(entries: np.ndarray) -> float:
    return float(np.max(np.abs(entries - entries.conj().T)))


def negativity(rho: DensityMatrix4, subsystem: Literal[1, 2] = 2) -> float:
    """
    Sum of the absolute values of the negative eigenvalues of the partial transpose.
    """
    defect = _hermiticity_defect(rho.entries)
    if defect > _FULL_TOLERANCE:
        raise ValueError(f"Matrix is not Hermitian (defect {defect:.3e}).")
    spectrum = partial_transpose(rho, subsystem).eigenvalues()
    return float(-np.sum(spectrum[spectrum < 0.0]))


def validate_state(rho: DensityMatrix4, kind: state_kinds = "full") -> StateDiagnostics:
    """
    Report Hermiticity and trace defects and the spectrum range, and list every
    property the matrix violates for its kind. Never raises.
    """
    entries = rho.entries
    hermiticity = _hermiticity_defect(entries)
    target = 1.0 if kind == "full" else 0.0
    trace_defect = abs(np.trace(entries) - target)
    spectrum = rho.eigenvalues()
    tolerance = _FULL_TOLERANCE if kind == "full" else _INCREMENT_TOLERANCE
    violations = []
    if hermiticity > tolerance:
        violations.append(
            f"Hermiticity defect {hermiticity:.3e} above {tolerance:.0e}."
        )
    if trace_defect > tolerance:
        violations.append(f"Trace defect {trace_defect:.3e} above {tolerance:.0e}.")
    if kind == "full":
        if spectrum[0] < -_EIGENVALUE_SLACK:
            violations.append(f"Negative eigenvalue {spectrum[0]:.3e}.")
        if spectrum[-1] > 1.0 + _EIGENVALUE_SLACK:
            violations.append(f"Eigenvalue {spectrum[-1]:.6g} above one.")
    return StateDiagnostics(
        kind=kind,
        hermiticity_defect=hermiticity,
        trace_defect=float(trace_defect),
        min_eigenvalue=float(spectrum[0]),
        max_eigenvalue=float(spectrum[-1]),
        violations=violations,
    )


def first_order_spectrum(
    base: DensityMatrix4, increment: DensityMatrix4
) -> np.ndarray:
    """
    Eigenvalues of base + increment to first order in the increment.
    Degenerate eigenspaces of base are resolved by diagonalizing the increment
    projected onto each of them.
    """
    values, vectors = np.linalg.eigh(base.hermitian_part())
    perturbation = 0.5 * (increment.entries + increment.entries.conj().T)
    shifted = []
    start = 0
    while start < len(values):
        stop = start + 1
        while (
            stop < len(values)
            and values[stop] - values[start] <= _DEGENERACY_TOLERANCE
        ):
            stop += 1
        block = vectors[:, start:stop]
        projected = block.conj().T @ perturbation @ block
        level = float(np.mean(values[start:stop]))
        shifted.extend(level + np.linalg.eigvalsh(projected))
        start = stop
    return np.sort(np.array(shifted))


def leading_order_negativity(
    rho0: DensityMatrix4, increment: DensityMatrix4, subsystem: Literal[1, 2] = 2
) -> float:
    """
    Negativity of rho0 + increment with the partial-transpose spectrum expanded to
    first order in the increment. Eigenvalues within rounding of zero, relative to
    the largest increment entry, count as zero.
    """
    spectrum = first_order_spectrum(
        partial_transpose(rho0, subsystem), partial_transpose(increment, subsystem)
    )
    floor = _ROUNDING * float(np.max(np.abs(increment.entries)))
    return float(-np.sum(spectrum[spectrum < -floor]))


def random_local_unitary(
    random_state: Union[None, int, np.random.Generator] = None
) -> np.ndarray:
    """
    U1 ⊗ U2 with Haar-random single-particle unitaries, ordered for the branch basis.
    """
    u1 = unitary_group.rvs(2, random_state=random_state)
    u2 = unitary_group.rvs(2, random_state=random_state)
    return np.kron(u2, u1)


def conjugate(rho: DensityMatrix4, unitary: np.ndarray) -> DensityMatrix4:
    return DensityMatrix4(unitary @ rho.entries @ unitary.conj().T)
