# -*- coding: utf-8 -*-
"""
QUANTUM-CONTROLLED CLASSICAL FIELD MODEL \n
Each pair of branches carries the classical retarded field of those two trajectories,
so the only effect of gravity is a phase 2πGΔ per branch pair.
"""
# Import Pydantic models and types
from pydantic import BaseModel, ConfigDict, field_validator
from typing import Dict, Union

# Import models and utils
from gravitydantic.models.core import BranchConfig
from gravitydantic.models.entanglement import DensityMatrix4, pure_state
from gravitydantic.models.kernels import compute_functionals, NumericsSettings
from gravitydantic.models.retarded import integrated_pair_hamiltonian
from gravitydantic.models._utils.labels import basis_order, pair_labels

# Import other packages
import math
import numpy as np


"""
VALIDATORS
"""


# Exactly one finite real value per branch pair
def _must_be_complete_table(v):
    missing = set(basis_order) - set(v)
    if missing or len(v) != 4:
        raise ValueError(
            f"A phase table needs exactly the pairs {', '.join(basis_order)}."
        )
    for label, value in v.items():
        if not math.isfinite(value):
            raise ValueError(f"Δ for {label} is not finite: {value}.")
    return v


"""
MODELS
"""


class PhaseTable(BaseModel):
    """
    Radiation functionals Δ per branch pair and the phases 2πGΔ they imprint.
    """

    model_config = ConfigDict(frozen=True)

    delta: Dict[pair_labels, float]
    G: float

    _complete_table = field_validator("delta")(_must_be_complete_table)

    @property
    def phases(self) -> Dict[pair_labels, float]:
        return {k: 2.0 * math.pi * self.G * v for k, v in self.delta.items()}

    @property
    def combination(self) -> float:
        """
        Δ_LL + Δ_RR - Δ_LR - Δ_RL, the only part of the table that entangles.
        """
        d = self.delta
        return d["L1L2"] + d["R1R2"] - d["L1R2"] - d["R1L2"]


"""
FUNCTIONS
"""


def phase_table_from_deltas(delta: Dict[str, float], G: float) -> PhaseTable:
    return PhaseTable(delta={k: float(v) for k, v in delta.items()}, G=G)


def compute_phase_table(
    config: BranchConfig, G: float, numerics: Union[None, NumericsSettings] = None
) -> PhaseTable:
    """
    The four radiation functionals of a configuration, assembled into a table.
    """
    functionals = compute_functionals(
        config, numerics, deltas=True, hadamards=False, noise=False
    )
    return phase_table_from_deltas(
        {k: f.value for k, f in functionals.deltas.items()}, G
    )


def hamiltonian_deltas(
    config: BranchConfig, G: float, numerics: Union[None, NumericsSettings] = None
) -> Dict[pair_labels, float]:
    """
    Δ per pair from the time integral of the pair Hamiltonian, -∫H_I dt / (2πG).
    An independent route to the same table.
    """
    numerics = numerics or NumericsSettings()
    return {
        label: -integrated_pair_hamiltonian(
            w1, w2, G, epsabs=numerics.epsabs, epsrel=numerics.epsrel
        )[0]
        / (2.0 * math.pi * G)
        for label, w1, w2 in config.pairs()
    }


def classical_final_state(table: PhaseTable) -> DensityMatrix4:
    """
    ρ_c[P, Q] = exp(2πiG(Δ_P - Δ_Q)) / 4, in the basis (L1L2, R1L2, L1R2, R1R2).
    """
    phases = table.phases
    return pure_state(np.exp(1j * np.array([phases[k] for k in basis_order])))


def classical_negativity(table: PhaseTable, exact: bool = True) -> float:
    """
    (1/2)|sin(πGκ)| exactly, or (πG/2)|κ| to leading order, κ the Δ combination.
    Large phases alias through the sine; nothing is unwrapped.
    """
    argument = math.pi * table.G * table.combination
    if exact:
        return 0.5 * abs(math.sin(argument))
    return 0.5 * abs(argument)
