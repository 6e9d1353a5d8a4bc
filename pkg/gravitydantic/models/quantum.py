# -*- coding: utf-8 -*-
"""
LINEARIZED QUANTUM GRAVITY TO LEADING ORDER \n
The Dyson expansion of the joint evolution to first order in G gives three traceless
Hermitian increments to the initial product state: δρ_c from the radiation functionals,
δρ_l from the local vacuum noise of each particle and δρ_q from the Hadamard
functionals. Negativity follows from the first-order spectrum of the partial transpose.
"""
# Import Pydantic models and types
from pydantic import BaseModel, ConfigDict
from typing import Literal, Tuple, Union

# Import models and utils
from gravitydantic.models.core import BranchConfig, branches_congruent
from gravitydantic.models.entanglement import (
    DensityMatrix4,
    leading_order_negativity,
    partial_transpose,
)
from gravitydantic.models.kernels import (
    compute_functionals,
    FunctionalSet,
    NumericsSettings,
)
from gravitydantic.models._utils.errors import ConfigurationError
from gravitydantic.models._utils.labels import basis_order

# Import other packages
import logging
import math
import numpy as np

logger = logging.getLogger(__name__)


"""
DEFAULTS
"""


# Sign pattern of the Hadamard increment
_ANTIDIAGONAL = np.array(
    [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=complex
)

# Branch of each particle (0 for L, 1 for R) per basis index a + 2b
_BRANCH_BITS = [(index % 2, index // 2) for index in range(4)]

# Per particle, 1 where the particle's branch differs between rows and columns
_DIFFERS = [
    np.array(
        [[float(P[p] != Q[p]) for Q in _BRANCH_BITS] for P in _BRANCH_BITS],
        dtype=complex,
    )
    for p in range(2)
]

# |+-> and |-+>, one particle symmetric in its branches and the other antisymmetric
_EXCHANGE_PAIR = 0.5 * np.array([[1, 1, -1, -1], [1, -1, 1, -1]], dtype=complex).T


"""
MODELS
"""


class PerturbedState(BaseModel):
    """
    ρ0 and its three first-order increments, with the scalars they were built from.
    order is the coupling G that every increment is proportional to.
    """

    model_config = ConfigDict(frozen=True)

    # Matrices
    rho0: DensityMatrix4
    d_rho_c: DensityMatrix4
    d_rho_l: DensityMatrix4
    d_rho_q: DensityMatrix4

    # Scalars
    order: float
    kappa: float
    hadamard_combination: float = 0.0
    noise_differences: Tuple[float, float] = (0.0, 0.0)
    max_functional: float = 0.0
    include_quantum: bool = True
    include_noise: bool = True

    @property
    def increment(self) -> DensityMatrix4:
        return self.d_rho_c + self.d_rho_l + self.d_rho_q

    @property
    def total(self) -> DensityMatrix4:
        return self.rho0 + self.increment

    @property
    def feynman_magnitude(self) -> float:
        """
        |G_LL + G_RR - G_LR - G_RL| from its Δ and H parts.
        """
        return 0.5 * math.hypot(self.kappa, self.hadamard_combination)


"""
FUNCTIONS
"""


def initial_state() -> DensityMatrix4:
    """
    Both particles in an equal superposition of their two branches.
    """
    return DensityMatrix4(np.full((4, 4), 0.25, dtype=complex))


def assemble_perturbed_state(
    functionals: FunctionalSet,
    G: float,
    include_quantum: bool = True,
    include_noise: bool = True,
) -> PerturbedState:
    """
    Fill the three increment templates from a set of functionals.
    include_quantum=False drops the Hadamard increment and include_noise=False the
    local noise; both off leaves only the classical phase increment.
    """
    delta = np.array([functionals.deltas[k].value for k in basis_order])
    d_rho_c = 0.5j * math.pi * G * (delta[:, None] - delta[None, :])

    hadamard = 0.0
    d_rho_q = np.zeros((4, 4), dtype=complex)
    if include_quantum:
        hadamard = functionals.hadamard_combination
        d_rho_q = 0.5 * math.pi * G * hadamard * _ANTIDIAGONAL

    differences = (0.0, 0.0)
    d_rho_l = np.zeros((4, 4), dtype=complex)
    if include_noise:
        differences = functionals.noise.differences
        d_rho_l = -math.pi * G * sum(n * D for n, D in zip(differences, _DIFFERS))

    return PerturbedState(
        rho0=initial_state(),
        d_rho_c=DensityMatrix4(d_rho_c),
        d_rho_l=DensityMatrix4(d_rho_l),
        d_rho_q=DensityMatrix4(d_rho_q),
        order=G,
        kappa=functionals.delta_combination,
        hadamard_combination=hadamard,
        noise_differences=differences,
        max_functional=functionals.max_functional,
        include_quantum=include_quantum,
        include_noise=include_noise,
    )


def check_branch_symmetry(config: BranchConfig) -> None:
    """
    Raise ConfigurationError unless the two branches of each particle are congruent,
    which the increment templates assume.
    """
    for particle, (left, right) in enumerate(
        ((config.l1, config.r1), (config.l2, config.r2)), start=1
    ):
        if not branches_congruent(left, right):
            raise ConfigurationError(
                f"The branches of particle {particle} are not related by a rotation "
                "and translation, so their local noise differs and the increment "
                "templates do not apply."
            )


def perturbative_corrections(
    config: BranchConfig,
    G: float,
    numerics: Union[None, NumericsSettings] = None,
    include_noise: bool = True,
    include_quantum: bool = True,
) -> PerturbedState:
    """
    Compute the functionals of a configuration and assemble its perturbed state.
    """
    check_branch_symmetry(config)
    functionals = compute_functionals(
        config,
        numerics,
        deltas=True,
        hadamards=include_quantum,
        noise=include_noise,
    )
    return assemble_perturbed_state(functionals, G, include_quantum, include_noise)


def quantum_negativity(state: PerturbedState, subsystem: Literal[1, 2] = 2) -> float:
    """
    Negativity of ρ0 + δρ_c + δρ_l + δρ_q with the partial-transpose spectrum taken
    to first order in G. A spectrum with no negative part gives 0.
    """
    value = leading_order_negativity(state.rho0, state.increment, subsystem)
    if value == 0.0 and state.include_noise and any(state.noise_differences):
        logger.info(
            "Local noise outweighs the propagator combination; negativity clamped "
            "at 0 (effective noise %.6g).",
            effective_noise(state),
        )
    return value


def effective_noise(state: PerturbedState) -> float:
    """
    The local noise L for which N_G = πG(|G_LL + G_RR - G_LR - G_RL| - L) reproduces
    the first-order spectrum, clamp removed. Equals 2(L_V - L_I) for congruent
    particles of equal mass.
    """
    transposed = partial_transpose(state.increment, 2).entries
    block = _EXCHANGE_PAIR.conj().T @ transposed @ _EXCHANGE_PAIR
    lowest = np.linalg.eigvalsh(0.5 * (block + block.conj().T))[0]
    return state.feynman_magnitude + float(lowest) / (math.pi * state.order)


def classical_limit_switch(
    config: BranchConfig, G: float, numerics: Union[None, NumericsSettings] = None
) -> float:
    """
    Rerun the quantum pipeline with the causal and Hadamard kernels set to zero, which
    also removes the Wightman noise. Equals the leading-order classical negativity.
    """
    state = perturbative_corrections(
        config, G, numerics, include_noise=False, include_quantum=False
    )
    return quantum_negativity(state)


def positivity_coefficient(state: PerturbedState) -> float:
    """
    C with the lowest eigenvalue of ρ0 + δρ bounded below by -C G² whenever the
    first-order block on the kernel of ρ0 is positive: the squared Frobenius norm
    of the increment over G².
    """
    return float(np.sum(np.abs(state.increment.entries) ** 2)) / state.order**2


def second_order_bound(state: PerturbedState) -> float:
    """
    Size of the neglected second-order terms, (πG · max |functional|)².
    """
    return (math.pi * state.order * state.max_functional) ** 2
