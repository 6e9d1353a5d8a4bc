# -*- coding: utf-8 -*-
"""
PYDANTIC MODELS AND OPERATIONS FOR GRAVITY-MEDIATED ENTANGLEMENT
"""
from gravitydantic.models.core import (
    branches_congruent,
    BranchConfig,
    build_branch_config,
    ExperimentSpec,
    FourVector,
    get_worldline,
    hull_distance,
    make_split_worldline,
    make_static_worldline,
    make_uniform_worldline,
    SplitWorldline,
    StaticWorldline,
    UniformWorldline,
    UnitsSystem,
    Worldline,
    WorldlineModel,
)
from gravitydantic.models.retarded import (
    arrival_time,
    bitensor_contract,
    departure_time,
    integrated_pair_hamiltonian,
    light_cone_times,
    pair_hamiltonian,
    retarded_field_density,
    RetardedSolution,
    solve_retarded_time,
)
from gravitydantic.models.kernels import (
    advanced_pair_functional,
    causal_pair_functional,
    compose_feynman,
    compute_functionals,
    default_epsilon_schedule,
    delta_pair_functional,
    feynman_pair_functional,
    FunctionalSet,
    hadamard_pair_functional,
    NoiseTerms,
    NumericsSettings,
    PairFunctional,
    retarded_pair_functional,
    single_branch_noise,
    vacuum_noise_terms,
)
from gravitydantic.models.oracles import (
    principal_lag_integral,
    static_cross_noise,
    static_delta,
    static_dominance_ratio,
    static_hadamard,
    static_hadamard_cauchy,
    static_self_noise,
)
from gravitydantic.models.entanglement import (
    conjugate,
    DensityMatrix4,
    first_order_spectrum,
    leading_order_negativity,
    negativity,
    partial_transpose,
    pure_state,
    random_local_unitary,
    StateDiagnostics,
    validate_state,
)
from gravitydantic.models.classical import (
    classical_final_state,
    classical_negativity,
    compute_phase_table,
    hamiltonian_deltas,
    phase_table_from_deltas,
    PhaseTable,
)
from gravitydantic.models.quantum import (
    assemble_perturbed_state,
    check_branch_symmetry,
    classical_limit_switch,
    effective_noise,
    initial_state,
    perturbative_corrections,
    PerturbedState,
    positivity_coefficient,
    quantum_negativity,
    second_order_bound,
)
from gravitydantic.models.scanner import (
    classify_regime,
    dominance_ratio,
    DominanceExtrapolation,
    DominanceRatio,
    evaluate_point,
    extrapolate_dominance_ratio,
    ModelReport,
    ratio_from_functionals,
    run_sweep,
    SweepAxis,
    SweepSpec,
)
from gravitydantic.models.config import (
    load_config,
    OutputSection,
    parse_config,
    RunConfig,
    SweepSection,
)
from gravitydantic.models._utils.errors import (
    AccuracyError,
    ConfigParseError,
    ConfigValidationError,
    ConfigurationError,
    DomainError,
    GravitydanticError,
    SingularityError,
    SolverError,
)
