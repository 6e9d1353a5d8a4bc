# -*- coding: utf-8 -*-
"""
VOCABULARIES USED ACROSS THE MODELS
"""
# Import types
from typing import Literal

# Labels of the four branches, two per particle
branch_labels = Literal["L1", "R1", "L2", "R2"]

# Branch-pair keys, one branch of particle 1 and one of particle 2
pair_labels = Literal["L1L2", "L1R2", "R1L2", "R1R2"]

# Kernels that can be integrated along two worldlines
kernel_kinds = Literal[
    "Retarded",
    "Advanced",
    "RadiationDelta",
    "Hadamard",
    "CausalE",
    "FeynmanG",
]

# Arrangements of the two interferometers
layouts = Literal["collinear", "parallel"]

# Diagnostics a sweep may request
output_kinds = Literal["classical", "quantum", "noise"]

# Parameters a sweep may vary
sweep_parameters = Literal["m1", "m2", "separation", "offset", "duration", "G"]

# Regimes a grid point may fall into
regime_flags = Literal["timelike-dominated", "spacelike", "mixed"]

# Outcome of a ratio whose denominator may vanish
ratio_flags = Literal["finite", "infinite", "undefined"]

# Kind of density matrix, full state or perturbative increment
state_kinds = Literal["full", "increment"]

# Serialization formats
output_formats = Literal["csv", "json"]

# Commands of the command-line tool
commands = Literal["single", "sweep", "validate", "oracle"]

# Basis order of the two-particle branch space, index = a + 2 * b
basis_order = ("L1L2", "R1L2", "L1R2", "R1R2")
