# -*- coding: utf-8 -*-
"""
The functions in this package compare two models of gravity-mediated entanglement
between two masses, each held in a superposition of two paths. \n
In the quantum-controlled classical model each pair of paths carries its own classical
retarded field, and entanglement comes from the radiation functional Δ alone.
In linearized quantum gravity the Hadamard functional H and the local vacuum noise of
each particle also contribute, to leading order in G. \n
To run a configuration, parse it with parse_config() and pass it to run_command(),
or call the operations in gravitydantic.models directly. \n
Internally c = ħ = 1 and lengths and times are measured in a length scale l0,
1e-6 m by default.
"""
from gravitydantic.get_report import (
    __version__,
    get_provenance,
    read_csv_rows,
    rows_to_csv,
    rows_to_json,
    run_command,
)
from gravitydantic.models.config import load_config, parse_config
