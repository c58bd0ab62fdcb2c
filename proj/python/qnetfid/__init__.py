"""Average maximum teleportation fidelity of Werner-state repeater networks."""

from ._core import (
    Network,
    __version__,
    average_max_fidelity,
    brute_force_pair_fidelity,
    cli,
    decoherence_weight,
    effective_path_length,
    generate,
    load_edge_list,
    pair_max_fidelity,
    run_scenario_B,
    run_scenario_C,
    save_edge_list,
    scenario_A,
    scenario_A_exact,
    scenario_B,
    scenario_B_exact,
)

__all__ = [
    "Network",
    "__version__",
    "average_max_fidelity",
    "brute_force_pair_fidelity",
    "cli",
    "decoherence_weight",
    "effective_path_length",
    "generate",
    "load_edge_list",
    "pair_max_fidelity",
    "run_scenario_B",
    "run_scenario_C",
    "save_edge_list",
    "scenario_A",
    "scenario_A_exact",
    "scenario_B",
    "scenario_B_exact",
]
