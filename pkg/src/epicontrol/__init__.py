"""SIS epidemics on networks as marked point processes, with an
HJB-derived treatment policy, comparison baselines, and an experiment
harness."""

from .dynamics import (
    ControlParams,
    EpidemicState,
    Event,
    EventKind,
    ModelParams,
    apply_event,
    init_state,
    intensities,
)
from .graph import (
    Network,
    degree,
    load_edge_list,
    load_edge_list_file,
    spectral_drop_scores,
    spectral_radius,
)
from .lp import LinearProgram, LpSolution, LpStatus, solve
from .soc import (
    PolicyConstants,
    SocController,
    ValueConstants,
    compute_constants,
    compute_value_constants,
    hjb_residuals,
    optimal_intensity,
    solve_policy_lp,
)

__all__ = [
    "ControlParams",
    "EpidemicState",
    "Event",
    "EventKind",
    "ModelParams",
    "Network",
    "LinearProgram",
    "LpSolution",
    "LpStatus",
    "PolicyConstants",
    "SocController",
    "ValueConstants",
    "apply_event",
    "compute_constants",
    "compute_value_constants",
    "degree",
    "hjb_residuals",
    "init_state",
    "intensities",
    "load_edge_list",
    "load_edge_list_file",
    "optimal_intensity",
    "solve",
    "solve_policy_lp",
    "spectral_drop_scores",
    "spectral_radius",
]
