"""Air-traffic sector flows as a dynamic queuing network, with cyber-attack
injection and graph vulnerability metrics."""

from . import errors
from .attacks import AttackKind, AttackScenario, apply_rst_visibility, resolve_modifiers
from .engine import advance, initial_state, next_outflow, simulate, step_backlog
from .graph import (
    Route,
    SectorGraph,
    count_simple_paths,
    diameter,
    laplacian,
    remove_route,
    remove_sector,
)
from .paths import PathCensus, PathParams, PathTable, path_census, rank_compare, v_k
from .scenario import ScenarioDocument, dump_scenario, load_scenario, parse_scenario
from .spectral import (
    SpectralParams,
    crdos_vulnerability,
    edge_vulnerability,
    fiedler,
    prdos_vulnerability,
    sdos_vulnerability,
    total_vulnerability,
)
from .state import Aircraft, NetworkState, SimulationTrace, Status, StepModifiers

__version__ = "0.1.0"

__all__ = [
    "errors",
    "AttackKind",
    "AttackScenario",
    "apply_rst_visibility",
    "resolve_modifiers",
    "advance",
    "initial_state",
    "next_outflow",
    "simulate",
    "step_backlog",
    "Route",
    "SectorGraph",
    "count_simple_paths",
    "diameter",
    "laplacian",
    "remove_route",
    "remove_sector",
    "PathCensus",
    "PathParams",
    "PathTable",
    "path_census",
    "rank_compare",
    "v_k",
    "ScenarioDocument",
    "dump_scenario",
    "load_scenario",
    "parse_scenario",
    "SpectralParams",
    "crdos_vulnerability",
    "edge_vulnerability",
    "fiedler",
    "prdos_vulnerability",
    "sdos_vulnerability",
    "total_vulnerability",
    "Aircraft",
    "NetworkState",
    "SimulationTrace",
    "Status",
    "StepModifiers",
]
