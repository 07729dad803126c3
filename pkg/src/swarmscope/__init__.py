"""Swarm simulators plus an observer-side analytics pipeline.

Simulate four processes that all produce a visually identical milling
ring, reduce the observable trajectories to information markers, detect
time-resolved group behaviors, and then let a declared context decide
what kind of emergence (and whether a swarm) the observer may claim.
"""

from .behaviors import (BehaviorEvent, BehaviorSpec, BehaviorVerdict,
                        MarkerConstraint, behavior_matrix,
                        behavior_specs_from_json, behavior_specs_to_json,
                        default_behavior_specs, evaluate_behavior,
                        read_events_jsonl, write_events_jsonl)
from .core import (AgentState, ConfigError, ContextDescriptor, Coupling,
                   TrajectoryLog, finite_difference_velocities, wrap_angle)
from .emergence import (EmergenceType, EmergenceVerdict, EquifinalityReport,
                        classify_emergence, equifinality_check)
from .engines import (EngineConfig, EngineFamily, random_initial_states,
                      simulate, simulate_distributed_formation,
                      simulate_dubins_swarm, simulate_feedforward_field,
                      simulate_rigid_rotation)
from .gate import SwarmChecklist, evaluate_swarm_gate, format_checklist_table
from .markers import (MarkerSeries, MarkerVector, compute_marker_series,
                      compute_markers, convex_hull_area, nearest_neighbor_stats)
from .scenarios import (OutputOptions, RandomBoxInitial, RunReport, Scenario,
                        ScenarioValidationError, SweepReport, builtin_context_names,
                        builtin_scenario_names, load_builtin_context,
                        load_builtin_events, load_builtin_scenario, run_scenario,
                        sweep)

__version__ = "0.1.0"

__all__ = [
    "AgentState", "BehaviorEvent", "BehaviorSpec", "BehaviorVerdict",
    "ConfigError", "ContextDescriptor", "Coupling", "EmergenceType",
    "EmergenceVerdict", "EngineConfig", "EngineFamily", "EquifinalityReport",
    "MarkerConstraint", "MarkerSeries", "MarkerVector", "OutputOptions",
    "RandomBoxInitial", "RunReport", "Scenario", "ScenarioValidationError",
    "SwarmChecklist", "SweepReport", "TrajectoryLog", "behavior_matrix",
    "behavior_specs_from_json", "behavior_specs_to_json",
    "builtin_context_names", "builtin_scenario_names", "classify_emergence",
    "compute_marker_series", "compute_markers", "convex_hull_area",
    "default_behavior_specs", "equifinality_check", "evaluate_behavior",
    "evaluate_swarm_gate", "finite_difference_velocities",
    "format_checklist_table", "load_builtin_context", "load_builtin_events",
    "load_builtin_scenario", "nearest_neighbor_stats", "random_initial_states",
    "read_events_jsonl", "run_scenario", "simulate",
    "simulate_distributed_formation", "simulate_dubins_swarm",
    "simulate_feedforward_field", "simulate_rigid_rotation", "sweep",
    "wrap_angle", "write_events_jsonl",
]
