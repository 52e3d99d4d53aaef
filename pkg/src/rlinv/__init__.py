"""Lot sizing for a reverse-logistics system with procurement, repair and disposal."""

__version__ = "0.1.0"

from .model import (
    CostBreakdown,
    DecisionVector,
    ParameterError,
    SystemParameters,
    area_decomposition,
    check_feasibility,
    inventory_cost,
    min_recovery,
    parallel_flow_cost,
    waste_cost,
)
from .oracle import InventoryTrace, TraceInconsistency, build_trace, simulated_cost
from .pareto import ParetoFront, WeightVector, compute_front, dominance_filter
from .scenario import Scenario, load_scenario
from .sensitivity import SweepSpec, run_sweep
from .solver import BoundsTooTight, EmptyFeasibleRegion, Solution, SolverConfig, solve_model1, solve_model2
