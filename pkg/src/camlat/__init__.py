"""Monte-Carlo simulator of cellular V2X awareness-message latency.

Compares end-to-end signaling latency on a two-lane freeway between a
conventional distant-cloud architecture and processing at an edge host
collocated with the serving base station.
"""

from .config import SimulationPlan, default_plan, load_config
from .engine import AggregateStats, aggregate, run_plan, run_replication
from .errors import (
    AggregationError,
    CamlatError,
    ConfigurationError,
    ScenarioError,
    UnreachableLinkError,
)
from .experiments import SweepResult, SweepSpec, emit_csv, emit_plot, run_sweep
from .latency import LatencyBreakdown

__version__ = "0.1.0"

__all__ = [
    "AggregateStats",
    "AggregationError",
    "CamlatError",
    "ConfigurationError",
    "LatencyBreakdown",
    "ScenarioError",
    "SimulationPlan",
    "SweepResult",
    "SweepSpec",
    "UnreachableLinkError",
    "__version__",
    "aggregate",
    "default_plan",
    "emit_csv",
    "emit_plot",
    "load_config",
    "run_plan",
    "run_replication",
    "run_sweep",
]
