"""Sequential star-network nonlocality: states, filters, closed-form bounds,
direct simulation of the measurement protocol, and a search over settings."""
from .errors import StarNetError
from .states import TwoQubitState
from .filters import FilterOperator, FilterAssignment, JointFilter
from .network import (EvaluationReport, MeasurementSettings, NetworkScenario, bound_closed,
                      bound_seq_closed, evaluate, scenario_success)
from .optimize import OptimizerConfig, maximize_s

__all__ = [
    "StarNetError", "TwoQubitState", "FilterOperator", "FilterAssignment", "JointFilter",
    "EvaluationReport", "MeasurementSettings", "NetworkScenario", "bound_closed",
    "bound_seq_closed", "evaluate", "scenario_success", "OptimizerConfig", "maximize_s",
]
