from .adam import AgentConfig, optimize_adam, restart_loop
from .common import (
    Checkpoint,
    GridTooLarge,
    NonFiniteCost,
    OptimizerError,
    OptimizerRun,
    initial_ouls,
)
from .dfo import minimize_dfo_tr, optimize_dfo_tr
from .mlp import optimize_mlp
from .search import (
    default_random_params,
    optimize_coordinate_descent,
    optimize_enumeration,
    optimize_random_search,
)

__all__ = [
    "AgentConfig",
    "Checkpoint",
    "GridTooLarge",
    "NonFiniteCost",
    "OptimizerError",
    "OptimizerRun",
    "initial_ouls",
    "minimize_dfo_tr",
    "optimize_dfo_tr",
    "optimize_mlp",
    "optimize_adam",
    "restart_loop",
    "default_random_params",
    "optimize_coordinate_descent",
    "optimize_enumeration",
    "optimize_random_search",
]
