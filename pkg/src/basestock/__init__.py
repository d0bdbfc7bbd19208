"""Multi-echelon supply-chain simulation and base-stock optimization."""

from .analytics import newsvendor_cost, newsvendor_oul
from .costs import CostExpr, eval_cost, parse_cost_expr
from .demand import Normal, TruncatedPoisson, UniformInt, substream
from .dual import Dual, seed_ouls
from .fixtures import FIXTURE_SETS, Fixture, UnknownFixture, fixture, fixture_ids
from .instance import dump_instance, instance_doc, load_instance, parse_instance
from .network import (
    Edge,
    Network,
    NetworkValidationError,
    Node,
    NodeKind,
    decision_edges,
    validate,
)
from .simulator import (
    EpisodeResult,
    PolicyEvaluation,
    evaluate_policy,
    grad_episode,
    run_episode,
)

__version__ = "0.1.0"

__all__ = [
    "CostExpr",
    "Dual",
    "Edge",
    "EpisodeResult",
    "FIXTURE_SETS",
    "Fixture",
    "Network",
    "NetworkValidationError",
    "Node",
    "NodeKind",
    "Normal",
    "PolicyEvaluation",
    "TruncatedPoisson",
    "UniformInt",
    "UnknownFixture",
    "decision_edges",
    "dump_instance",
    "eval_cost",
    "evaluate_policy",
    "fixture",
    "fixture_ids",
    "grad_episode",
    "instance_doc",
    "load_instance",
    "newsvendor_cost",
    "newsvendor_oul",
    "parse_cost_expr",
    "parse_instance",
    "run_episode",
    "seed_ouls",
    "substream",
    "validate",
]
