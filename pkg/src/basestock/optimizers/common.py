"""Shared optimizer plumbing: run records, scoring, interaction accounting."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import scalars
from ..network import Network
from ..simulator import batch_demands, evaluate_policy, simulate

# Substream namespaces (the "trial" coordinate).  Training uses 0 so that
# optimizer training draws line up with the documented substream contract.
TRAIN_STREAM = 0
TEST_STREAM = 1
EVAL_STREAM = 2
REPORT_STREAM = 3
CANDIDATE_STREAM = 4


class OptimizerError(RuntimeError):
    pass


class NonFiniteCost(OptimizerError):
    def __init__(self, ouls) -> None:
        self.ouls = np.asarray(ouls)
        super().__init__(f"episode cost diverged at order-up-to levels {self.ouls}")


class GridTooLarge(OptimizerError):
    pass


@dataclass
class Checkpoint:
    episodes: int
    ouls: np.ndarray
    test_cost: float


@dataclass
class OptimizerRun:
    """Convergence record of one optimizer execution.

    ``best_score`` is in the method's own selection scale (episode totals
    for the gradient agent, protocol means for the searches), while
    ``best_episode_cost`` and ``best_cost_per_period`` come from fresh
    evaluations on a dedicated reporting stream, so the reported quality
    of the chosen levels is never the score that selected them.
    ``training_interactions`` counts episodes the method consumed to learn;
    ``environment_interactions`` additionally counts test and report
    episodes.
    """

    method: str
    trace: list[Checkpoint]
    best_ouls: np.ndarray
    best_score: float
    best_episode_cost: float
    best_cost_per_period: float
    training_interactions: int
    environment_interactions: int
    seed: int
    wall_seconds: float
    extras: dict = field(default_factory=dict)

    @property
    def best_cost(self) -> float:
        return self.best_episode_cost


class InteractionCounter:
    def __init__(self) -> None:
        self.training = 0
        self.measurement = 0

    @property
    def total(self) -> int:
        return self.training + self.measurement


def initial_ouls(net: Network) -> np.ndarray:
    """Starting decision vector: explicit per-edge init levels where given,
    otherwise the downstream node's mean demand over the edge lead time."""
    out = []
    for (i, j) in net.decision_edges():
        e = net.edges[(i, j)]
        if e.init_level is not None:
            out.append(e.init_level)
        else:
            out.append(net.throughput_mean(j) * e.lead_time)
    return np.array(out, dtype=np.float64)


def episode_scorer(
    net: Network,
    seed: int,
    stream: int,
    episodes: int,
    horizon: Optional[int] = None,
    init_levels: Optional[dict[int, float]] = None,
    include_salvage: bool = True,
):
    """Mean-episode-cost objective with a frozen demand set (common random
    numbers): every call scores against the same episodes, so comparisons
    between candidate levels are low-variance and deterministic."""
    horizon = horizon or net.horizon
    demands = batch_demands(net, seed, stream, range(episodes), horizon)
    levels = init_levels if init_levels is not None else net.init_levels()

    def score(ouls) -> float:
        result = simulate(net, ouls, demands, levels, horizon=horizon, include_salvage=include_salvage)
        return float(np.mean(scalars.value_of(result.total_cost)))

    score.episodes = episodes
    return score


def finalize_run(
    net: Network,
    method: str,
    trace: list[Checkpoint],
    best_ouls: np.ndarray,
    best_score: float,
    counter: InteractionCounter,
    seed: int,
    started: float,
    report_episodes: int = 200,
    extras: Optional[dict] = None,
) -> OptimizerRun:
    """Attach fresh reporting evaluations and close the accounting."""
    report = episode_scorer(net, seed, REPORT_STREAM, report_episodes)
    best_episode_cost = report(best_ouls)
    counter.measurement += report_episodes

    policy = evaluate_policy(net, best_ouls, trials=5, horizon=2000, seed=seed + 101)
    counter.measurement += policy.episodes_simulated

    return OptimizerRun(
        method=method,
        trace=trace,
        best_ouls=np.asarray(best_ouls, dtype=np.float64),
        best_score=float(best_score),
        best_episode_cost=float(best_episode_cost),
        best_cost_per_period=float(policy.mean_cost_per_period),
        training_interactions=counter.training,
        environment_interactions=counter.total,
        seed=seed,
        wall_seconds=time.perf_counter() - started,
        extras=extras or {},
    )
