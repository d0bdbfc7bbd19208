"""Gradient agent: order-up-to levels trained with Adam on simulated cost.

The decision vector is the parameter vector itself.  Each step draws a
mini-batch of episodes, differentiates the mean episode cost through the
simulator (forward mode), and applies an Adam update.  Every
``checkpoint_every`` training episodes the current levels are scored on a
frozen held-out test batch; the best checkpoint wins.

A trained network head is redundant here: with a constant input the
converged network output is a constant vector, so direct parameterization
reaches the same optima.  ``optimize_mlp`` keeps the network form available
as an optional mode (softplus hidden layers, all-ones input).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..network import Network
from ..simulator import batch_demands, grad_episode_batch
from .common import (
    Checkpoint,
    InteractionCounter,
    NonFiniteCost,
    OptimizerRun,
    TEST_STREAM,
    TRAIN_STREAM,
    episode_scorer,
    finalize_run,
    initial_ouls,
)


@dataclass(frozen=True)
class AgentConfig:
    learning_rate: float = 0.01
    batch_size: int = 5
    episodes: int = 50_000
    checkpoint_every: int = 100
    test_episodes: int = 100
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    restart_threshold: float = 0.01
    max_rounds: int = 5

    def __post_init__(self):
        if min(self.learning_rate, self.batch_size, self.episodes, self.checkpoint_every) <= 0:
            raise ValueError("config values must be positive")
        if self.checkpoint_every % self.batch_size != 0:
            raise ValueError("batch_size must divide checkpoint_every")


def optimize_adam(
    net: Network,
    config: AgentConfig = AgentConfig(),
    seed: int = 0,
    theta0: Optional[np.ndarray] = None,
    init_levels: Optional[dict[int, float]] = None,
    counter: Optional[InteractionCounter] = None,
    episode_offset: int = 0,
    finalize: bool = True,
) -> OptimizerRun:
    """Train the order-up-to vector with Adam; return the best checkpoint.

    ``episode_offset`` shifts the training substream indices so restart
    rounds never reuse episodes.
    """
    started = time.perf_counter()
    counter = counter or InteractionCounter()
    levels = init_levels if init_levels is not None else net.init_levels()
    theta = np.array(initial_ouls(net) if theta0 is None else theta0, dtype=np.float64)
    n = len(theta)

    test = episode_scorer(net, seed, TEST_STREAM, config.test_episodes, init_levels=levels)

    m = np.zeros(n)
    v = np.zeros(n)
    step = 0
    trace: list[Checkpoint] = []

    def checkpoint(episodes_done: int) -> None:
        cost = test(theta)
        counter.measurement += config.test_episodes
        trace.append(Checkpoint(episodes_done, theta.copy(), cost))

    checkpoint(0)
    episodes_done = 0
    while episodes_done < config.episodes:
        batch = min(config.batch_size, config.episodes - episodes_done)
        first = episode_offset + episodes_done
        demands = batch_demands(net, seed, TRAIN_STREAM, range(first, first + batch), net.horizon)
        costs, grads = grad_episode_batch(net, theta, demands, levels)
        if not (np.all(np.isfinite(costs)) and np.all(np.isfinite(grads))):
            raise NonFiniteCost(theta)
        gradient = grads.mean(axis=0)

        step += 1
        m = config.beta1 * m + (1 - config.beta1) * gradient
        v = config.beta2 * v + (1 - config.beta2) * gradient * gradient
        m_hat = m / (1 - config.beta1**step)
        v_hat = v / (1 - config.beta2**step)
        theta = theta - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)

        episodes_done += batch
        counter.training += batch
        if episodes_done % config.checkpoint_every == 0 or episodes_done >= config.episodes:
            checkpoint(episodes_done)

    best = min(trace, key=lambda c: c.test_cost)
    if not finalize:
        return OptimizerRun(
            method="adam",
            trace=trace,
            best_ouls=best.ouls,
            best_score=best.test_cost,
            best_episode_cost=float("nan"),
            best_cost_per_period=float("nan"),
            training_interactions=counter.training,
            environment_interactions=counter.total,
            seed=seed,
            wall_seconds=time.perf_counter() - started,
        )
    return finalize_run(
        net, "adam", trace, best.ouls, best.test_cost, counter, seed, started
    )


def restart_loop(
    net: Network,
    config: AgentConfig = AgentConfig(),
    seed: int = 0,
    total_episodes: Optional[int] = None,
) -> OptimizerRun:
    """Retrain from scratch with the best levels as new initial inventories.

    After each round, another round runs only while the round's best test
    cost improved on the previous round's (or, for the first round, on the
    starting test cost) by at least ``restart_threshold``; ``total_episodes``
    caps training episodes across all rounds.
    """
    started = time.perf_counter()
    counter = InteractionCounter()
    total_budget = total_episodes or config.episodes * config.max_rounds
    working_net = net
    trace: list[Checkpoint] = []
    round_bests: list[float] = []
    best_ouls = None
    best_cost = np.inf
    previous = None
    offset = 0

    for _ in range(config.max_rounds):
        remaining = total_budget - counter.training
        if remaining < config.checkpoint_every:
            break
        round_config = replace(config, episodes=min(config.episodes, remaining))
        run = optimize_adam(
            working_net,
            round_config,
            seed,
            counter=counter,
            episode_offset=offset,
            finalize=False,
        )
        offset += round_config.episodes
        for c in run.trace:
            trace.append(Checkpoint(c.episodes + (offset - round_config.episodes), c.ouls, c.test_cost))
        baseline = run.trace[0].test_cost if previous is None else previous
        round_best = run.best_score
        round_bests.append(round_best)
        if round_best < best_cost:
            best_cost = round_best
            best_ouls = run.best_ouls
        improvement = (baseline - round_best) / abs(baseline) if baseline else 0.0
        previous = round_best
        if improvement < config.restart_threshold:
            break
        by_edge = dict(zip(working_net.decision_edges(), best_ouls))
        working_net = working_net.with_init_levels(by_edge)

    out = finalize_run(
        net,
        "adam-restart",
        trace,
        best_ouls,
        best_cost,
        counter,
        seed,
        started,
        extras={"round_best_costs": round_bests},
    )
    return out
