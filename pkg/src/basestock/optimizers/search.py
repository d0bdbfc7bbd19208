"""Search benchmarks: coordinate descent, grid enumeration, random search.

Coordinate descent and enumeration follow the comparison protocol used for
the assembly instances: coordinates may be tied within echelons, each
coordinate ranges over [0.75 D, 2 D] where D is the downstream node's mean
lead-time demand, and candidates are scored by the mean total cost of 3
simulated trials of 200 periods on frozen demand draws.
"""

from __future__ import annotations

import math
import time
from itertools import product
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .. import scalars
from ..demand import substream
from ..network import Network, echelon_groups
from ..simulator import simulate
from .common import (
    CANDIDATE_STREAM,
    Checkpoint,
    EVAL_STREAM,
    GridTooLarge,
    InteractionCounter,
    episode_scorer,
    finalize_run,
    initial_ouls,
)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _coordinate_groups(net: Network, tie_echelons: bool) -> list[list[int]]:
    edges = net.decision_edges()
    if not tie_echelons:
        return [[k] for k in range(len(edges))]
    index = {e: k for k, e in enumerate(edges)}
    return [[index[e] for e in group] for group in echelon_groups(net)]


def _group_bounds(net: Network, groups, span=(0.75, 2.0)):
    edges = net.decision_edges()
    bounds = []
    for group in groups:
        i, j = edges[group[0]]
        d = net.throughput_mean(j) * net.edges[(i, j)].lead_time
        bounds.append((span[0] * d, span[1] * d))
    return bounds


def _protocol_scorer(net: Network, seed: int, trials: int, periods: int):
    """Mean total cost over `trials` frozen trials of `periods` periods."""
    per_trial = [
        {
            j: net.nodes[j].demand.sample(substream(seed, EVAL_STREAM, t), periods)
            for j in net.ordering
            if net.is_leaf(j)
        }
        for t in range(trials)
    ]
    leaves = [j for j in net.ordering if net.is_leaf(j)]
    demands = {j: np.stack([d[j] for d in per_trial]) for j in leaves}
    levels = net.init_levels()

    def score(ouls) -> float:
        result = simulate(net, ouls, demands, levels, horizon=periods, include_salvage=False)
        return float(np.mean(scalars.value_of(result.total_cost)))

    score.demands = demands
    score.levels = levels
    score.episodes = trials
    return score


def optimize_coordinate_descent(
    net: Network,
    seed: int = 0,
    tie_echelons: bool = True,
    trials: int = 3,
    periods: int = 200,
    tolerance: float = 0.005,
    max_cycles: int = 20,
    line_search_iters: int = 20,
):
    """Cyclic coordinate descent with golden-section line searches."""
    started = time.perf_counter()
    counter = InteractionCounter()
    groups = _coordinate_groups(net, tie_echelons)
    bounds = _group_bounds(net, groups)
    score = _protocol_scorer(net, seed, trials, periods)

    x = initial_ouls(net)
    for group, (lo, hi) in zip(groups, bounds):
        level = min(max(float(np.mean(x[group])), lo), hi)
        x[group] = level

    def evaluate(vector) -> float:
        counter.training += trials
        return score(vector)

    trace: list[Checkpoint] = []
    current = evaluate(x)
    trace.append(Checkpoint(counter.training, x.copy(), current))

    def line_search(idx_group, lo, hi, incumbent):
        a, b = lo, hi
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)

        def at(level):
            candidate = x.copy()
            candidate[idx_group] = level
            return evaluate(candidate)

        fc, fd = at(c), at(d)
        for _ in range(line_search_iters):
            if fc <= fd:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = at(c)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = at(d)
        level = c if fc <= fd else d
        value = min(fc, fd)
        if value < incumbent:
            return level, value
        return None, incumbent

    for _ in range(max_cycles):
        cycle_start = current
        for group, (lo, hi) in zip(groups, bounds):
            level, current = line_search(group, lo, hi, current)
            if level is not None:
                x[group] = level
            trace.append(Checkpoint(counter.training, x.copy(), current))
        if cycle_start <= 0 or (cycle_start - current) / abs(cycle_start) < tolerance:
            break

    return finalize_run(
        net, "cd", trace, x, current, counter, seed, started,
        extras={"tied": tie_echelons, "protocol": f"{trials}x{periods}"},
    )


def optimize_enumeration(
    net: Network,
    seed: int = 0,
    points: int = 10,
    tie_echelons: bool = True,
    trials: int = 3,
    periods: int = 200,
    coordinate_cap: int = 6,
):
    """Full grid over (possibly echelon-tied) coordinates.

    Each coordinate takes ``points`` equally spaced values spanning
    [0.75 D, 2 D]; every grid point is scored by the 3x200 protocol.  All
    candidates share one batched simulation, replicated across the frozen
    trials.
    """
    started = time.perf_counter()
    counter = InteractionCounter()
    groups = _coordinate_groups(net, tie_echelons)
    if len(groups) > coordinate_cap:
        raise GridTooLarge(
            f"{len(groups)} coordinates would need {points ** len(groups)} grid points"
        )
    bounds = _group_bounds(net, groups)
    score = _protocol_scorer(net, seed, trials, periods)
    axes = [np.linspace(lo, hi, points) for lo, hi in bounds]

    candidates = []
    n_edges = len(net.decision_edges())
    for combo in product(*axes):
        vector = np.empty(n_edges)
        for group, level in zip(groups, combo):
            vector[group] = level
        candidates.append(vector)
    grid = np.stack(candidates)  # (K, n)
    K = len(grid)

    # One lock-step simulation over K x trials rows.
    demands = {j: np.tile(d, (K, 1)) for j, d in score.demands.items()}
    ouls = [np.repeat(grid[:, e], trials) for e in range(n_edges)]
    result = simulate(net, ouls, demands, score.levels, horizon=periods, include_salvage=False)
    totals = scalars.value_of(result.total_cost).reshape(K, trials).mean(axis=1)
    counter.training += K * trials

    order = np.argsort(totals)
    trace = [Checkpoint((k + 1) * trials, grid[idx], float(totals[idx])) for k, idx in enumerate(order[:25])]
    best = int(order[0])
    return finalize_run(
        net, "enumeration", trace, grid[best], float(totals[best]), counter, seed, started,
        extras={"grid_points": K, "tied": tie_echelons},
    )


def default_random_params(net: Network) -> dict[tuple[int, int], tuple[float, float]]:
    """Candidate-draw parameters when the instance supplies none: the base
    is each edge's starting level and the spread is 10% of it (floor 1)."""
    base = initial_ouls(net)
    edges = net.decision_edges()
    return {e: (float(b), max(1.0, 0.1 * abs(float(b)))) for e, b in zip(edges, base)}


def optimize_random_search(
    net: Network,
    seed: int = 0,
    candidates: int = 100,
    episodes_per: int = 2000,
    params: Optional[dict[tuple[int, int], tuple[float, float]]] = None,
    top_k: int = 5,
    jobs: int = 1,
):
    """Random candidate levels: base plus the absolute value of a zero-mean
    normal draw per edge; each candidate scores the mean cost of
    ``episodes_per`` frozen episodes."""
    started = time.perf_counter()
    counter = InteractionCounter()
    edges = net.decision_edges()
    params = params or default_random_params(net)
    missing = [e for e in edges if e not in params]
    if missing:
        raise ValueError(f"random-search parameters missing for edges {missing}")

    draws = []
    for c in range(candidates):
        rng = substream(seed, CANDIDATE_STREAM, c)
        vector = np.array(
            [params[e][0] + abs(rng.normal(0.0, params[e][1])) if params[e][1] > 0 else params[e][0] for e in edges]
        )
        draws.append(vector)

    score = episode_scorer(net, seed, EVAL_STREAM, episodes_per)

    if jobs != 1:
        costs = Parallel(n_jobs=jobs)(delayed(score)(v) for v in draws)
    else:
        costs = [score(v) for v in draws]
    counter.training += candidates * episodes_per

    order = np.argsort(costs)
    trace = [
        Checkpoint((int(idx) + 1) * episodes_per, draws[int(idx)], float(costs[int(idx)]))
        for idx in order[:top_k]
    ]
    best = int(order[0])
    return finalize_run(
        net, "random", trace, draws[best], float(costs[best]), counter, seed, started,
        extras={"candidates": candidates, "episodes_per": episodes_per},
    )
