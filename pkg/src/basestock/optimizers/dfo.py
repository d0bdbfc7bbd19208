"""Model-based derivative-free trust-region optimization.

Maintains a 2n+1-point interpolation set, fits a linear-plus-diagonal
quadratic model by least squares, minimizes the model exactly inside the
trust region (the diagonal subproblem reduces to a one-dimensional secular
equation), and applies a standard ratio-based radius update.  When the fit
degenerates, the set is rebuilt from scratch around the incumbent.

For networks, the noisy objective is the mean episode cost over a frozen
set of evaluation episodes (common random numbers), so the method sees a
deterministic function.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..network import Network
from .common import (
    Checkpoint,
    EVAL_STREAM,
    InteractionCounter,
    OptimizerRun,
    episode_scorer,
    finalize_run,
    initial_ouls,
)


# Radius update thresholds and factors; standard trust-region defaults.
ETA_LOW = 0.1
ETA_HIGH = 0.75
SHRINK = 0.5
GROW = 2.0


@dataclass
class DfoResult:
    x: np.ndarray
    fun: float
    evaluations: int
    history: list[tuple[int, np.ndarray, float]]
    status: str


def _solve_diag_trust_region(g: np.ndarray, d: np.ndarray, radius: float) -> np.ndarray:
    """Minimize g.s + 0.5 s.diag(d).s subject to ||s|| <= radius."""
    lam_floor = max(0.0, -float(d.min()))

    def step(lam: float) -> np.ndarray:
        denom = d + lam
        denom = np.where(np.abs(denom) < 1e-14, 1e-14, denom)
        return -g / denom

    if lam_floor == 0.0:
        interior = step(0.0)
        if np.linalg.norm(interior) <= radius:
            return interior
    lo = lam_floor + 1e-12
    hi = lam_floor + max(1.0, np.linalg.norm(g) / radius)
    while np.linalg.norm(step(hi)) > radius:
        hi *= 2.0
        if hi > 1e16:
            break
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if np.linalg.norm(step(mid)) > radius:
            lo = mid
        else:
            hi = mid
    return step(hi)


def minimize_dfo_tr(
    objective: Callable[[np.ndarray], float],
    x0: np.ndarray,
    max_evaluations: int = 100,
    initial_radius: Optional[float] = None,
    min_radius: float = 1e-8,
    stall_steps: int = 100,
    small_improvements: int = 10,
    small_improvement_frac: float = 0.005,
) -> DfoResult:
    """Trust-region DFO on a deterministic objective.

    Stops on the evaluation budget, on ``stall_steps`` consecutive steps
    without improvement, when the last ``small_improvements`` improvements
    were each below ``small_improvement_frac`` of the incumbent value, or
    when the radius collapses.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    n = len(x0)
    radius = initial_radius if initial_radius is not None else 0.1 * max(1.0, float(np.abs(x0).max()))

    evaluations = 0
    history: list[tuple[int, np.ndarray, float]] = []

    def evaluate(x: np.ndarray) -> float:
        nonlocal evaluations
        value = float(objective(x))
        evaluations += 1
        history.append((evaluations, x.copy(), value))
        return value

    def build_set(center: np.ndarray, spread: float):
        pts = [center.copy()]
        for i in range(n):
            for sign in (1.0, -1.0):
                step = np.zeros(n)
                step[i] = sign * spread
                pts.append(center + step)
        values = []
        for p in pts:
            if evaluations >= max_evaluations:
                break
            values.append(evaluate(p))
        pts = pts[: len(values)]
        return [np.array(p) for p in pts], values

    points, values = build_set(x0, radius)
    status = "budget"
    stall = 0
    recent_improvements: list[float] = []

    while evaluations < max_evaluations and radius > min_radius:
        best_idx = int(np.argmin(values))
        xb, fb = points[best_idx], values[best_idx]

        shifted = np.array([p - xb for p in points])
        design = np.hstack([np.ones((len(points), 1)), shifted, 0.5 * shifted**2])
        try:
            coef, *_ = np.linalg.lstsq(design, np.array(values), rcond=None)
        except np.linalg.LinAlgError:
            coef = None
        if coef is None or not np.all(np.isfinite(coef)):
            # Degenerate model: rebuild the interpolation set and retry.
            points, values = build_set(xb, max(radius, min_radius * 10))
            continue
        g = coef[1 : n + 1]
        d = coef[n + 1 :]

        step = _solve_diag_trust_region(g, d, radius)
        predicted = -(g @ step + 0.5 * (d * step) @ step)
        candidate = xb + step
        if predicted <= 1e-14:
            radius *= SHRINK
            stall += 1
            if stall >= stall_steps:
                status = "stalled"
                break
            continue

        f_candidate = evaluate(candidate)
        rho = (fb - f_candidate) / predicted

        distances = [np.linalg.norm(p - xb) for p in points]
        replace_idx = int(np.argmax(values)) if rho >= ETA_LOW else int(np.argmax(distances))
        if replace_idx != best_idx:
            points[replace_idx] = candidate
            values[replace_idx] = f_candidate

        if f_candidate < fb - 1e-14:
            improvement = (fb - f_candidate) / max(abs(fb), 1e-12)
            recent_improvements.append(improvement)
            stall = 0
            if len(recent_improvements) >= small_improvements and all(
                imp < small_improvement_frac for imp in recent_improvements[-small_improvements:]
            ):
                status = "small-improvements"
                break
        else:
            stall += 1
            if stall >= stall_steps:
                status = "stalled"
                break

        if rho >= ETA_HIGH:
            radius *= GROW
        elif rho < ETA_LOW:
            radius *= SHRINK

    if radius <= min_radius:
        status = "radius"
    best_idx = int(np.argmin(values))
    return DfoResult(points[best_idx].copy(), values[best_idx], evaluations, history, status)


def optimize_dfo_tr(
    net: Network,
    budget: int = 25,
    seed: int = 0,
    x0: Optional[np.ndarray] = None,
    episodes_per_eval: int = 2000,
) -> OptimizerRun:
    """Trust-region DFO over order-up-to levels, scored by simulation.

    Each objective evaluation averages ``episodes_per_eval`` episodes, and
    the default start point is the mean lead-time demand vector.
    """
    started = time.perf_counter()
    counter = InteractionCounter()
    score = episode_scorer(net, seed, EVAL_STREAM, episodes_per_eval)
    x0 = initial_ouls(net) if x0 is None else np.asarray(x0, dtype=np.float64)

    def objective(x: np.ndarray) -> float:
        counter.training += episodes_per_eval
        return score(x)

    result = minimize_dfo_tr(objective, x0, max_evaluations=budget)
    trace = [
        Checkpoint(k * episodes_per_eval, x, f) for k, x, f in result.history
    ]
    return finalize_run(
        net,
        "dfo",
        trace,
        result.x,
        result.fun,
        counter,
        seed,
        started,
        extras={"status": result.status, "evaluations": result.evaluations},
    )
