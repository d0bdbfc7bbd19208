"""HTTP service wrapping the simulation and optimization core.

Endpoints accept instance documents inline, run synchronously, and return
JSON summaries; convergence traces come back as rows for the client to
persist.  Validation failures map to 400 with kind "validation"; optimizer
failures map to 422 with kind "optimizer".
"""

from __future__ import annotations

from typing import Any

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..costs import CostExprError
from ..fixtures import FIXTURE_SETS, UnknownFixture, fixture, fixture_ids
from ..instance import InstanceParseError, instance_doc, parse_instance
from ..network import Network, NetworkValidationError
from ..optimizers import (
    AgentConfig,
    GridTooLarge,
    NonFiniteCost,
    OptimizerError,
    OptimizerRun,
    optimize_adam,
    optimize_coordinate_descent,
    optimize_dfo_tr,
    optimize_enumeration,
    optimize_mlp,
    optimize_random_search,
    restart_loop,
)
from ..simulator import (
    DimensionMismatch,
    batch_demands,
    evaluate_policy,
    run_episode,
    simulate,
    trace_rows,
)
from . import schemas

app = FastAPI(title="basestock", version=__version__)


def _bad_request(kind: str, exc: Exception, status: int = 400):
    return HTTPException(status_code=status, detail={"kind": kind, "message": str(exc)})


def _parse(doc: dict) -> Network:
    try:
        return parse_instance(doc)
    except (InstanceParseError, NetworkValidationError, CostExprError, ValueError) as exc:
        raise _bad_request("validation", exc) from exc


def _edge_key(edge: tuple[int, int]) -> str:
    return f"{edge[0]}->{edge[1]}"


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/fixtures", response_model=schemas.FixtureListResponse)
def list_fixtures():
    return schemas.FixtureListResponse(fixtures=fixture_ids(), sets=FIXTURE_SETS)


@app.get("/fixtures/{fixture_id}")
def get_fixture(fixture_id: str) -> dict:
    try:
        fx = fixture(fixture_id)
    except UnknownFixture as exc:
        raise _bad_request("validation", exc, status=404) from exc
    doc = instance_doc(fx.network)
    references = [
        {
            "method": row.method,
            "cost": row.cost,
            "scale": row.scale,
            "ouls": {_edge_key(e): v for e, v in row.ouls.items()} if row.ouls else None,
        }
        for row in fx.references
    ]
    return {"id": fx.id, "instance": doc, "references": references, "notes": fx.notes}


@app.post("/validate", response_model=schemas.ValidateResponse)
def validate_instance(req: schemas.InstancePayload):
    net = _parse(req.instance)
    return schemas.ValidateResponse(
        ordering=list(net.ordering),
        decision_edges=[list(e) for e in net.decision_edges()],
        priming_levels={str(j): v for j, v in net.priming_levels().items()},
        init_levels={str(j): v for j, v in net.init_levels().items()},
        horizon=net.horizon,
        echelons={str(j): net.echelon(j) for j in net.ordering},
    )


@app.post("/simulate", response_model=schemas.SimulateResponse)
def simulate_policy(req: schemas.SimulateRequest):
    net = _parse(req.instance)
    try:
        evaluation = evaluate_policy(
            net,
            req.ouls,
            trials=req.trials,
            horizon=req.horizon,
            seed=req.seed,
            allow_negative_orders=req.allow_negative_orders,
        )
        episodes = batch_demands(net, req.seed, 1, range(200), net.horizon)
        episode_result = simulate(
            net,
            req.ouls,
            episodes,
            net.init_levels(),
            horizon=net.horizon,
            allow_negative_orders=req.allow_negative_orders,
        )
        trace = None
        if req.include_trace:
            horizon = req.trace_horizon or net.horizon
            result = run_episode(
                net,
                req.ouls,
                horizon=horizon,
                rng=req.seed,
                collect_trace=True,
                allow_negative_orders=req.allow_negative_orders,
            )
            trace = trace_rows(net, result.trace)
    except DimensionMismatch as exc:
        raise _bad_request("validation", exc) from exc
    return schemas.SimulateResponse(
        mean_cost_per_period=evaluation.mean_cost_per_period,
        std_across_trials=evaluation.std_across_trials,
        per_trial=[float(x) for x in evaluation.per_trial],
        warmup=evaluation.warmup,
        mean_episode_cost=float(np.mean(episode_result.total_cost)),
        episode_horizon=net.horizon,
        trace=trace,
    )


def _run_optimizer(net: Network, method: str, seed: int, params: dict[str, Any]) -> OptimizerRun:
    if method == "adam":
        config = AgentConfig(**{k: v for k, v in params.items() if k in AgentConfig.__dataclass_fields__})
        return optimize_adam(net, config, seed=seed)
    if method == "adam-restart":
        config = AgentConfig(**{k: v for k, v in params.items() if k in AgentConfig.__dataclass_fields__})
        return restart_loop(net, config, seed=seed, total_episodes=params.get("total_episodes"))
    if method == "mlp":
        config = AgentConfig(**{k: v for k, v in params.items() if k in AgentConfig.__dataclass_fields__})
        hidden = tuple(params.get("hidden", (8,)))
        return optimize_mlp(net, config, seed=seed, hidden=hidden)
    if method == "dfo":
        return optimize_dfo_tr(
            net,
            budget=params.get("budget", 25),
            seed=seed,
            episodes_per_eval=params.get("episodes_per_eval", 2000),
        )
    if method == "cd":
        return optimize_coordinate_descent(
            net,
            seed=seed,
            tie_echelons=params.get("tie_echelons", True),
            trials=params.get("trials", 3),
            periods=params.get("periods", 200),
        )
    if method == "enum":
        return optimize_enumeration(
            net,
            seed=seed,
            points=params.get("points", 10),
            tie_echelons=params.get("tie_echelons", True),
            trials=params.get("trials", 3),
            periods=params.get("periods", 200),
            coordinate_cap=params.get("coordinate_cap", 6),
        )
    if method == "random":
        raw = params.get("params")
        parsed = None
        if raw:
            parsed = {}
            for key, pair in raw.items():
                i, j = key.split("->")
                parsed[(int(i), int(j))] = (float(pair[0]), float(pair[1]))
        return optimize_random_search(
            net,
            seed=seed,
            candidates=params.get("candidates", 100),
            episodes_per=params.get("episodes_per", 2000),
            params=parsed,
            jobs=params.get("jobs", 1),
        )
    raise _bad_request("validation", ValueError(f"unknown method {method!r}"))


def _run_to_response(net: Network, run: OptimizerRun) -> schemas.OptimizeResponse:
    edges = net.decision_edges()
    return schemas.OptimizeResponse(
        method=run.method,
        best_ouls={_edge_key(e): float(v) for e, v in zip(edges, run.best_ouls)},
        best_score=run.best_score,
        best_episode_cost=run.best_episode_cost,
        best_cost_per_period=run.best_cost_per_period,
        training_interactions=run.training_interactions,
        environment_interactions=run.environment_interactions,
        seed=run.seed,
        wall_seconds=run.wall_seconds,
        decision_edges=[list(e) for e in edges],
        trace=[
            schemas.CheckpointModel(
                episodes=c.episodes, test_cost=float(c.test_cost), ouls=[float(v) for v in c.ouls]
            )
            for c in run.trace
        ],
        extras={k: _jsonable(v) for k, v in run.extras.items()},
    )


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@app.post("/optimize", response_model=schemas.OptimizeResponse)
def optimize(req: schemas.OptimizeRequest):
    net = _parse(req.instance)
    try:
        run = _run_optimizer(net, req.method, req.seed, req.params)
    except (NonFiniteCost, GridTooLarge, OptimizerError) as exc:
        raise _bad_request("optimizer", exc, status=422) from exc
    except DimensionMismatch as exc:
        raise _bad_request("validation", exc) from exc
    return _run_to_response(net, run)


@app.post("/bench", response_model=schemas.BenchResponse)
def bench(req: schemas.BenchRequest):
    rows: list[schemas.BenchRow] = []
    for fixture_id in req.fixtures:
        try:
            fx = fixture(fixture_id)
        except UnknownFixture:
            rows.append(schemas.BenchRow(fixture=fixture_id, method="-", error="unknown fixture"))
            continue
        for method in req.methods:
            rows.append(_bench_one(fx, method, req))
    return schemas.BenchResponse(rows=rows)


def _bench_one(fx, method: str, req: schemas.BenchRequest) -> schemas.BenchRow:
    params: dict[str, Any] = {}
    if method in ("adam", "adam-restart", "mlp"):
        params = {"episodes": req.adam_episodes}
    elif method == "dfo":
        params = {"budget": req.dfo_evaluations, "episodes_per_eval": req.random_episodes_per}
    elif method == "random":
        params = {"candidates": req.random_candidates, "episodes_per": req.random_episodes_per}
        if fx.random_search:
            params["params"] = {
                _edge_key(e): [b, s] for e, (b, s) in fx.random_search.items()
            }
    try:
        run = _run_optimizer(fx.network, method, req.seed, params)
        evaluation = evaluate_policy(
            fx.network, run.best_ouls, trials=req.eval_trials, horizon=req.eval_horizon, seed=req.seed
        )
        cost = evaluation.mean_cost_per_period
        reference_cost = None
        reference_scale = None
        for candidate in (method if method != "enum" else "enumeration", "analytical", "enumeration", "dnn"):
            try:
                ref = fx.reference(candidate)
            except KeyError:
                continue
            reference_cost, reference_scale = ref.cost, ref.scale
            break
        gap = None
        if reference_cost:
            gap = (cost - reference_cost) / abs(reference_cost)
        return schemas.BenchRow(
            fixture=fx.id,
            method=method,
            cost=cost,
            reference_cost=reference_cost,
            reference_scale=reference_scale,
            relative_gap=gap,
            environment_interactions=run.environment_interactions,
        )
    except Exception as exc:  # bench keeps going past individual failures
        return schemas.BenchRow(fixture=fx.id, method=method, error=f"{type(exc).__name__}: {exc}")
