"""Pydantic request/response models for the HTTP service.

Instance documents travel as plain JSON mappings in the same schema the
instance files use; deep validation happens in the core parser, which
reports precise key paths.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class InstancePayload(BaseModel):
    instance: dict = Field(description="Instance document (same schema as instance files)")


class ValidateResponse(BaseModel):
    ordering: list[int]
    decision_edges: list[list[int]]
    priming_levels: dict[str, float]
    init_levels: dict[str, float]
    horizon: int
    echelons: dict[str, int]


class SimulateRequest(InstancePayload):
    ouls: list[float]
    trials: int = 10
    horizon: int = 10_000
    seed: int = 0
    include_trace: bool = False
    trace_horizon: Optional[int] = None
    allow_negative_orders: bool = False


class SimulateResponse(BaseModel):
    mean_cost_per_period: float
    std_across_trials: float
    per_trial: list[float]
    warmup: int
    mean_episode_cost: float
    episode_horizon: int
    trace: Optional[list[dict]] = None


class OptimizeRequest(InstancePayload):
    method: str = "adam"
    seed: int = 0
    params: dict[str, Any] = Field(default_factory=dict)


class CheckpointModel(BaseModel):
    episodes: int
    test_cost: float
    ouls: list[float]


class OptimizeResponse(BaseModel):
    method: str
    best_ouls: dict[str, float]
    best_score: float
    best_episode_cost: float
    best_cost_per_period: float
    training_interactions: int
    environment_interactions: int
    seed: int
    wall_seconds: float
    decision_edges: list[list[int]]
    trace: list[CheckpointModel]
    extras: dict[str, Any] = Field(default_factory=dict)


class BenchRequest(BaseModel):
    fixtures: list[str]
    methods: list[str] = Field(default_factory=lambda: ["adam"])
    seed: int = 0
    adam_episodes: int = 20_000
    dfo_evaluations: int = 25
    random_candidates: int = 50
    random_episodes_per: int = 500
    eval_trials: int = 10
    eval_horizon: int = 10_000


class BenchRow(BaseModel):
    fixture: str
    method: str
    cost: Optional[float] = None
    reference_cost: Optional[float] = None
    reference_scale: Optional[str] = None
    relative_gap: Optional[float] = None
    environment_interactions: Optional[int] = None
    error: Optional[str] = None


class BenchResponse(BaseModel):
    rows: list[BenchRow]


class FixtureListResponse(BaseModel):
    fixtures: list[str]
    sets: dict[str, list[str]]


class ErrorBody(BaseModel):
    kind: str
    message: str
