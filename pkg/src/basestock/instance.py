"""Instance document parsing and export.

An instance is a structured-text document (JSON or YAML, JSON being valid
YAML) with the shape::

    format_version: 1
    horizon: 10
    nodes:
      - {id: 1, kind: plain, demand: {dist: normal, mean: 5, std: 1},
         salvage: {kind: linear, coef: 1.25}}
    edges:
      - {from: 0, to: 1, lead_time: 2, holding: {kind: linear, coef: 2},
         stockout: {kind: linear, coef: 4}, init_level: 40}

Salvage entries are rewards: positive values reduce the episode cost.
"""

from __future__ import annotations

import json
from typing import Any

import yaml

from .costs import CostExprError, ZERO, cost_expr_spec, parse_cost_expr
from .demand import parse_demand
from .network import Edge, Network, NetworkValidationError, Node, NodeKind, validate

FORMAT_VERSION = 1


class InstanceParseError(ValueError):
    """Raised when an instance document is structurally invalid."""


def _expect_list(doc: dict, key: str) -> list:
    value = doc.get(key)
    if not isinstance(value, list) or not value:
        raise InstanceParseError(f"{key}: expected a non-empty list")
    return value


def parse_instance(doc: Any) -> Network:
    """Parse and validate an instance document into a Network."""
    if not isinstance(doc, dict):
        raise InstanceParseError("instance document must be a mapping")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InstanceParseError(f"unsupported format_version {version!r}")
    horizon = doc.get("horizon", 10)
    if not isinstance(horizon, int) or horizon < 1:
        raise InstanceParseError("horizon: expected an integer >= 1")

    nodes: list[Node] = []
    for idx, raw in enumerate(_expect_list(doc, "nodes")):
        path = f"nodes[{idx}]"
        if not isinstance(raw, dict) or "id" not in raw:
            raise InstanceParseError(f"{path}: expected a mapping with an 'id'")
        try:
            kind = NodeKind(raw.get("kind", "plain"))
        except ValueError:
            raise InstanceParseError(f"{path}.kind: unknown node kind {raw.get('kind')!r}") from None
        demand = None
        if raw.get("demand") is not None:
            try:
                demand = parse_demand(raw["demand"], f"{path}.demand")
            except ValueError as exc:
                raise InstanceParseError(str(exc)) from None
        salvage = None
        if raw.get("salvage") is not None:
            try:
                salvage = parse_cost_expr(raw["salvage"], f"{path}.salvage")
            except CostExprError as exc:
                raise InstanceParseError(str(exc)) from None
        nodes.append(Node(id=int(raw["id"]), kind=kind, demand=demand, salvage=salvage))

    edges: list[Edge] = []
    for idx, raw in enumerate(_expect_list(doc, "edges")):
        path = f"edges[{idx}]"
        if not isinstance(raw, dict):
            raise InstanceParseError(f"{path}: expected a mapping")
        for key in ("from", "to", "lead_time"):
            if key not in raw:
                raise InstanceParseError(f"{path}: missing field {key!r}")
        try:
            holding = (
                parse_cost_expr(raw["holding"], f"{path}.holding")
                if raw.get("holding") is not None
                else ZERO
            )
            stockout = (
                parse_cost_expr(raw["stockout"], f"{path}.stockout")
                if raw.get("stockout") is not None
                else ZERO
            )
        except CostExprError as exc:
            raise InstanceParseError(str(exc)) from None
        init = raw.get("init_level")
        edges.append(
            Edge(
                src=int(raw["from"]),
                dst=int(raw["to"]),
                lead_time=int(raw["lead_time"]),
                holding=holding,
                stockout=stockout,
                init_level=float(init) if init is not None else None,
            )
        )

    return validate(nodes, edges, horizon=horizon)


def load_instance(path: str) -> Network:
    """Load an instance from a JSON or YAML file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise InstanceParseError(f"{path}: {exc}") from None
    return parse_instance(doc)


def instance_doc(net: Network) -> dict:
    """Serialize a network back to its instance-document form."""
    nodes = []
    for j in net.ordering:
        node = net.nodes[j]
        raw: dict[str, Any] = {"id": j, "kind": node.kind.value}
        if node.demand is not None:
            raw["demand"] = node.demand.spec()
        if node.salvage is not None:
            raw["salvage"] = cost_expr_spec(node.salvage)
        nodes.append(raw)
    edges = []
    for (i, j) in net.decision_edges():
        e = net.edges[(i, j)]
        raw = {
            "from": i,
            "to": j,
            "lead_time": e.lead_time,
            "holding": cost_expr_spec(e.holding),
            "stockout": cost_expr_spec(e.stockout),
        }
        if e.init_level is not None:
            raw["init_level"] = e.init_level
        edges.append(raw)
    return {
        "format_version": FORMAT_VERSION,
        "horizon": net.horizon,
        "nodes": nodes,
        "edges": edges,
    }


def dump_instance(net: Network, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_doc(net), fh, indent=2)
        fh.write("\n")


__all__ = [
    "FORMAT_VERSION",
    "InstanceParseError",
    "NetworkValidationError",
    "parse_instance",
    "load_instance",
    "instance_doc",
    "dump_instance",
]
