"""Supply-chain network graph: validation, numbering, and decision edges.

Node 0 is the implicit infinite-capacity source; any edge whose tail is 0
creates it.  External customers are implicit: a node with a demand
distribution serves one external customer.  Real nodes are numbered in
ascending order of total shipment lead time from the source (longest path),
with ties broken by ascending id, which fixes a deterministic layout for
the order-up-to vector used everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .costs import CostExpr, ZERO, is_zero
from .demand import DemandDist

SOURCE = 0


class NetworkValidationError(ValueError):
    """Base class for instance validation failures."""


class DuplicateNodeId(NetworkValidationError):
    pass


class CycleDetected(NetworkValidationError):
    pass


class Disconnected(NetworkValidationError):
    pass


class MixedInternalExternalSupplier(NetworkValidationError):
    pass


class AssemblyKindOnSinglePredecessor(NetworkValidationError):
    pass


class NodeKind(Enum):
    PLAIN = "plain"
    ASSEMBLY_AND = "assembly_and"
    ASSEMBLY_OR = "assembly_or"


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind = NodeKind.PLAIN
    demand: Optional[DemandDist] = None
    salvage: Optional[CostExpr] = None


@dataclass(frozen=True)
class Edge:
    """Directed supply edge from node ``src`` to node ``dst``.

    ``holding`` is the per-period holding cost function for dst's inventory
    of src material.  ``stockout`` is the per-period stockout cost function
    charged at dst for backorders dst owes its own customers (the edge whose
    head is the customer side carries that customer's stockout function).
    ``init_level`` optionally primes dst's finished goods at episode start.
    """

    src: int
    dst: int
    lead_time: int
    holding: CostExpr = ZERO
    stockout: CostExpr = ZERO
    init_level: Optional[float] = None

    def __post_init__(self):
        if self.src == self.dst:
            raise CycleDetected(f"edge ({self.src},{self.dst}) is a self-loop")
        if self.lead_time < 0:
            raise NetworkValidationError(
                f"edge ({self.src},{self.dst}): lead_time must be >= 0"
            )


@dataclass(frozen=True)
class Network:
    """Validated network; immutable and safely shareable across simulations."""

    nodes: dict[int, Node]
    edges: dict[tuple[int, int], Edge]
    ordering: tuple[int, ...]
    predecessors: dict[int, tuple[int, ...]] = field(repr=False)
    successors: dict[int, tuple[int, ...]] = field(repr=False)
    horizon: int = 10

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    def edge(self, src: int, dst: int) -> Edge:
        return self.edges[(src, dst)]

    def order_index(self, node_id: int) -> int:
        if node_id == SOURCE:
            return -1
        return self.ordering.index(node_id)

    def is_leaf(self, node_id: int) -> bool:
        return self.nodes[node_id].demand is not None

    def decision_edges(self) -> list[tuple[int, int]]:
        return decision_edges(self)

    def holding_fn(self, node_id: int) -> CostExpr:
        """Holding cost function charged on node_id's inventory."""
        first = self._first_in_edge(node_id)
        return self.edges[first].holding

    def stockout_fn(self, node_id: int) -> CostExpr:
        """Stockout cost function for backorders node_id owes its customers."""
        first = self._first_in_edge(node_id)
        return self.edges[first].stockout

    def _first_in_edge(self, node_id: int) -> tuple[int, int]:
        preds = self.predecessors[node_id]
        return (preds[0], node_id)

    def total_lead_time(self, node_id: int) -> int:
        return total_lead_time(self, node_id)

    def echelon(self, node_id: int) -> int:
        """1-based echelon index counted from the source side."""
        levels = sorted({total_lead_time(self, j) for j in self.ordering})
        return levels.index(total_lead_time(self, node_id)) + 1

    def throughput_mean(self, node_id: int) -> float:
        """Mean per-period demand the node sees, internal orders included.

        External demand propagates upstream along every edge: an assembly-and
        customer orders its full requirement from each predecessor, so each
        incoming stream of a node carries that node's whole throughput.
        """
        node = self.nodes[node_id]
        out = node.demand.mean() if node.demand is not None else 0.0
        for k in self.successors[node_id]:
            out += self.throughput_mean(k)
        return out

    def lead_time_demand_mean(self, node_id: int) -> float:
        """Throughput times the (maximum) incoming lead time."""
        lead = max(self.edges[(i, node_id)].lead_time for i in self.predecessors[node_id])
        return self.throughput_mean(node_id) * lead

    def priming_levels(self) -> dict[int, float]:
        """Initial finished-goods levels covering mean lead-time demand."""
        return {j: self.lead_time_demand_mean(j) for j in self.ordering}

    def explicit_init_levels(self) -> Optional[dict[int, float]]:
        """Per-node initial levels from edge init fields, if all are present.

        A node's initial level is the common value on its incoming edges;
        when a later restart writes unequal per-edge values, their mean is
        used (the initial level is a per-node scalar).
        """
        levels: dict[int, float] = {}
        for j in self.ordering:
            vals = [
                self.edges[(i, j)].init_level
                for i in self.predecessors[j]
                if self.edges[(i, j)].init_level is not None
            ]
            if len(vals) != len(self.predecessors[j]):
                return None
            levels[j] = sum(vals) / len(vals)
        return levels

    def init_levels(self) -> dict[int, float]:
        explicit = self.explicit_init_levels()
        return explicit if explicit is not None else self.priming_levels()

    def with_init_levels(self, ouls_by_edge: dict[tuple[int, int], float]) -> "Network":
        """Copy of the network with per-edge init levels replaced."""
        new_edges = {}
        for key, e in self.edges.items():
            init = ouls_by_edge.get(key, e.init_level)
            new_edges[key] = Edge(e.src, e.dst, e.lead_time, e.holding, e.stockout, init)
        return Network(
            self.nodes, new_edges, self.ordering, self.predecessors, self.successors, self.horizon
        )


def validate(
    nodes: list[Node],
    edges: list[Edge],
    horizon: int = 10,
) -> Network:
    """Validate raw node/edge lists and compute the canonical numbering.

    Raises a :class:`NetworkValidationError` subclass naming the defect:
    duplicate ids, cycles, disconnected parts, mixed internal/external
    suppliers or customers, assembly kinds on fewer than two predecessors,
    or internal zero lead times (which the two-phase event order cannot
    deliver in the period they are ordered).
    """
    node_map: dict[int, Node] = {}
    for n in nodes:
        if n.id in node_map:
            raise DuplicateNodeId(f"node id {n.id} declared twice")
        if n.id < 0:
            raise NetworkValidationError(f"node id {n.id} must be >= 0")
        node_map[n.id] = n
    if SOURCE in node_map:
        src_node = node_map[SOURCE]
        if src_node.demand is not None or src_node.salvage is not None:
            raise NetworkValidationError("node 0 is the infinite source and carries no data")

    edge_map: dict[tuple[int, int], Edge] = {}
    for e in edges:
        key = (e.src, e.dst)
        if key in edge_map:
            raise NetworkValidationError(f"edge ({e.src},{e.dst}) declared twice")
        if e.dst == SOURCE:
            raise NetworkValidationError(f"edge ({e.src},{e.dst}) points into the source")
        for end in key:
            if end != SOURCE and end not in node_map:
                raise NetworkValidationError(f"edge ({e.src},{e.dst}) references unknown node {end}")
        if e.lead_time == 0 and e.src != SOURCE:
            raise NetworkValidationError(
                f"edge ({e.src},{e.dst}): zero lead time is only allowed out of the source"
            )
        edge_map[key] = e

    real_ids = sorted(i for i in node_map if i != SOURCE)
    if not real_ids:
        raise NetworkValidationError("network has no real nodes")

    preds: dict[int, list[int]] = {j: [] for j in real_ids}
    succs: dict[int, list[int]] = {j: [] for j in real_ids}
    for (i, j) in edge_map:
        preds[j].append(i)
        if i != SOURCE:
            succs[i].append(j)

    for j in real_ids:
        if not preds[j]:
            raise Disconnected(f"node {j} has no supplier")
    _check_acyclic(real_ids, succs)
    _check_connected(real_ids, preds, succs)

    for j in real_ids:
        internal = [i for i in preds[j] if i != SOURCE]
        if internal and SOURCE in preds[j]:
            raise MixedInternalExternalSupplier(
                f"node {j} has both an internal and an external supplier; "
                f"model the external one with an explicit dummy node"
            )
        node = node_map[j]
        if node.demand is not None and succs[j]:
            raise MixedInternalExternalSupplier(
                f"node {j} has both an external and an internal customer"
            )
        if node.demand is None and not succs[j]:
            raise Disconnected(f"node {j} has neither customers nor external demand")
        if len(preds[j]) >= 2 and node.kind == NodeKind.PLAIN:
            raise AssemblyKindOnSinglePredecessor(
                f"node {j} has {len(preds[j])} predecessors and must be assembly_and or assembly_or"
            )
        if len(preds[j]) < 2 and node.kind != NodeKind.PLAIN:
            raise AssemblyKindOnSinglePredecessor(
                f"node {j} is {node.kind.value} but has fewer than 2 predecessors"
            )
        in_stockouts = {edge_map[(i, j)].stockout for i in preds[j]}
        if len(in_stockouts) > 1:
            raise NetworkValidationError(
                f"node {j}: incoming edges carry conflicting stockout functions"
            )

    lead = _total_lead_times(real_ids, preds, edge_map)
    ordering = tuple(sorted(real_ids, key=lambda j: (lead[j], j)))

    return Network(
        nodes=dict(node_map) | ({SOURCE: Node(SOURCE)} if SOURCE not in node_map else {}),
        edges=dict(edge_map),
        ordering=ordering,
        predecessors={j: tuple(sorted(preds[j])) for j in real_ids},
        successors={j: tuple(sorted(succs[j])) for j in real_ids},
        horizon=horizon,
    )


def _check_acyclic(real_ids, succs) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {j: WHITE for j in real_ids}
    for start in real_ids:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(succs[start]))]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    raise CycleDetected(f"directed cycle through node {nxt}")
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(succs[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()


def _check_connected(real_ids, preds, succs) -> None:
    seen = set()
    stack = [real_ids[0]]
    while stack:
        j = stack.pop()
        if j in seen:
            continue
        seen.add(j)
        for nxt in succs[j]:
            if nxt not in seen:
                stack.append(nxt)
        for i in preds[j]:
            if i != SOURCE and i not in seen:
                stack.append(i)
    missing = set(real_ids) - seen
    if missing:
        raise Disconnected(f"nodes {sorted(missing)} are not connected to the rest")


def _total_lead_times(real_ids, preds, edge_map) -> dict[int, int]:
    # Longest lead-time path from the source, via memoized recursion.
    # Acyclicity was checked above, so the recursion terminates.
    memo: dict[int, int] = {}

    def lead(j: int) -> int:
        if j == SOURCE:
            return 0
        if j not in memo:
            memo[j] = max(lead(i) + edge_map[(i, j)].lead_time for i in preds[j])
        return memo[j]

    return {j: lead(j) for j in real_ids}


def total_lead_time(net: Network, node_id: int) -> int:
    """Longest lead-time path from the source to the node."""
    if node_id == SOURCE:
        return 0
    return max(
        total_lead_time(net, i) + net.edges[(i, node_id)].lead_time
        for i in net.predecessors[node_id]
    )


def decision_edges(net: Network) -> list[tuple[int, int]]:
    """All edges requiring an order-up-to level, in canonical order.

    Sorted by (ordering index of the tail, ordering index of the head),
    which reproduces the parameter-table row order of the built-in
    instances and defines the layout of every OUL vector.
    """
    return sorted(net.edges, key=lambda e: (net.order_index(e[0]), net.order_index(e[1])))


def echelon_groups(net: Network) -> list[list[tuple[int, int]]]:
    """Decision edges grouped by the echelon of their downstream node."""
    groups: dict[int, list[tuple[int, int]]] = {}
    for e in decision_edges(net):
        groups.setdefault(net.echelon(e[1]), []).append(e)
    return [groups[k] for k in sorted(groups)]


def has_stockout_anywhere(net: Network) -> bool:
    return any(not is_zero(e.stockout) for e in net.edges.values())
