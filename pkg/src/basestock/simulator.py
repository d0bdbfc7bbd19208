"""Periodic-review simulation of a network under order-up-to policies.

Each period runs in two phases.  Phase one walks nodes downstream to
upstream: observe demand, place orders against each predecessor, receive
due shipments.  Phase two walks upstream to downstream: process raw
material into finished goods, ship (allocating shortages proportionally to
customer claims), and assess holding plus stockout costs.  The engine is
generic over the scalar type, so the same code produces plain Monte-Carlo
costs and forward-mode gradients with respect to every order-up-to level.

State variables are batched: every quantity is a ``(B,)`` array (or a dual
carrying a ``(B, n)`` tangent), where ``B`` indexes independent episodes
simulated in lock-step.  Elementwise batching makes row ``b`` of a batch
bitwise identical to the same episode simulated alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import scalars
from .costs import eval_cost
from .demand import substream
from .dual import Dual, seed_ouls
from .network import SOURCE, Network, NodeKind


class DimensionMismatch(ValueError):
    pass


@dataclass
class Trace:
    """Per-period history for invariant checks and CSV emission."""

    orders: dict = field(default_factory=dict)     # edge -> [(B,)]
    ships: dict = field(default_factory=dict)      # edge -> [(B,)]
    arrivals: dict = field(default_factory=dict)   # edge -> [(B,)]
    raw: dict = field(default_factory=dict)        # edge -> [(B,)]
    in_transit: dict = field(default_factory=dict)  # edge -> [(B,)]
    backorders: dict = field(default_factory=dict)  # edge or ("ext", j) -> [(B,)]
    il: dict = field(default_factory=dict)         # node -> [(B,)]
    processed: dict = field(default_factory=dict)  # node -> [(B,)]
    demand: dict = field(default_factory=dict)     # node -> [(B,)] total demand seen
    node_cost: dict = field(default_factory=dict)  # node -> [(B,)]
    period_cost: list = field(default_factory=list)

    def _push(self, store, key, value):
        store.setdefault(key, []).append(np.array(scalars.value_of(value), copy=True))


@dataclass
class SimState:
    """All inventory state for one batch of episodes at one point in time."""

    il: dict
    raw: dict
    pipes: dict
    bo: dict
    bo_ext: dict
    t: int = 0


@dataclass
class EpisodeResult:
    total_cost: object                 # scalar-like (B,): sum of period costs plus salvage
    period_costs: list                 # [(B,)] scalar-like per period
    salvage_cost: object               # scalar-like (B,), zero when not applied
    state: SimState
    trace: Optional[Trace] = None


def init_state(net: Network, levels: dict[int, float], batch: int) -> SimState:
    """Fresh state: finished goods at the given levels, everything else zero."""
    il = {j: np.full(batch, float(levels.get(j, 0.0))) for j in net.ordering}
    raw = {e: np.zeros(batch) for e in net.edges}
    pipes = {
        e: [np.zeros(batch) for _ in range(net.edges[e].lead_time)] for e in net.edges
    }
    bo = {e: np.zeros(batch) for e in net.edges}
    bo_ext = {j: np.zeros(batch) for j in net.ordering if net.is_leaf(j)}
    return SimState(il=il, raw=raw, pipes=pipes, bo=bo, bo_ext=bo_ext)


def resolve_init_levels(net: Network, init_mode) -> dict[int, float]:
    """Map an init-mode argument to per-node starting levels.

    ``"priming"`` covers mean lead-time demand at every node, ``"explicit"``
    requires init levels in the instance, ``"auto"`` prefers explicit ones,
    and a dict gives levels directly.
    """
    if isinstance(init_mode, dict):
        return init_mode
    if init_mode == "priming":
        return net.priming_levels()
    if init_mode == "explicit":
        levels = net.explicit_init_levels()
        if levels is None:
            raise ValueError("instance has no explicit init levels")
        return levels
    if init_mode == "auto":
        return net.init_levels()
    raise ValueError(f"unknown init mode {init_mode!r}")


def draw_episode_demands(net: Network, rng: np.random.Generator, horizon: int) -> dict[int, np.ndarray]:
    """Demand realizations for one episode: leaf node -> (horizon,) array.

    Leaves are visited in canonical node order so stream consumption is
    deterministic.
    """
    out = {}
    for j in net.ordering:
        node = net.nodes[j]
        if node.demand is not None:
            out[j] = node.demand.sample(rng, horizon)
    return out


def batch_demands(
    net: Network, seed: int, trial: int, episodes: range, horizon: int
) -> dict[int, np.ndarray]:
    """Stack per-episode demand draws into (B, horizon) arrays.

    Each episode keeps its own (seed, trial, episode) substream, so the
    same episode index yields the same demands regardless of batching.
    """
    per_episode = [
        draw_episode_demands(net, substream(seed, trial, ep), horizon) for ep in episodes
    ]
    leaves = [j for j in net.ordering if net.is_leaf(j)]
    return {j: np.stack([d[j] for d in per_episode]) for j in leaves}


def _as_oul_map(net: Network, ouls) -> dict[tuple[int, int], object]:
    edges = net.decision_edges()
    if isinstance(ouls, dict):
        if set(ouls) != set(edges):
            raise DimensionMismatch("order-up-to map does not cover the decision edges")
        return dict(ouls)
    if len(ouls) != len(edges):
        raise DimensionMismatch(
            f"expected {len(edges)} order-up-to levels, got {len(ouls)}"
        )
    return dict(zip(edges, ouls))


def simulate(
    net: Network,
    ouls,
    demands: dict[int, np.ndarray],
    init_levels: dict[int, float],
    horizon: Optional[int] = None,
    include_salvage: bool = True,
    collect_trace: bool = False,
    allow_negative_orders: bool = False,
) -> EpisodeResult:
    """Run a batch of episodes in lock-step and accumulate costs.

    ``ouls`` is a vector (or edge map) of scalar-likes: floats, ``(B,)``
    arrays, or duals.  ``demands`` maps each leaf node to a ``(B, horizon)``
    array of realized demands, which are constants with respect to the
    decision variables.
    """
    oul = _as_oul_map(net, ouls)
    leaves = [j for j in net.ordering if net.is_leaf(j)]
    if set(demands) != set(leaves):
        raise DimensionMismatch("demand arrays do not cover the customer-facing nodes")
    batch = next(iter(demands.values())).shape[0] if leaves else 1
    if horizon is None:
        horizon = min(d.shape[1] for d in demands.values())

    state = init_state(net, init_levels, batch)
    trace = Trace() if collect_trace else None
    period_costs = []

    for t in range(horizon):
        c_t = _run_period(net, oul, demands, state, t, trace, allow_negative_orders)
        period_costs.append(c_t)
        state.t = t + 1

    salvage = np.zeros(batch)
    if include_salvage:
        for j in net.ordering:
            reward = net.nodes[j].salvage
            if reward is not None:
                salvage = salvage - eval_cost(reward, state.il[j])

    total = scalars.total(period_costs) + salvage
    return EpisodeResult(
        total_cost=total,
        period_costs=period_costs,
        salvage_cost=salvage,
        state=state,
        trace=trace,
    )


def _run_period(net, oul, demands, state, t, trace, allow_negative_orders):
    orders: dict[tuple[int, int], object] = {}
    total_demand: dict[int, object] = {}

    # Phase one, downstream to upstream: observe demand, place orders
    # against every predecessor, then receive shipments that are due.
    for j in reversed(net.ordering):
        parts = [orders[(j, k)] for k in net.successors[j]]
        if net.is_leaf(j):
            parts.append(demands[j][:, t])
        d_total = scalars.total(parts)
        total_demand[j] = d_total

        for i in net.predecessors[j]:
            e = (i, j)
            position = (
                state.raw[e]
                + state.il[j]
                + scalars.total(state.pipes[e])
                + state.bo[e]
                - d_total
            )
            quantity = oul[e] - position
            if not allow_negative_orders:
                quantity = scalars.positive_part(quantity)
            orders[e] = quantity

        for i in net.predecessors[j]:
            e = (i, j)
            if net.edges[e].lead_time == 0:
                # Only source edges may have zero lead time; the source
                # fills the order into this same period's receive step.
                arrival = orders[e]
            else:
                arrival = state.pipes[e].pop(0)
            state.raw[e] = state.raw[e] + arrival
            if trace is not None:
                trace._push(trace.arrivals, e, arrival)
                trace._push(trace.orders, e, orders[e])

    # The source ships every order in full; entries join the pipeline and
    # arrive after the edge lead time (zero-lead orders already arrived).
    for (i, j), e in net.edges.items():
        if i == SOURCE and e.lead_time > 0:
            state.pipes[(i, j)].append(orders[(i, j)])
            if trace is not None:
                trace._push(trace.ships, (i, j), orders[(i, j)])
        elif i == SOURCE and trace is not None:
            # Zero-lead source orders shipped (and arrived) in phase one.
            trace._push(trace.ships, (i, j), orders[(i, j)])

    # Phase two, upstream to downstream: process, ship, assess costs.
    c_t = 0.0
    for j in net.ordering:
        in_edges = [(i, j) for i in net.predecessors[j]]
        raws = [state.raw[e] for e in in_edges]
        if net.nodes[j].kind == NodeKind.ASSEMBLY_AND:
            processed = raws[0]
            for r in raws[1:]:
                processed = scalars.minimum(processed, r)
            for e in in_edges:
                state.raw[e] = state.raw[e] - processed
        else:
            processed = scalars.total(raws)
            for e in in_edges:
                state.raw[e] = scalars.constant_like(state.raw[e], 0.0)
        state.il[j] = state.il[j] + processed

        shipments = _allocate_and_ship(net, state, orders, total_demand, j)
        if trace is not None:
            trace._push(trace.processed, j, processed)
            trace._push(trace.demand, j, total_demand[j])
            for key, s in shipments.items():
                if key[0] != "ext":
                    trace._push(trace.ships, (j, key[1]), s)

        node_cost = _node_period_cost(net, state, j)
        c_t = c_t + node_cost
        if trace is not None:
            trace._push(trace.node_cost, j, node_cost)
            trace._push(trace.il, j, state.il[j])
            for e in in_edges:
                trace._push(trace.raw, e, state.raw[e])
            for k in net.successors[j]:
                trace._push(trace.in_transit, (j, k), scalars.total(state.pipes[(j, k)]))
                trace._push(trace.backorders, (j, k), state.bo[(j, k)])
            if net.is_leaf(j):
                trace._push(trace.backorders, ("ext", j), state.bo_ext[j])

    if trace is not None:
        trace.period_cost.append(np.array(scalars.value_of(c_t), copy=True))
    return c_t


def _allocate_and_ship(net, state, orders, total_demand, j):
    """Ship against claims; shortages allocate on-hand proportionally.

    Claims are current demands plus prior backorders.  When the post-
    processing inventory level covers all claims, they ship in full and
    backorders clear.  Otherwise the on-hand part ships, split across
    customers in proportion to their claims, which keeps the sum of
    backorders equal to the negative part of the inventory level.
    """
    customers = [(("edge", k), orders[(j, k)], state.bo[(j, k)]) for k in net.successors[j]]
    if net.is_leaf(j):
        customers.append((("ext", j), None, state.bo_ext[j]))

    d_total = total_demand[j]
    level = state.il[j]
    claims = []
    bo_total = 0.0
    for key, order_qty, bo_prev in customers:
        demand_k = order_qty if order_qty is not None else d_total
        claims.append(demand_k + bo_prev)
        bo_total = bo_total + bo_prev
    claim_total = scalars.total(claims)

    # The inventory level is net of outstanding backorders, so physical
    # on-hand after processing is level + prior backorders.  Shipping
    # min(on-hand, claims) split in proportion to claims keeps the sum of
    # backorders equal to the negative part of the ending level.
    on_hand = scalars.positive_part(level + bo_total)
    shippable = scalars.minimum(on_hand, claim_total)
    claim_value = scalars.value_of(claim_total)
    positive_claims = claim_value > 0.0
    safe_total = scalars.where(positive_claims, claim_total, scalars.constant_like(claim_total, 1.0))
    fraction = shippable / safe_total
    fraction = scalars.where(positive_claims, fraction, scalars.constant_like(fraction, 0.0))

    shipments = {}
    for (key, _, _), claim in zip(customers, claims):
        shipped = claim * fraction
        remaining = claim - shipped
        shipments[key] = shipped
        if key[0] == "edge":
            k = key[1]
            state.bo[(j, k)] = remaining
            state.pipes[(j, k)].append(shipped)
        else:
            state.bo_ext[j] = remaining

    state.il[j] = level - d_total
    return shipments


def _node_period_cost(net, state, j):
    """End-of-period cost at node j.

    Holding is charged once per node on raw material plus on-hand finished
    goods plus inventory in transit to internal customers, at the holding
    function carried by the node's incoming edges.  Stockout is charged per
    customer on the backorders owed to it.
    """
    holding_arg = scalars.positive_part(state.il[j])
    for i in net.predecessors[j]:
        holding_arg = holding_arg + state.raw[(i, j)]
    for k in net.successors[j]:
        holding_arg = holding_arg + scalars.total(state.pipes[(j, k)])
    cost = eval_cost(net.holding_fn(j), holding_arg)

    stockout = net.stockout_fn(j)
    for k in net.successors[j]:
        cost = cost + eval_cost(stockout, state.bo[(j, k)])
    if net.is_leaf(j):
        cost = cost + eval_cost(stockout, state.bo_ext[j])
    return cost


def run_episode(
    net: Network,
    ouls,
    horizon: Optional[int] = None,
    rng=None,
    init_mode="auto",
    include_salvage: bool = True,
    collect_trace: bool = False,
    allow_negative_orders: bool = False,
) -> EpisodeResult:
    """Simulate one episode and return its cost breakdown.

    ``rng`` may be a numpy Generator, an integer seed, or None (seed 0).
    """
    horizon = horizon or net.horizon
    if rng is None or isinstance(rng, int):
        rng = substream(rng or 0, 0, 0)
    demands = {j: d[None, :] for j, d in draw_episode_demands(net, rng, horizon).items()}
    levels = resolve_init_levels(net, init_mode)
    return simulate(
        net,
        ouls,
        demands,
        levels,
        horizon=horizon,
        include_salvage=include_salvage,
        collect_trace=collect_trace,
        allow_negative_orders=allow_negative_orders,
    )


@dataclass
class PolicyEvaluation:
    mean_cost_per_period: float
    std_across_trials: float
    per_trial: np.ndarray
    trials: int
    horizon: int
    warmup: int
    episodes_simulated: int


def evaluate_policy(
    net: Network,
    ouls,
    trials: int = 10,
    horizon: int = 10_000,
    seed: int = 0,
    init_mode="auto",
    warmup: Optional[int] = None,
    allow_negative_orders: bool = False,
) -> PolicyEvaluation:
    """Long-run mean cost per period across independent trials.

    Trial ``t`` draws demands on substream (seed, t, 0).  A warm-up of
    max(network total lead time, 100) periods (capped at half the horizon)
    is discarded before averaging, and end-of-horizon salvage is excluded:
    the figure approximates steady state.
    """
    if warmup is None:
        warmup = max(max(net.total_lead_time(j) for j in net.ordering), 100)
    warmup = min(warmup, horizon // 2)

    per_episode = [
        draw_episode_demands(net, substream(seed, trial, 0), horizon)
        for trial in range(trials)
    ]
    leaves = [j for j in net.ordering if net.is_leaf(j)]
    demands = {j: np.stack([d[j] for d in per_episode]) for j in leaves}
    levels = resolve_init_levels(net, init_mode)

    result = simulate(
        net,
        ouls,
        demands,
        levels,
        horizon=horizon,
        include_salvage=False,
        allow_negative_orders=allow_negative_orders,
    )
    costs = np.stack([scalars.value_of(c) for c in result.period_costs])  # (T, B)
    per_trial = costs[warmup:].mean(axis=0)
    return PolicyEvaluation(
        mean_cost_per_period=float(per_trial.mean()),
        std_across_trials=float(per_trial.std(ddof=1)) if trials > 1 else 0.0,
        per_trial=per_trial,
        trials=trials,
        horizon=horizon,
        warmup=warmup,
        episodes_simulated=trials,
    )


def episode_cost_batch(
    net: Network,
    ouls,
    seed: int,
    trial: int,
    episodes: range,
    horizon: Optional[int] = None,
    init_levels: Optional[dict[int, float]] = None,
    include_salvage: bool = True,
):
    """Total episode costs (B,) for a batch of training-style episodes."""
    horizon = horizon or net.horizon
    demands = batch_demands(net, seed, trial, episodes, horizon)
    levels = init_levels if init_levels is not None else net.init_levels()
    result = simulate(net, ouls, demands, levels, horizon=horizon, include_salvage=include_salvage)
    return scalars.value_of(result.total_cost)


def grad_episode_batch(
    net: Network,
    ouls: np.ndarray,
    demands: dict[int, np.ndarray],
    init_levels: dict[int, float],
    horizon: Optional[int] = None,
    include_salvage: bool = True,
):
    """Episode costs and per-episode gradients on given demand draws.

    Returns ``(costs (B,), grads (B, n))`` where n is the decision-edge
    count.  The demands are shared with the plain run (common random
    numbers): branches read only primal values, so the dual run consumes
    the stream identically and its primal channel is bitwise equal.
    """
    batch = next(iter(demands.values())).shape[0]
    lifted = seed_ouls(np.asarray(ouls, dtype=np.float64), batch=batch)
    result = simulate(
        net, lifted, demands, init_levels, horizon=horizon, include_salvage=include_salvage
    )
    total = result.total_cost
    if not isinstance(total, Dual):  # zero-dimension networks cannot occur, but stay safe
        return np.asarray(total), np.zeros((batch, len(lifted)))
    return total.value, total.tangent


def grad_episode(
    net: Network,
    ouls,
    horizon: Optional[int] = None,
    rng=None,
    init_mode="auto",
    include_salvage: bool = True,
):
    """Episode cost and its gradient with respect to the order-up-to vector."""
    horizon = horizon or net.horizon
    if rng is None or isinstance(rng, int):
        rng = substream(rng or 0, 0, 0)
    demands = {j: d[None, :] for j, d in draw_episode_demands(net, rng, horizon).items()}
    levels = resolve_init_levels(net, init_mode)
    costs, grads = grad_episode_batch(
        net, np.asarray(ouls, dtype=np.float64), demands, levels, horizon, include_salvage
    )
    return float(costs[0]), grads[0]


def trace_rows(net: Network, trace: Trace, batch_index: int = 0) -> list[dict]:
    """Flatten a trace into stable-schema rows for CSV emission."""
    rows = []
    horizon = len(trace.period_cost)
    for t in range(horizon):
        for j in net.ordering:
            rows.append(
                {
                    "period": t + 1,
                    "entity": f"node:{j}",
                    "IL": trace.il[j][t][batch_index],
                    "ILr": "",
                    "IT": "",
                    "BO": "",
                    "S": "",
                    "D": trace.demand[j][t][batch_index],
                    "c_t": trace.node_cost[j][t][batch_index],
                }
            )
            if net.is_leaf(j):
                rows.append(
                    {
                        "period": t + 1,
                        "entity": f"edge:{j}->customer",
                        "IL": "",
                        "ILr": "",
                        "IT": "",
                        "BO": trace.backorders[("ext", j)][t][batch_index],
                        "S": "",
                        "D": "",
                        "c_t": "",
                    }
                )
        for e in net.decision_edges():
            i, j = e
            rows.append(
                {
                    "period": t + 1,
                    "entity": f"edge:{i}->{j}",
                    "IL": "",
                    "ILr": trace.raw[e][t][batch_index] if e in trace.raw else "",
                    "IT": trace.in_transit[e][t][batch_index] if e in trace.in_transit else "",
                    "BO": trace.backorders[e][t][batch_index] if e in trace.backorders else "",
                    "S": trace.ships[e][t][batch_index] if e in trace.ships else "",
                    "D": trace.orders[e][t][batch_index] if e in trace.orders else "",
                    "c_t": "",
                }
            )
        rows.append(
            {
                "period": t + 1,
                "entity": "total",
                "IL": "",
                "ILr": "",
                "IT": "",
                "BO": "",
                "S": "",
                "D": "",
                "c_t": trace.period_cost[t][batch_index],
            }
        )
    return rows


TRACE_COLUMNS = ["period", "entity", "IL", "ILr", "IT", "BO", "S", "D", "c_t"]
