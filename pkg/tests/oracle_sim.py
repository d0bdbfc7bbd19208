"""Straight-line reference simulator for tiny networks.

A deliberately naive, dict-and-float reimplementation of the period event
sequence, independent of the production engine: no batching, no generic
scalars, every update written out longhand.  Used to cross-check episode
costs and state trajectories on networks of up to a few nodes.
"""

from __future__ import annotations


def eval_fn(fn, x: float) -> float:
    """fn is ('zero') | ('lin', c) | ('pw', t, c_lo, c_hi) | ('quad', c)."""
    if x < 0:
        return 0.0
    kind = fn[0]
    if kind == "zero":
        return 0.0
    if kind == "lin":
        return fn[1] * x
    if kind == "quad":
        return fn[1] * x * x
    if kind == "pw":
        _, t, lo, hi = fn
        return lo * x if x < t else hi * x
    raise ValueError(fn)


def simulate_reference(spec: dict, ouls: dict, demands: dict, horizon: int) -> dict:
    """Run `horizon` periods and return costs plus full state history.

    spec keys:
      nodes: list of node ids in upstream-to-downstream order
      preds: node -> list of predecessor ids (0 is the infinite source)
      kind: node -> 'plain' | 'and' | 'or'
      leaf: set of nodes with external demand
      lead: edge -> int
      holding: node -> fn tuple
      stockout: node -> fn tuple
      salvage: node -> fn tuple (reward, subtracted at the end) or absent
      init: node -> float initial finished goods
    demands: leaf node -> list of per-period draws
    ouls: edge -> level
    """
    nodes = spec["nodes"]
    preds = spec["preds"]
    succs = {j: [] for j in nodes}
    for j in nodes:
        for i in preds[j]:
            if i != 0:
                succs[i].append(j)

    il = {j: float(spec["init"].get(j, 0.0)) for j in nodes}
    raw = {(i, j): 0.0 for j in nodes for i in preds[j]}
    pipe = {(i, j): [0.0] * spec["lead"][(i, j)] for j in nodes for i in preds[j]}
    for j in nodes:
        for k in succs[j]:
            pipe.setdefault((j, k), [0.0] * spec["lead"][(j, k)])
    bo = {(j, k): 0.0 for j in nodes for k in succs[j]}
    bo_ext = {j: 0.0 for j in spec["leaf"]}

    history = {
        "period_cost": [],
        "il": {j: [] for j in nodes},
        "ships": {e: [] for e in pipe},
        "arrivals": {e: [] for e in pipe if e[0] == 0 or True},
        "orders": {e: [] for e in raw},
        "processed": {j: [] for j in nodes},
        "demand": {j: [] for j in nodes},
        "bo_sum": {j: [] for j in nodes},
        "raw": {e: [] for e in raw},
    }

    total = 0.0
    for t in range(horizon):
        orders = {}
        d_total = {}
        # Phase one: downstream to upstream (reverse node order).
        for j in reversed(nodes):
            d = demands[j][t] if j in spec["leaf"] else 0.0
            for k in succs[j]:
                d += orders[(j, k)]
            d_total[j] = d
            for i in preds[j]:
                position = raw[(i, j)] + il[j] + sum(pipe[(i, j)]) + (bo[(i, j)] if (i, j) in bo else 0.0) - d
                q = ouls[(i, j)] - position
                if q < 0:
                    q = 0.0
                orders[(i, j)] = q
            for i in preds[j]:
                if spec["lead"][(i, j)] == 0:
                    arrival = orders[(i, j)]
                else:
                    arrival = pipe[(i, j)].pop(0)
                raw[(i, j)] += arrival
                history["arrivals"][(i, j)].append(arrival)
                history["orders"][(i, j)].append(orders[(i, j)])

        for j in nodes:
            for i in preds[j]:
                if i == 0 and spec["lead"][(i, j)] > 0:
                    pipe[(i, j)].append(orders[(i, j)])
                    history["ships"][(i, j)].append(orders[(i, j)])
                elif i == 0 and spec["lead"][(i, j)] == 0:
                    history["ships"][(i, j)].append(orders[(i, j)])

        # Phase two: upstream to downstream.
        cost_t = 0.0
        for j in nodes:
            raws = [raw[(i, j)] for i in preds[j]]
            if spec["kind"][j] == "and":
                r = min(raws)
                for i in preds[j]:
                    raw[(i, j)] -= r
            else:
                r = sum(raws)
                for i in preds[j]:
                    raw[(i, j)] = 0.0
            il[j] += r
            history["processed"][j].append(r)

            customers = [("edge", k) for k in succs[j]]
            if j in spec["leaf"]:
                customers.append(("ext", j))
            claims = {}
            bo_prev_sum = 0.0
            for kind, k in customers:
                if kind == "edge":
                    claims[(kind, k)] = orders[(j, k)] + bo[(j, k)]
                    bo_prev_sum += bo[(j, k)]
                else:
                    claims[(kind, k)] = d_total[j] + bo_ext[j]
                    bo_prev_sum += bo_ext[j]
            claim_total = sum(claims.values())
            on_hand = il[j] + bo_prev_sum
            if on_hand < 0:
                on_hand = 0.0
            shippable = min(on_hand, claim_total)
            for kind, k in customers:
                share = claims[(kind, k)] * shippable / claim_total if claim_total > 0 else 0.0
                if kind == "edge":
                    bo[(j, k)] = claims[(kind, k)] - share
                    pipe[(j, k)].append(share)
                    history["ships"][(j, k)].append(share)
                else:
                    bo_ext[j] = claims[(kind, k)] - share
            il[j] -= d_total[j]

            arg = il[j] if il[j] > 0 else 0.0
            for i in preds[j]:
                arg += raw[(i, j)]
            for k in succs[j]:
                arg += sum(pipe[(j, k)])
            node_cost = eval_fn(spec["holding"][j], arg)
            for k in succs[j]:
                node_cost += eval_fn(spec["stockout"][j], bo[(j, k)])
            if j in spec["leaf"]:
                node_cost += eval_fn(spec["stockout"][j], bo_ext[j])
            cost_t += node_cost

            history["il"][j].append(il[j])
            history["demand"][j].append(d_total[j])
            bo_sum = sum(bo[(j, k)] for k in succs[j]) + (bo_ext[j] if j in spec["leaf"] else 0.0)
            history["bo_sum"][j].append(bo_sum)
            for i in preds[j]:
                history["raw"][(i, j)].append(raw[(i, j)])

        history["period_cost"].append(cost_t)
        total += cost_t

    salvage = 0.0
    for j in nodes:
        if j in spec.get("salvage", {}):
            salvage -= eval_fn(spec["salvage"][j], il[j])
    total += salvage

    history["final_il"] = dict(il)
    history["final_pipe"] = {e: list(p) for e, p in pipe.items()}
    history["final_raw"] = dict(raw)
    history["total"] = total
    history["salvage"] = salvage
    return history
