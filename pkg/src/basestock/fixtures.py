"""Built-in benchmark instances with reference results.

Each fixture packages a validated network together with the published
order-up-to vectors and costs of the methods that were run on it, so any
experiment can be replayed from disk or compared in a regression table.
Reference OULs are stored per decision edge.  Costs carry a scale tag:
single-node, serial, and assembly references are long-run per-period
averages; mixed and complex ones are finite-horizon episode totals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .costs import Affine, Const, CostExpr, Linear, Max, Piecewise, Power, Sum
from .demand import DemandDist, Normal, TruncatedPoisson, UniformInt
from .network import Edge, Network, Node, NodeKind, validate


class UnknownFixture(KeyError):
    pass


@dataclass(frozen=True)
class ReferenceRow:
    method: str
    cost: Optional[float] = None
    ouls: Optional[dict[tuple[int, int], float]] = None
    scale: str = "per_period"


@dataclass(frozen=True)
class Fixture:
    id: str
    network: Network
    references: tuple[ReferenceRow, ...] = ()
    random_search: Optional[dict[tuple[int, int], tuple[float, float]]] = None
    restart_best_sequence: tuple[float, ...] = ()
    notes: str = ""

    def reference(self, method: str) -> ReferenceRow:
        for row in self.references:
            if row.method == method:
                return row
        raise KeyError(f"{self.id} has no reference for {method!r}")

    def oul_vector(self, method: str) -> list[float]:
        row = self.reference(method)
        return [row.ouls[e] for e in self.network.decision_edges()]


_REGISTRY: dict[str, Fixture] = {}


def fixture(fixture_id: str) -> Fixture:
    try:
        return _REGISTRY[fixture_id]
    except KeyError:
        raise UnknownFixture(fixture_id) from None


def fixture_ids(prefix: str = "") -> list[str]:
    return sorted(k for k in _REGISTRY if k.startswith(prefix))


def _register(f: Fixture) -> None:
    _REGISTRY[f.id] = f


def _pw(threshold: float, below: CostExpr, above: CostExpr) -> Piecewise:
    return Piecewise(threshold, below, above)


# ---------------------------------------------------------------------------
# Single-node instances: h = 10, p = 30, T = 2, normal demand.

_SINGLE_CASES = [
    (1, 10.0, 1.0),
    (2, 10.0, 2.0),
    (3, 50.0, 1.0),
    (4, 50.0, 5.0),
    (5, 100.0, 1.0),
    (6, 100.0, 5.0),
    (7, 100.0, 10.0),
]

_SINGLE_L1 = {
    1: (10.67, 12.71, 10.68, 12.71),
    2: (11.35, 25.42, 11.50, 25.47),
    3: (50.67, 12.71, 50.58, 12.75),
    4: (53.37, 63.56, 53.30, 63.59),
    5: (100.67, 12.71, 100.77, 12.75),
    6: (103.37, 63.56, 103.28, 63.58),
    7: (106.74, 127.11, 106.79, 127.12),
}


def _single_node(mu: float, sigma: float, lead: int) -> Network:
    nodes = [Node(1, demand=Normal(mu, sigma))]
    edges = [Edge(0, 1, lead, holding=Linear(10.0), stockout=Linear(30.0))]
    return validate(nodes, edges, horizon=2)


for case, mu, sigma in _SINGLE_CASES:
    oul_a, cost_a, oul_d, cost_d = _SINGLE_L1[case]
    _register(
        Fixture(
            id=f"table1.case{case}",
            network=_single_node(mu, sigma, lead=1),
            references=(
                ReferenceRow("analytical", cost_a, {(0, 1): oul_a}),
                ReferenceRow("dnn", cost_d, {(0, 1): oul_d}),
            ),
            notes="Unit lead time; equivalent to the classic newsvendor stage.",
        )
    )
    _register(
        Fixture(
            id=f"table1.case{case}.l0",
            network=_single_node(mu, sigma, lead=0),
            references=(
                ReferenceRow("analytical", 0.0, {(0, 1): 0.0}),
                ReferenceRow("dnn", 0.0, {(0, 1): 0.0}),
            ),
            notes="Zero lead time: orders fill before shipping, optimal cost 0.",
        )
    )


# ---------------------------------------------------------------------------
# Serial chains: demand at the far-downstream node only, T = 10.

_SERIAL_SETTINGS = {
    1: ((3.0, 0.5), (5.0, 8.2), (0.0, 25.5), (1, 1)),
    2: ((6.0, 1.5), (1.9, 4.1), (0.0, 11.3), (2, 1)),
    3: ((5.0, 1.0), (2.0, 4.0, 7.0), (0.0, 0.0, 37.12), (2, 1, 1)),
    4: ((50.0, 3.0), (5.0, 10.0, 25.0), (0.0, 0.0, 50.0), (2, 1, 1)),
    5: ((100.0, 5.0), (25.0, 25.0, 50.0), (0.0, 0.0, 100.0), (1, 2, 2)),
    6: ((100.0, 10.0), (10.0, 20.0, 30.0), (0.0, 0.0, 100.0), (1, 1, 1)),
    7: ((3.0, 0.4), (4.0, 5.75, 7.90, 10.8), (0.0, 0.0, 0.0, 35.5), (1, 1, 1, 1)),
    8: ((5.0, 1.2), (5.0, 5.0, 5.0, 10.0), (0.0, 0.0, 0.0, 30.0), (1, 1, 1, 1)),
    9: ((80.0, 4.0), (10.0, 20.0, 30.0, 40.0, 50.0), (0.0, 0.0, 0.0, 0.0, 200.0), (1, 1, 1, 1, 1)),
    10: ((25.0, 2.0), (5.0, 10.0, 25.0, 50.0, 50.0), (0.0, 0.0, 0.0, 0.0, 150.0), (2, 1, 1, 1, 1)),
}

_SERIAL_RESULTS = {
    1: (
        ((2.91, 3.64), 22.21),
        ((2.91, 3.72), 22.34),
        ((1.22, 5.10), 22.55),
    ),
    2: (
        ((12.58, 7.60), 23.07),
        ((12.58, 7.65), 23.17),
        ((12.05, 7.58), 23.20),
    ),
    3: (
        ((10.69, 5.53, 6.49), 47.65),
        ((10.08, 5.39, 6.64), 47.90),
        ((10.54, 5.35, 6.57), 50.01),
    ),
    4: (
        ((101.45, 51.40, 52.70), 879.88),
        ((99.29, 51.03, 52.71), 885.63),
        ((97.02, 53.59, 53.02), 885.49),
    ),
    5: (
        ((71.026, 228.29, 207.04), 10568.23),
        ((87.71, 204.63, 208.90), 10625.01),
        ((79.33, 211.20, 208.51), 10695.88),
    ),
    6: (
        ((99.53, 102.58, 114.05), 3630.14),
        ((93.36, 103.42, 114.26), 3651.63),
        ((95.83, 100.87, 117.90), 3638.18),
    ),
    7: (
        ((2.78, 3.13, 3.19, 3.60), 63.39),
        ((2.78, 3.13, 3.19, 3.74), 63.84),
        ((-12.03, -8.86, -3.93, 1.90), 592.51),
    ),
    8: (
        ((-3.80, 9.80, 9.80, 6.35), 101.48),
        ((1.48, 6.12, 7.00, 6.46), 104.04),
        ((-4.96, -3.69, -1.90, 0.02), 674.62),
    ),
    9: (
        ((80.15, 80.15, 81.17, 81.68, 86.99), 8559.85),
        ((76.83, 78.02, 79.60, 81.62, 87.40), 8678.38),
        ((80.49, 77.62, 80.04, 77.45, 92.18), 8585.50),
    ),
    10: (
        ((51.57, 26.30, 25.05, 20.25, 33.01), 2500.79),
        ((48.40, 25.65, 24.02, 22.90, 30.12), 2581.41),
        ((49.44, 25.51, 23.04, 23.82, 31.17), 2527.1),
    ),
}


def serial_network(
    demand: tuple[float, float],
    holding: tuple[float, ...],
    stockout: tuple[float, ...],
    leads: tuple[int, ...],
    horizon: int = 10,
) -> Network:
    n = len(holding)
    nodes = [
        Node(k, demand=Normal(*demand) if k == n else None) for k in range(1, n + 1)
    ]
    edges = [
        Edge(k - 1, k, leads[k - 1], holding=Linear(holding[k - 1]), stockout=Linear(stockout[k - 1]))
        for k in range(1, n + 1)
    ]
    return validate(nodes, edges, horizon=horizon)


for case, (demand, holding, stockout, leads) in _SERIAL_SETTINGS.items():
    chain = [(k - 1, k) for k in range(1, len(holding) + 1)]
    rows = []
    for method, (ouls, cost) in zip(("analytical", "dnn", "dfo"), _SERIAL_RESULTS[case]):
        rows.append(ReferenceRow(method, cost, dict(zip(chain, ouls))))
    notes = ""
    if case == 4:
        notes = "Published analytical OUL 52.7040 has inconsistent precision; transcribed as 52.70."
    _register(
        Fixture(
            id=f"serial.case{case}",
            network=serial_network(demand, holding, stockout, leads),
            references=tuple(rows),
            notes=notes,
        )
    )


# ---------------------------------------------------------------------------
# Assembly structures, five instances each, T = 10, priming initialization.
# Structure 1: four sources feed two mid assemblies feeding one sink.
# Structure 2: five sources; two feed a mid assembly; the sink assembles
# three sources plus the mid node.

def assembly1_network(
    holding: tuple[float, float, float],
    stockout: float,
    leads: tuple[int, int, int],
    demand: DemandDist,
    horizon: int = 10,
) -> Network:
    h1, h2, h3 = (Linear(h) for h in holding)
    nodes = [Node(k) for k in range(1, 5)]
    nodes += [Node(5, kind=NodeKind.ASSEMBLY_AND), Node(6, kind=NodeKind.ASSEMBLY_AND)]
    nodes += [Node(7, kind=NodeKind.ASSEMBLY_AND, demand=demand)]
    edges = [Edge(0, k, leads[0], holding=h1) for k in range(1, 5)]
    edges += [
        Edge(1, 5, leads[1], holding=h2),
        Edge(2, 5, leads[1], holding=h2),
        Edge(3, 6, leads[1], holding=h2),
        Edge(4, 6, leads[1], holding=h2),
    ]
    edges += [
        Edge(5, 7, leads[2], holding=h3, stockout=Linear(stockout)),
        Edge(6, 7, leads[2], holding=h3, stockout=Linear(stockout)),
    ]
    return validate(nodes, edges, horizon=horizon)


def assembly2_network(
    holding: tuple[float, float, float],
    stockout: float,
    demand: DemandDist,
    horizon: int = 10,
) -> Network:
    h1, h2, h3 = (Linear(h) for h in holding)
    nodes = [Node(k) for k in range(1, 6)]
    nodes += [Node(6, kind=NodeKind.ASSEMBLY_AND)]
    nodes += [Node(7, kind=NodeKind.ASSEMBLY_AND, demand=demand)]
    edges = [Edge(0, k, 1, holding=h1) for k in range(1, 6)]
    edges += [Edge(4, 6, 1, holding=h2), Edge(5, 6, 1, holding=h2)]
    edges += [
        Edge(i, 7, 1, holding=h3, stockout=Linear(stockout)) for i in (1, 2, 3, 6)
    ]
    return validate(nodes, edges, horizon=horizon)


_A1_SRC = [(0, 1), (0, 2), (0, 3), (0, 4)]
_A1_MID = [(1, 5), (2, 5), (3, 6), (4, 6)]
_A1_SINK = [(5, 7), (6, 7)]


def _a1_ouls(values: list[float]) -> dict:
    return dict(zip(_A1_SRC + _A1_MID + _A1_SINK, values))


def _a1_tied(src: float, mid: float, sink: float) -> dict:
    return _a1_ouls([src] * 4 + [mid] * 4 + [sink] * 2)


_ASSEMBLY1 = [
    dict(
        case=1,
        holding=(0.25, 0.8, 1.9),
        stockout=10.0,
        leads=(2, 1, 1),
        demand=Normal(13.0, 1.2),
        dnn=(_a1_ouls([26.91, 26.8, 26.86, 26.85, 13.55, 13.57, 13.58, 13.57, 14.64, 14.64]), 40.55),
        cd=(_a1_tied(25.77, 13.87, 15.08), 40.26),
        enumeration=(_a1_tied(26.72, 13.36, 15.16), 40.34),
        dfo=(_a1_ouls([6.08, 27.32, 21.77, 26.89, 12.20, 14.75, 12.85, 15.36, 14.41, 14.46]), 233.45),
    ),
    dict(
        case=2,
        holding=(2.0, 4.0, 7.0),
        stockout=37.12,
        leads=(2, 1, 1),
        demand=Normal(5.0, 1.0),
        dnn=(_a1_ouls([10.08, 10.08, 10.13, 10.12, 5.42, 5.42, 5.38, 5.33, 6.54, 6.59]), 103.77),
        cd=(_a1_tied(7.50, 6.04, 8.58), 101.59),
        enumeration=(_a1_tied(7.5, 3.75, 10.69), 101.47),
        dfo=(_a1_ouls([10.19, 11.83, 1.00, 11.15, 4.63, 4.67, 1.46, 4.62, 6.81, 6.99]), 482.63),
    ),
    dict(
        case=3,
        holding=(0.4, 0.9, 2.1),
        stockout=15.0,
        leads=(2, 2, 2),
        demand=Normal(20.0, 3.0),
        dnn=(_a1_ouls([40.98, 40.99, 41.03, 41.07, 42.83, 43.29, 43.26, 42.17, 46.19, 46.14]), 163.15),
        cd=(_a1_tied(36.67, 45.19, 47.85), 161.30),
        enumeration=(_a1_tied(35.55, 41.11, 52.22), 161.13),
        dfo=(_a1_ouls([39.66, 22.78, 12.47, 46.63, 39.61, 42.00, 42.41, 40.04, 47.02, 48.82]), 441.43),
    ),
    dict(
        case=4,
        holding=(0.3, 0.8, 2.0),
        stockout=15.0,
        leads=(2, 2, 2),
        demand=Normal(5.0, 1.0),
        dnn=(_a1_ouls([10.12, 10.19, 10.73, 10.21, 12.74, 12.38, 12.55, 12.20, 12.25, 12.25]), 37.49),
        cd=(_a1_tied(9.21, 11.55, 12.62), 35.97),
        enumeration=(_a1_ouls([10.27, 10.2, 10.27, 10.27, 10.27, 10.27, 10.27, 10.27, 13.05, 13.05]), 35.98),
        dfo=(_a1_ouls([1.26, 7.59, 9.89, 1.60, 8.06, 7.26, 5.27, 7.94, 15.52, 13.81]), 139.77),
    ),
    dict(
        case=5,
        holding=(0.5, 1.0, 3.0),
        stockout=16.0,
        leads=(1, 1, 1),
        demand=Normal(5.0, 1.0),
        dnn=(_a1_ouls([5.01, 5.02, 5.11, 5.06, 7.04, 7.07, 6.98, 6.91, 6.33, 6.23]), 29.04),
        cd=(_a1_tied(4.38, 6.23, 6.49), 27.53),
        enumeration=(_a1_tied(3.75, 6.52, 6.52), 27.45),
        dfo=(_a1_ouls([8.79, 7.35, 8.91, 5.23, 3.07, 5.71, 3.08, 5.74, 5.75, 6.38]), 36.03),
    ),
]

for spec in _ASSEMBLY1:
    refs = [
        ReferenceRow(method, spec[method][1], spec[method][0])
        for method in ("dnn", "cd", "enumeration", "dfo")
    ]
    _register(
        Fixture(
            id=f"assembly1.case{spec['case']}",
            network=assembly1_network(spec["holding"], spec["stockout"], spec["leads"], spec["demand"]),
            references=tuple(refs),
        )
    )


_A2_SRC = [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]
_A2_MID = [(4, 6), (5, 6)]
_A2_SINK = [(1, 7), (2, 7), (3, 7), (6, 7)]


def _a2_ouls(src: list[float], mid: list[float], sink: list[float]) -> dict:
    return dict(zip(_A2_SRC + _A2_MID + _A2_SINK, src + mid + sink))


def _a2_tied(src: float, mid: float, sink: float) -> dict:
    return _a2_ouls([src] * 5, [mid] * 2, [sink] * 4)


_ASSEMBLY2 = [
    dict(
        case=1,
        holding=(2.0, 4.0, 7.0),
        stockout=40.0,
        demand=Normal(5.0, 1.0),
        dnn=(_a2_ouls([5.23, 5.01, 5.22, 4.96, 4.92], [5.9, 6.31], [5.89, 6.97, 5.82, 6.33]), 93.9432),
        cd=(_a2_tied(3.97, 5.49, 7.77), 90.4087),
        enumeration=(_a2_tied(3.75, 5.83, 7.91), 90.5432),
        dfo=(_a2_ouls([6.76, 6.53, 6.80, 6.80, 5.93], [0.80, 5.92], [6.64, 5.75, 6.10, 6.27]), 116.38),
    ),
    dict(
        case=2,
        holding=(0.3, 0.5, 0.9),
        stockout=3.5,
        demand=Normal(10.0, 1.0),
        dnn=(_a2_ouls([9.93, 9.89, 9.98, 9.86, 9.87], [10.99, 11.39], [12.47, 12.31, 12.5, 11.85]), 23.00),
        cd=(_a2_tied(8.98, 10.53, 12.54), 22.43),
        enumeration=(_a2_tied(7.5, 10.27, 14.44), 22.48),
        dfo=(_a2_ouls([10.89, 10.49, 11.01, 11.24, 10.79], [5.59, 10.47], [10.88, 11.25, 11.12, 11.28]), 25.75),
    ),
    dict(
        case=3,
        holding=(0.5, 3.0, 6.0),
        stockout=25.0,
        demand=Normal(10.0, 2.0),
        dnn=(_a2_ouls([10.7, 10.43, 10.71, 10.27, 10.24], [11.06, 11.07], [11.54, 11.94, 10.87, 11.62]), 86.61),
        cd=(_a2_tied(11.1868, 11.1868, 12.4788), 82.67),
        enumeration=(_a2_tied(10.27, 10.27, 13.05), 82.32),
        dfo=(_a2_ouls([11.57, 19.27, 11.59, 13.77, 13.63], [5.71, 11.56], [11.81, 11.78, 11.77, 11.90]), 90.71),
    ),
    dict(
        case=4,
        holding=(0.6, 1.1, 2.5),
        stockout=5.4,
        demand=Normal(7.0, 1.0),
        dnn=(_a2_ouls([7.26, 7.16, 7.1, 6.93, 6.88], [7.72, 8.02], [8.22, 7.87, 7.73, 7.43]), 34.62),
        cd=(_a2_tied(6.2706, 7.53, 8.72), 34.04),
        enumeration=(_a2_tied(5.25, 7.19, 10.11), 34.17),
        dfo=(_a2_ouls([7.47, 7.95, 6.10, 5.57, 7.52], [10.76, 5.42], [7.60, 7.87, 8.18, 9.30]), 42.35),
    ),
    dict(
        case=5,
        holding=(0.25, 0.59, 0.88),
        stockout=49.7,
        demand=Normal(11.0, 2.0),
        dnn=(_a2_ouls([12.11, 11.97, 11.9, 11.5, 11.59], [13.52, 13.59], [14.86, 14.49, 14.51, 14.29]), 30.98),
        cd=(_a2_tied(10.55, 12.62, 18.44), 28.19),
        enumeration=(_a2_tied(8.25, 12.83, 20.47), 27.96),
        dfo=(_a2_ouls([14.88, 14.55, 14.48, 4.95, 14.22], [2.07, 13.95], [15.89, 15.05, 14.55, 17.67]), 62.76),
    ),
]

for spec in _ASSEMBLY2:
    refs = [
        ReferenceRow(method, spec[method][1], spec[method][0])
        for method in ("dnn", "cd", "enumeration", "dfo")
    ]
    _register(
        Fixture(
            id=f"assembly2.case{spec['case']}",
            network=assembly2_network(spec["holding"], spec["stockout"], spec["demand"]),
            references=tuple(refs),
        )
    )


# ---------------------------------------------------------------------------
# Mixed network: one root, two distribution nodes, two assembly sinks.

def mixed_fig1_network() -> Network:
    nodes = [
        Node(1),
        Node(2),
        Node(3),
        Node(4, kind=NodeKind.ASSEMBLY_AND, demand=Normal(5.0, 1.0)),
        Node(5, kind=NodeKind.ASSEMBLY_AND, demand=Normal(5.0, 1.0)),
    ]
    edges = [Edge(0, 1, 2, holding=Linear(2.0), stockout=Linear(4.0), init_level=40.0)]
    edges += [
        Edge(1, k, 1, holding=Linear(4.0), stockout=Linear(12.0), init_level=10.0)
        for k in (2, 3)
    ]
    edges += [
        Edge(i, k, 1, holding=Linear(7.0), stockout=Linear(37.12), init_level=5.0)
        for i in (2, 3)
        for k in (4, 5)
    ]
    return validate(nodes, edges, horizon=10)


_MIXED_EDGES = [(0, 1), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5)]


def _mixed_ouls(values: list[float]) -> dict:
    return dict(zip(_MIXED_EDGES, values))


_register(
    Fixture(
        id="mixed.fig1",
        network=mixed_fig1_network(),
        references=(
            ReferenceRow(
                "dnn", 208.80, _mixed_ouls([42.87, 11.65, 11.58, 6.73, 6.73, 6.99, 6.41]), "per_episode"
            ),
            ReferenceRow(
                "random", 211.90, _mixed_ouls([41.19, 13.07, 13.21, 8.03, 9.07, 5.14, 8.00]), "per_episode"
            ),
            ReferenceRow(
                "dfo", 215.21, _mixed_ouls([47.69, 12.45, 12.62, 5.51, 5.58, 5.53, 5.40]), "per_episode"
            ),
            ReferenceRow("spearmint", 214.66, None, "per_episode"),
        ),
        random_search={
            (0, 1): (40.0, 4.0),
            (1, 2): (10.0, 2.0),
            (1, 3): (10.0, 2.0),
            (2, 4): (5.0, 2.0),
            (2, 5): (5.0, 2.0),
            (3, 4): (5.0, 2.0),
            (3, 5): (5.0, 2.0),
        },
        notes=(
            "Published costs are episode totals under the source paper's cost "
            "accounting, which repeats the finished-goods holding charge once "
            "per predecessor at assembly nodes; this engine charges holding "
            "once per node, so absolute episode costs simulate lower here."
        ),
    )
)


# ---------------------------------------------------------------------------
# Complex case-study network: nonlinear costs and salvage rewards.

_H_MID = _pw(3.0, Linear(4.0), Linear(3.0))
_P_MID = _pw(3.0, Linear(12.0), Power(4.0, 2))
_H_LEAF = _pw(3.0, Linear(7.0), Linear(6.0))
_P_LEAF = _pw(3.0, Linear(36.0), Power(12.0, 2))
_SALVAGE7 = _pw(
    2.0,
    Affine(15.0, -0.5),
    Max((Sum((Power(-3.5, 2), Power(14.0, 1))), Const(3.0))),
)


def complex_fig5_network() -> Network:
    nodes = [Node(1), Node(2), Node(3), Node(4)]
    nodes += [
        Node(5, kind=NodeKind.ASSEMBLY_AND, demand=Normal(5.0, 1.0), salvage=Linear(1.25)),
        Node(6, kind=NodeKind.ASSEMBLY_AND, demand=UniformInt(1, 5), salvage=Linear(1.5)),
        Node(
            7,
            kind=NodeKind.ASSEMBLY_AND,
            demand=TruncatedPoisson(3.0, 6, 10),
            salvage=_SALVAGE7,
        ),
    ]
    edges = [Edge(0, 1, 2, holding=Linear(2.0), stockout=Linear(4.0), init_level=45.24)]
    edges += [
        Edge(1, k, 1, holding=_H_MID, stockout=_P_MID, init_level=15.08) for k in (2, 3, 4)
    ]
    leaf_init = {5: 5.0, 6: 2.5, 7: 7.58}
    edges += [
        Edge(i, k, 1, holding=_H_LEAF, stockout=_P_LEAF, init_level=leaf_init[k])
        for i in (2, 3, 4)
        for k in (5, 6, 7)
    ]
    return validate(nodes, edges, horizon=10)


_COMPLEX_EDGES = [
    (0, 1), (1, 2), (1, 3), (1, 4),
    (2, 5), (2, 6), (2, 7),
    (3, 5), (3, 6), (3, 7),
    (4, 5), (4, 6), (4, 7),
]


def _complex_ouls(values: list[float]) -> dict:
    return dict(zip(_COMPLEX_EDGES, values))


_register(
    Fixture(
        id="complex.fig5",
        network=complex_fig5_network(),
        references=(
            ReferenceRow(
                "dnn",
                478.61,
                _complex_ouls(
                    [101.44, 18.75, 20.82, 21.48, 7.29, 6.95, 10.28, 7.21, 6.06, 9.48, 6.11, 6.5, 9.38]
                ),
                "per_episode",
            ),
            ReferenceRow(
                "random",
                514.69,
                _complex_ouls(
                    [100.40, 15.91, 19.84, 21.85, 6.26, 7.16, 9.84, 6.47, 5.73, 9.17, 5.02, 5.15, 7.71]
                ),
                "per_episode",
            ),
            ReferenceRow(
                "dfo",
                644.41,
                _complex_ouls(
                    [99.15, 15.94, 16.01, 15.99, 5.20, 3.13, 7.62, 5.41, 2.84, 7.52, 5.44, 2.77, 7.52]
                ),
                "per_episode",
            ),
            ReferenceRow("spearmint", 618.44, None, "per_episode"),
        ),
        random_search={
            (0, 1): (45.24, 50.0),
            (1, 2): (15.08, 5.0),
            (1, 3): (15.08, 5.0),
            (1, 4): (15.08, 5.0),
            (2, 5): (5.0, 5.0),
            (2, 6): (2.5, 5.0),
            (2, 7): (7.58, 5.0),
            (3, 5): (5.0, 5.0),
            (3, 6): (2.5, 5.0),
            (3, 7): (7.58, 5.0),
            (4, 5): (5.0, 5.0),
            (4, 6): (2.5, 5.0),
            (4, 7): (7.58, 5.0),
        },
        restart_best_sequence=(626.17, 479.68, 478.61),
        notes=(
            "Leaf initialization 7.58 is the published initialization constant "
            "for the truncated-Poisson stream; the renormalized truncated mean "
            "is 6.5877, and the discrepancy is kept as published.  Episode-"
            "total references follow the source accounting (see mixed.fig1)."
        ),
    )
)


# Four further instances on the fig5 topology with unit lead times, salvage
# at every node, and per-leaf demand variations.  The published parameter
# table lists one demand per sink-edge row; they are read as the demands of
# leaves 5, 6, and 7 respectively.

def _complex_variant(
    demands: dict[int, DemandDist],
    salvage: dict[int, float],
    horizon: int = 10,
) -> Network:
    nodes = [Node(k, salvage=Linear(salvage[k])) for k in (1, 2, 3, 4)]
    nodes += [
        Node(
            k,
            kind=NodeKind.ASSEMBLY_AND,
            demand=demands[k],
            salvage=Linear(salvage[k]),
        )
        for k in (5, 6, 7)
    ]
    edges = [Edge(0, 1, 1, holding=Linear(2.0), stockout=Linear(4.0))]
    edges += [Edge(1, k, 1, holding=_H_MID, stockout=_P_MID) for k in (2, 3, 4)]
    edges += [
        Edge(i, k, 1, holding=_H_LEAF, stockout=_P_LEAF)
        for i in (2, 3, 4)
        for k in (5, 6, 7)
    ]
    return validate(nodes, edges, horizon=horizon)


_COMPLEX_VARIANTS = [
    dict(
        case=1,
        demands={5: Normal(5, 1), 6: Normal(5, 1), 7: Normal(5, 1)},
        salvage={1: 1.25, 2: 1.5, 3: 1.5, 4: 1.5, 5: 1.25, 6: 1.25, 7: 1.25},
        dnn=([49.25, 17.75, 17.45, 17.36, 7.3, 7.55, 7.92, 6.7, 6.8, 6.64, 6.79, 6.99, 7.21], 380.95),
        dfo=(
            [52.22203, 18.48301, 18.42489, 18.40821, 5.34762, 5.32846, 5.30319,
             5.29257, 5.31856, 5.30318, 5.33311, 5.30957, 5.28193],
            402.41,
        ),
    ),
    dict(
        case=2,
        demands={5: Normal(6, 1), 6: Normal(4, 1), 7: Normal(6, 2)},
        salvage={k: 2.0 for k in range(1, 8)},
        dnn=([56.53, 18.64, 19.96, 19.07, 7.8, 8.36, 8.19, 6.91, 7.56, 5.97, 12.21, 11.83, 11.8], 419.13),
        dfo=(
            [57.33026, 20.50994, 18.88558, 19.12507, 7.24254, 6.94252, 7.31975,
             4.22521, 4.40232, 4.39467, 6.3352, 7.46706, 7.27793],
            442.42,
        ),
    ),
    dict(
        case=3,
        demands={5: Normal(5, 1), 6: Normal(5, 1.2), 7: Normal(6, 1.5)},
        salvage={1: 1.0, 2: 2.0, 3: 2.0, 4: 2.0, 5: 1.0, 6: 1.0, 7: 1.0},
        dnn=([53.73, 18.87, 19.43, 18.75, 6.67, 7.49, 7.55, 7.28, 8.19, 8.59, 12.64, 10.67, 9.25], 407.83),
        dfo=(
            [56.46892, 19.30803, 19.16313, 19.61025, 5.41518, 5.40836, 5.90935,
             5.61027, 5.44619, 4.75065, 7.17493, 6.90065, 7.14491],
            408.27,
        ),
    ),
    dict(
        case=4,
        demands={5: Normal(5, 1), 6: Normal(6, 1), 7: Normal(4, 1.5)},
        salvage={k: 2.5 for k in range(1, 8)},
        dnn=([48.56, 17.56, 16.9, 17.62, 7.11, 7.19, 7.64, 7.85, 8.39, 8.75, 7.22, 6.39, 6.25], 379.31),
        dfo=(
            [52.62784, 17.88147, 17.9517, 16.90722, 5.15377, 5.48897, 5.83787,
             7.34585, 7.18886, 6.75788, 4.16108, 4.39452, 4.72713],
            400.047,
        ),
    ),
]

# The published variant rows order sink edges by predecessor within each
# leaf column block: (2,5),(3,5),(4,5),(2,6),(3,6),(4,6),(2,7),(3,7),(4,7).
_VARIANT_EDGE_ORDER = [
    (0, 1), (1, 2), (1, 3), (1, 4),
    (2, 5), (3, 5), (4, 5),
    (2, 6), (3, 6), (4, 6),
    (2, 7), (3, 7), (4, 7),
]

for spec in _COMPLEX_VARIANTS:
    refs = [
        ReferenceRow(
            method,
            spec[method][1],
            dict(zip(_VARIANT_EDGE_ORDER, spec[method][0])),
            "per_episode",
        )
        for method in ("dnn", "dfo")
    ]
    _register(
        Fixture(
            id=f"complex.case{spec['case']}",
            network=_complex_variant(spec["demands"], spec["salvage"]),
            references=tuple(refs),
            notes=(
                "Parameter-table demand entries are read as the demands of "
                "leaves 5, 6, 7 in row order; initialization uses priming."
            ),
        )
    )


FIXTURE_SETS = {
    "table1": [f"table1.case{k}" for k in range(1, 8)],
    "table1-l0": [f"table1.case{k}.l0" for k in range(1, 8)],
    "serial": [f"serial.case{k}" for k in range(1, 11)],
    "assembly": [f"assembly{s}.case{k}" for s in (1, 2) for k in range(1, 6)],
    "mixed": ["mixed.fig1"],
    "complex": ["complex.fig5"] + [f"complex.case{k}" for k in range(1, 5)],
}
