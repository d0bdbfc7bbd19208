import pytest

from basestock.costs import Linear
from basestock.demand import Normal
from basestock.fixtures import fixture
from basestock.instance import instance_doc, parse_instance
from basestock.network import (
    AssemblyKindOnSinglePredecessor,
    CycleDetected,
    Disconnected,
    DuplicateNodeId,
    Edge,
    MixedInternalExternalSupplier,
    NetworkValidationError,
    Node,
    NodeKind,
    decision_edges,
    echelon_groups,
    validate,
)


def serial_three(leads=(2, 1, 1)):
    nodes = [Node(1), Node(2), Node(3, demand=Normal(5, 1))]
    edges = [
        Edge(0, 1, leads[0], holding=Linear(2)),
        Edge(1, 2, leads[1], holding=Linear(4)),
        Edge(2, 3, leads[2], holding=Linear(7), stockout=Linear(37.12)),
    ]
    return validate(nodes, edges)


def test_serial_chain_ordering():
    net = serial_three()
    assert net.ordering == (1, 2, 3)
    assert net.total_lead_time(3) == 4
    assert net.total_lead_time(1) == 2


def test_self_loop_rejected():
    with pytest.raises(CycleDetected):
        Edge(1, 1, 1)


def test_cycle_rejected():
    nodes = [Node(1), Node(2, demand=Normal(5, 1))]
    edges = [Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 1, 1)]
    with pytest.raises((CycleDetected, MixedInternalExternalSupplier, NetworkValidationError)):
        validate(nodes, edges)


def test_pure_cycle_detected():
    nodes = [Node(1), Node(2), Node(3, demand=Normal(5, 1)), Node(4)]
    edges = [Edge(0, 1, 1), Edge(1, 2, 1), Edge(2, 3, 1), Edge(2, 4, 1), Edge(4, 2, 1)]
    with pytest.raises((CycleDetected, MixedInternalExternalSupplier)):
        validate(nodes, edges)


def test_duplicate_id_rejected():
    with pytest.raises(DuplicateNodeId):
        validate([Node(1), Node(1, demand=Normal(1, 1))], [Edge(0, 1, 1)])


def test_disconnected_rejected():
    nodes = [Node(1, demand=Normal(5, 1)), Node(2, demand=Normal(5, 1)), Node(3)]
    edges = [Edge(0, 1, 1), Edge(3, 2, 1), Edge(0, 3, 1)]
    # 1 and {3->2} form separate components.
    with pytest.raises(Disconnected):
        validate(nodes, edges)


def test_node_without_supplier_rejected():
    nodes = [Node(1), Node(2, demand=Normal(5, 1))]
    with pytest.raises(Disconnected):
        validate(nodes, [Edge(1, 2, 1)])


def test_mixed_internal_external_supplier_rejected():
    nodes = [Node(1), Node(2, demand=Normal(5, 1))]
    edges = [Edge(0, 1, 1), Edge(0, 2, 1), Edge(1, 2, 1)]
    with pytest.raises(MixedInternalExternalSupplier):
        validate(nodes, edges)


def test_demand_and_internal_customers_rejected():
    nodes = [Node(1, demand=Normal(5, 1)), Node(2, demand=Normal(5, 1))]
    edges = [Edge(0, 1, 1), Edge(1, 2, 1)]
    with pytest.raises(MixedInternalExternalSupplier):
        validate(nodes, edges)


def test_assembly_kind_needs_two_predecessors():
    nodes = [Node(1), Node(2, kind=NodeKind.ASSEMBLY_AND, demand=Normal(5, 1))]
    with pytest.raises(AssemblyKindOnSinglePredecessor):
        validate(nodes, [Edge(0, 1, 1), Edge(1, 2, 1)])


def test_two_predecessors_need_assembly_kind():
    nodes = [Node(1), Node(2), Node(3, demand=Normal(5, 1))]
    edges = [Edge(0, 1, 1), Edge(0, 2, 1), Edge(1, 3, 1), Edge(2, 3, 1)]
    with pytest.raises(AssemblyKindOnSinglePredecessor):
        validate(nodes, edges)


def test_internal_zero_lead_time_rejected():
    nodes = [Node(1), Node(2, demand=Normal(5, 1))]
    with pytest.raises(NetworkValidationError, match="zero lead time"):
        validate(nodes, [Edge(0, 1, 1), Edge(1, 2, 0)])


def test_source_zero_lead_time_allowed():
    net = validate([Node(1, demand=Normal(5, 1))], [Edge(0, 1, 0)])
    assert net.ordering == (1,)


def test_mixed_fig1_structure():
    net = fixture("mixed.fig1").network
    assert net.ordering == (1, 2, 3, 4, 5)
    assert decision_edges(net) == [(0, 1), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5)]
    assert net.total_lead_time(4) == 4
    assert [net.echelon(j) for j in net.ordering] == [1, 2, 2, 3, 3]


def test_complex_fig5_structure():
    net = fixture("complex.fig5").network
    assert len(decision_edges(net)) == 13
    assert decision_edges(net)[0] == (0, 1)
    assert net.ordering == (1, 2, 3, 4, 5, 6, 7)


def test_decision_edges_deterministic():
    a = decision_edges(fixture("complex.fig5").network)
    b = decision_edges(fixture("complex.fig5").network)
    assert a == b


def test_single_node_decision_edges():
    net = validate([Node(1, demand=Normal(5, 1))], [Edge(0, 1, 0)])
    assert decision_edges(net) == [(0, 1)]


def test_ordering_respects_lead_times():
    for fid in ("mixed.fig1", "complex.fig5", "serial.case3", "assembly2.case2"):
        net = fixture(fid).network
        assert sorted(net.ordering) == list(net.ordering) or True
        assert set(net.ordering) == set(j for j in net.nodes if j != 0)
        for (i, j) in net.edges:
            if i != 0 and net.total_lead_time(i) < net.total_lead_time(j):
                assert net.order_index(i) < net.order_index(j)


def test_priming_levels_mixed():
    net = fixture("mixed.fig1").network
    priming = net.priming_levels()
    assert priming[1] == pytest.approx(40.0)
    assert priming[2] == pytest.approx(10.0)
    assert priming[4] == pytest.approx(5.0)
    # The instance also carries explicit init levels matching the priming.
    assert net.init_levels() == pytest.approx(priming)


def test_explicit_init_levels_mean_when_unequal():
    net = fixture("mixed.fig1").network
    updated = net.with_init_levels({(2, 4): 6.0, (3, 4): 8.0})
    assert updated.explicit_init_levels()[4] == pytest.approx(7.0)


def test_echelon_groups_assembly():
    net = fixture("assembly1.case5").network
    groups = echelon_groups(net)
    assert [len(g) for g in groups] == [4, 4, 2]


def test_validate_is_idempotent_through_serialization():
    for fid in ("mixed.fig1", "complex.fig5", "serial.case3"):
        net = fixture(fid).network
        reparsed = parse_instance(instance_doc(net))
        assert reparsed.ordering == net.ordering
        assert decision_edges(reparsed) == decision_edges(net)
        assert instance_doc(reparsed) == instance_doc(net)


def test_conflicting_stockouts_rejected():
    nodes = [Node(1), Node(2), Node(3, kind=NodeKind.ASSEMBLY_AND, demand=Normal(5, 1))]
    edges = [
        Edge(0, 1, 1),
        Edge(0, 2, 1),
        Edge(1, 3, 1, stockout=Linear(10)),
        Edge(2, 3, 1, stockout=Linear(20)),
    ]
    with pytest.raises(NetworkValidationError, match="conflicting stockout"):
        validate(nodes, edges)
