import pytest

from basestock.fixtures import FIXTURE_SETS, UnknownFixture, fixture, fixture_ids
from basestock.simulator import evaluate_policy


def test_registry_covers_the_sets():
    ids = fixture_ids()
    for members in FIXTURE_SETS.values():
        for fid in members:
            assert fid in ids


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        fixture("serial.case99")


def test_all_fixtures_validate_and_reference_shapes_line_up():
    for fid in fixture_ids():
        fx = fixture(fid)
        edges = fx.network.decision_edges()
        assert len(edges) == len(set(edges))
        for row in fx.references:
            if row.ouls is not None:
                assert set(row.ouls) == set(edges), f"{fid}/{row.method}"
        if fx.random_search is not None:
            assert set(fx.random_search) == set(edges)


def test_serial_case3_reference_values():
    fx = fixture("serial.case3")
    row = fx.reference("analytical")
    assert row.cost == 47.65
    assert fx.oul_vector("analytical") == [10.69, 5.53, 6.49]
    dnn = fx.reference("dnn")
    assert dnn.cost == 47.90
    dfo = fx.reference("dfo")
    assert dfo.cost == 50.01


def test_mixed_fig1_reference_values():
    fx = fixture("mixed.fig1")
    assert fx.reference("dnn").cost == 208.80
    assert len(fx.oul_vector("dnn")) == 7
    assert fx.oul_vector("dnn")[0] == 42.87


def test_complex_fig5_reference_values():
    fx = fixture("complex.fig5")
    assert fx.reference("dnn").cost == 478.61
    assert len(fx.oul_vector("dnn")) == 13
    assert fx.restart_best_sequence == (626.17, 479.68, 478.61)


def test_decision_edge_counts():
    assert len(fixture("mixed.fig1").network.decision_edges()) == 7
    assert len(fixture("complex.fig5").network.decision_edges()) == 13
    assert len(fixture("assembly1.case1").network.decision_edges()) == 10
    assert len(fixture("assembly2.case1").network.decision_edges()) == 11


@pytest.mark.slow
@pytest.mark.parametrize(
    "fid,method",
    [
        ("table1.case3", "analytical"),
        ("serial.case1", "analytical"),
        ("serial.case6", "analytical"),
        ("serial.case9", "analytical"),
        ("assembly1.case3", "enumeration"),
        ("assembly2.case5", "enumeration"),
    ],
)
def test_reference_levels_simulate_near_published_costs(fid, method):
    """Transcription sanity for linear-cost instances: the published levels
    must reproduce the published long-run cost in this simulator."""
    fx = fixture(fid)
    row = fx.reference(method)
    ev = evaluate_policy(fx.network, fx.oul_vector(method), trials=10, horizon=10_000, seed=0)
    assert ev.mean_cost_per_period == pytest.approx(row.cost, rel=0.05)
