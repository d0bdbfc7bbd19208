import numpy as np
import pytest

from basestock.demand import Normal, TruncatedPoisson, UniformInt, parse_demand, substream

# Renormalized mean of Poisson(3) on {6..10}, computed by direct evaluation
# of sum(k * pmf(k)) / sum(pmf(k)).
TP_MEAN = 6.587728740581271


def test_normal_mean_and_clamp():
    assert Normal(5.0, 1.0).mean() == 5.0
    rng = substream(0, 0, 0)
    draws = Normal(0.0, 1.0).sample(rng, 10_000)
    assert (draws >= 0).all()


def test_uniform_int_mean_and_support():
    dist = UniformInt(1, 5)
    assert dist.mean() == 3.0
    rng = substream(1, 0, 0)
    draws = dist.sample(rng, 200_000)
    values, counts = np.unique(draws, return_counts=True)
    np.testing.assert_array_equal(values, [1.0, 2.0, 3.0, 4.0, 5.0])
    freqs = counts / draws.size
    assert np.abs(freqs - 0.2).max() < 0.01


def test_truncated_poisson_pmf_and_mean():
    dist = TruncatedPoisson(3.0, 6, 10)
    assert dist.pmf().sum() == pytest.approx(1.0, abs=1e-12)
    assert dist.mean() == pytest.approx(TP_MEAN, abs=1e-12)


@pytest.mark.slow
def test_truncated_poisson_empirical_mean():
    dist = TruncatedPoisson(3.0, 6, 10)
    rng = substream(2, 0, 0)
    draws = dist.sample(rng, 1_000_000)
    assert set(np.unique(draws)) <= {6.0, 7.0, 8.0, 9.0, 10.0}
    assert draws.mean() == pytest.approx(TP_MEAN, abs=0.02)


@pytest.mark.slow
def test_uniform_empirical_frequencies_at_scale():
    rng = substream(3, 0, 0)
    draws = UniformInt(1, 5).sample(rng, 1_000_000)
    _, counts = np.unique(draws, return_counts=True)
    assert np.abs(counts / draws.size - 0.2).max() < 0.01


def test_substream_reproducibility_and_independence():
    a1 = substream(42, 0, 0).normal(size=100)
    a2 = substream(42, 0, 0).normal(size=100)
    b = substream(42, 0, 1).normal(size=100)
    c = substream(42, 1, 0).normal(size=100)
    np.testing.assert_array_equal(a1, a2)
    assert not np.array_equal(a1, b)
    assert not np.array_equal(a1, c)
    assert not np.array_equal(b, c)


def test_substream_pooled_mean():
    # Law of large numbers across 1000 episode substreams.
    dist = Normal(5.0, 1.0)
    pooled = np.concatenate([dist.sample(substream(42, 0, k), 100) for k in range(1000)])
    assert pooled.mean() == pytest.approx(5.0, abs=0.01)


def test_sample_never_negative():
    rng = substream(4, 0, 0)
    for dist in (Normal(1.0, 2.0), UniformInt(0, 3), TruncatedPoisson(2.0, 0, 4)):
        assert (dist.sample(rng, 50_000) >= 0).all()


def test_parse_demand():
    assert parse_demand({"dist": "normal", "mean": 10, "std": 1}) == Normal(10.0, 1.0)
    assert parse_demand({"dist": "uniform_int", "low": 1, "high": 5}) == UniformInt(1, 5)
    assert parse_demand(
        {"dist": "truncated_poisson", "rate": 3, "low": 6, "high": 10}
    ) == TruncatedPoisson(3.0, 6, 10)
    with pytest.raises(ValueError, match="unknown demand dist"):
        parse_demand({"dist": "pareto"})
    with pytest.raises(ValueError, match="missing field"):
        parse_demand({"dist": "normal", "mean": 10})


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        Normal(1.0, 0.0)
    with pytest.raises(ValueError):
        UniformInt(5, 1)
    with pytest.raises(ValueError):
        TruncatedPoisson(-1.0, 0, 5)
