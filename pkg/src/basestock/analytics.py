"""Closed-form newsvendor quantities for normal demand.

The optimal order-up-to level is the critical-ratio quantile
mu + sigma * z with z = Phi^-1(p / (p + h)), and the expected per-period
cost at that level is (h + p) * phi(z) * sigma.
"""

from __future__ import annotations

import math

from scipy.special import ndtr, ndtri


class InvalidParams(ValueError):
    pass


def _check(mu: float, sigma: float, h: float, p: float) -> None:
    if sigma <= 0 or h <= 0 or p <= 0:
        raise InvalidParams("require sigma > 0, h > 0, p > 0")


def normal_quantile(u: float) -> float:
    """Phi^-1(u), accurate to well below 1e-9 absolute error."""
    if not 0.0 < u < 1.0:
        raise InvalidParams("quantile argument must lie in (0, 1)")
    return float(ndtri(u))


def normal_cdf(z: float) -> float:
    return float(ndtr(z))


def normal_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def newsvendor_oul(mu: float, sigma: float, h: float, p: float) -> float:
    """Cost-minimizing order-up-to level for a single newsvendor stage."""
    _check(mu, sigma, h, p)
    return mu + sigma * normal_quantile(p / (p + h))


def newsvendor_cost(mu: float, sigma: float, h: float, p: float) -> float:
    """Expected per-period cost at the optimal order-up-to level."""
    _check(mu, sigma, h, p)
    z = normal_quantile(p / (p + h))
    return (h + p) * normal_pdf(z) * sigma
