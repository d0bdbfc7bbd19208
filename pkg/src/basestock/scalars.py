"""Generic scalar helpers shared by plain numpy values and dual numbers.

The simulation engine is written against these functions only, so the same
code path runs with floats, batched float arrays, or tangent-carrying duals.
Branch conditions always read the primal value (``value_of``), which keeps
random-stream consumption and branch selection identical across modes.
"""

from __future__ import annotations

import numpy as np


def value_of(x):
    """Primal value of a scalar-like (Dual -> value channel, else identity)."""
    from .dual import Dual

    if isinstance(x, Dual):
        return x.value
    return x


def constant_like(template, value):
    """A constant with the same batch shape / tangent width as ``template``."""
    from .dual import Dual

    if isinstance(template, Dual):
        return Dual(np.full_like(template.value, value), np.zeros_like(template.tangent))
    if isinstance(template, np.ndarray):
        return np.full_like(template, value)
    return float(value)


def where(cond, a, b):
    """Elementwise branch; for duals the tangent follows the chosen branch."""
    from .dual import Dual

    if isinstance(a, Dual) or isinstance(b, Dual):
        a = a if isinstance(a, Dual) else Dual.constant(a, _tangent_width(a, b))
        b = b if isinstance(b, Dual) else Dual.constant(b, _tangent_width(a, b))
        cond = np.asarray(cond)
        return Dual(
            np.where(cond, a.value, b.value),
            np.where(cond[..., None], a.tangent, b.tangent),
        )
    return np.where(cond, a, b)


def _tangent_width(*candidates) -> int:
    from .dual import Dual

    for c in candidates:
        if isinstance(c, Dual):
            return c.tangent.shape[-1]
    raise TypeError("no dual operand found")


def maximum(a, b):
    """max with tangent of the larger argument; ties keep the first argument."""
    return where(value_of(a) >= value_of(b), a, b)


def minimum(a, b):
    """min with tangent of the smaller argument; ties keep the first argument."""
    return where(value_of(a) <= value_of(b), a, b)


def positive_part(x):
    """x+ = max(x, 0); the tangent is zero at exactly x = 0."""
    zero = constant_like(x, 0.0)
    return where(value_of(x) > 0.0, x, zero)


def intpow(x, exponent: int):
    """x**p for integer p >= 1 by repeated multiplication (dual-safe)."""
    out = x
    for _ in range(exponent - 1):
        out = out * x
    return out


def total(values):
    """Sum of an iterable of scalar-likes (0.0 when empty)."""
    values = list(values)
    if not values:
        return 0.0
    out = values[0]
    for v in values[1:]:
        out = out + v
    return out
