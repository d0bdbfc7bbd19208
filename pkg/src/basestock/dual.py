"""Forward-mode dual numbers carrying a dense tangent over decision edges.

A :class:`Dual` holds a batch of primal values with shape ``(B,)`` and a
tangent matrix with shape ``(B, n)``, where ``n`` is the number of decision
edges.  Arithmetic propagates tangents by the chain rule; comparisons and
branch predicates read only the primal channel (see ``basestock.scalars``),
so a dual-mode simulation consumes random numbers exactly like a plain one.

Forward mode is a deliberate choice: the decision dimension of every
built-in instance is at most 13, so a dense tangent costs O(n) per
arithmetic operation and needs no tape.
"""

from __future__ import annotations

import numpy as np


class Dual:
    __slots__ = ("value", "tangent")

    # Keep numpy from consuming Duals into object arrays; binary ops with
    # ndarrays then dispatch to the reflected operators below.
    __array_ufunc__ = None

    def __init__(self, value: np.ndarray, tangent: np.ndarray) -> None:
        self.value = np.asarray(value, dtype=np.float64)
        self.tangent = np.asarray(tangent, dtype=np.float64)

    @classmethod
    def constant(cls, value, width: int) -> "Dual":
        value = np.asarray(value, dtype=np.float64)
        return cls(value, np.zeros(value.shape + (width,)))

    @property
    def width(self) -> int:
        return self.tangent.shape[-1]

    def _coerce(self, other) -> "Dual":
        if isinstance(other, Dual):
            return other
        return Dual.constant(np.broadcast_to(np.asarray(other, dtype=np.float64), self.value.shape), self.width)

    def __add__(self, other):
        other = self._coerce(other)
        return Dual(self.value + other.value, self.tangent + other.tangent)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Dual(self.value - other.value, self.tangent - other.tangent)

    def __rsub__(self, other):
        other = self._coerce(other)
        return Dual(other.value - self.value, other.tangent - self.tangent)

    def __mul__(self, other):
        other = self._coerce(other)
        return Dual(
            self.value * other.value,
            self.tangent * other.value[..., None] + other.tangent * self.value[..., None],
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        value = self.value / other.value
        tangent = (
            self.tangent * other.value[..., None]
            - other.tangent * self.value[..., None]
        ) / (other.value * other.value)[..., None]
        return Dual(value, tangent)

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __neg__(self):
        return Dual(-self.value, -self.tangent)

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 1:
            raise ValueError("Dual.__pow__ supports integer exponents >= 1")
        out = self
        for _ in range(exponent - 1):
            out = out * self
        return out

    # Comparisons read the primal channel only.
    def __lt__(self, other):
        return self.value < _plain(other)

    def __le__(self, other):
        return self.value <= _plain(other)

    def __gt__(self, other):
        return self.value > _plain(other)

    def __ge__(self, other):
        return self.value >= _plain(other)

    def __repr__(self) -> str:
        return f"Dual(value={self.value!r}, tangent={self.tangent!r})"


def _plain(x):
    return x.value if isinstance(x, Dual) else x


def seed_ouls(ouls, batch: int = 1) -> list[Dual]:
    """Lift an order-up-to vector into duals with identity tangents.

    Component ``e`` gets primal value ``ouls[e]`` and tangent equal to unit
    vector ``e``, replicated across the episode batch.
    """
    ouls = np.asarray(ouls, dtype=np.float64)
    if ouls.ndim != 1:
        raise ValueError("expected a 1-d vector of order-up-to levels")
    n = ouls.shape[0]
    out = []
    for e in range(n):
        value = np.full(batch, ouls[e])
        tangent = np.zeros((batch, n))
        tangent[:, e] = 1.0
        out.append(Dual(value, tangent))
    return out
