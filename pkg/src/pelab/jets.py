"""Second-order truncated jet arithmetic (value, gradient, hessian).

A :class:`Jet2` carries a float value together with its exact first and
second partial derivatives with respect to d chart coordinates, and
propagates them through +, -, *, /, integer powers and sqrt by the chain
rule.  Seeding the coordinates of a point with :meth:`Jet2.variable` and
evaluating a metric component therefore yields machine-precision metric
derivatives, which is exactly what the curvature formulas need.

Hessians stay symmetric by construction (every update is a symmetrized
outer product), so no resymmetrization is ever required.
"""

from __future__ import annotations

import math

import numpy as np

_NUMERIC = (int, float)


class Jet2:
    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: float, grad, hess):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def constant(cls, value: float, dim: int) -> "Jet2":
        return cls(value, np.zeros(dim), np.zeros((dim, dim)))

    @classmethod
    def variable(cls, value: float, index: int, dim: int) -> "Jet2":
        g = np.zeros(dim)
        g[index] = 1.0
        return cls(value, g, np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    def _lift(self, other) -> "Jet2 | None":
        if isinstance(other, Jet2):
            return other
        if isinstance(other, _NUMERIC):
            return Jet2.constant(float(other), self.dim)
        return None

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet2(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet2(self.value - o.value, self.grad - o.grad, self.hess - o.hess)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        cross = np.outer(self.grad, o.grad)
        return Jet2(
            self.value * o.value,
            self.value * o.grad + o.value * self.grad,
            self.value * o.hess + o.value * self.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        if self.value == 0.0:
            raise ZeroDivisionError("jet with zero value part")
        inv = 1.0 / self.value
        outer = np.outer(self.grad, self.grad)
        return Jet2(inv, -(inv**2) * self.grad, -(inv**2) * self.hess + 2 * inv**3 * outer)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("jet powers must have integer exponents")
        if k < 0:
            return self.reciprocal() ** (-k)
        out = Jet2.constant(1.0, self.dim)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sqrt(self) -> "Jet2":
        if self.value <= 0.0:
            raise ValueError("jet sqrt needs a positive value part")
        s = math.sqrt(self.value)
        outer = np.outer(self.grad, self.grad)
        return Jet2(s, self.grad / (2 * s), self.hess / (2 * s) - outer / (4 * s**3))

    def __repr__(self):
        return f"Jet2({self.value!r}, grad={self.grad!r})"


def sqrt(x):
    """sqrt working on floats and jets alike."""
    if isinstance(x, Jet2):
        return x.sqrt()
    return math.sqrt(x)


def seed_point(point, dim: int | None = None) -> list[Jet2]:
    """Coordinates of a point as jet variables."""
    values = list(point)
    d = len(values) if dim is None else dim
    return [Jet2.variable(float(v), i, d) for i, v in enumerate(values)]


def laurent_eval(coeffs: dict[int, float], x):
    """Evaluate sum_k c_k x^k for float or jet x (term by term)."""
    total = 0.0
    for e, c in coeffs.items():
        total = total + c * x**e
    return total
