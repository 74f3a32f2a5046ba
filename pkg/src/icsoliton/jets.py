"""Second-order forward-mode scalars (truncated Taylor jets).

A Jet carries (value, first derivative, second derivative) with respect to a
single scalar seed and propagates them exactly through arithmetic and the
elementary functions used elsewhere in the package.  This is the derivative
oracle for warping functions given as expressions and for gradient /
curvature cross-checks: no step-size tuning, exact to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Jet:
    val: float
    d1: float = 0.0
    d2: float = 0.0

    @staticmethod
    def seed(x):
        """Jet representing the independent variable at x."""
        return Jet(float(x), 1.0, 0.0)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.d1 + other.d1, self.d2 + other.d2)
        return Jet(self.val + other, self.d1, self.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.d1, -self.d2)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(
                self.val * other.val,
                self.d1 * other.val + self.val * other.d1,
                self.d2 * other.val + 2.0 * self.d1 * other.d1 + self.val * other.d2,
            )
        return Jet(self.val * other, self.d1 * other, self.d2 * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other._recip()
        return Jet(self.val / other, self.d1 / other, self.d2 / other)

    def __rtruediv__(self, other):
        return self._recip() * other

    def _recip(self):
        v = 1.0 / self.val
        d1 = -self.d1 * v * v
        d2 = (2.0 * self.d1 * self.d1 / self.val - self.d2) * v * v
        return Jet(v, d1, d2)

    def __pow__(self, p):
        if isinstance(p, Jet):
            raise TypeError("jet-valued exponents are not supported")
        if p == int(p) and p >= 0:
            # integer powers stay valid at nonpositive base
            n = int(p)
            out = Jet(1.0)
            base = self
            while n:
                if n & 1:
                    out = out * base
                base = base * base
                n >>= 1
            return out
        v = self.val ** p
        dv = p * self.val ** (p - 1.0)
        ddv = p * (p - 1.0) * self.val ** (p - 2.0)
        return self._chain(v, dv, ddv)

    def _chain(self, v, dv, ddv):
        """Compose an outer scalar function given by (f, f', f'') at self.val."""
        return Jet(v, dv * self.d1, ddv * self.d1 * self.d1 + dv * self.d2)

    def __float__(self):
        return float(self.val)

    def __repr__(self):
        return f"Jet({self.val!r}, {self.d1!r}, {self.d2!r})"


def _lift(fn_float, fn_jet):
    def wrapped(x):
        if isinstance(x, Jet):
            return fn_jet(x)
        return fn_float(x)

    return wrapped


sin = _lift(math.sin, lambda x: x._chain(math.sin(x.val), math.cos(x.val), -math.sin(x.val)))
cos = _lift(math.cos, lambda x: x._chain(math.cos(x.val), -math.sin(x.val), -math.cos(x.val)))
sinh = _lift(math.sinh, lambda x: x._chain(math.sinh(x.val), math.cosh(x.val), math.sinh(x.val)))
cosh = _lift(math.cosh, lambda x: x._chain(math.cosh(x.val), math.sinh(x.val), math.cosh(x.val)))
tanh = _lift(math.tanh, lambda x: x._chain(math.tanh(x.val), 1.0 - math.tanh(x.val) ** 2,
                                           -2.0 * math.tanh(x.val) * (1.0 - math.tanh(x.val) ** 2)))
exp = _lift(math.exp, lambda x: x._chain(math.exp(x.val), math.exp(x.val), math.exp(x.val)))
log = _lift(math.log, lambda x: x._chain(math.log(x.val), 1.0 / x.val, -1.0 / x.val ** 2))
sqrt = _lift(math.sqrt, lambda x: x ** 0.5)


def derivatives(fn, x):
    """(f(x), f'(x), f''(x)) for a jet-generic callable fn."""
    j = fn(Jet.seed(x))
    if isinstance(j, Jet):
        return j.val, j.d1, j.d2
    # fn ignored the seed (constant function)
    return float(j), 0.0, 0.0
