"""First-order jets a + b*eps with eps^2 = 0, used as a drop-in
coefficient ring for directional derivatives of polynomial maps."""

from __future__ import annotations

from fractions import Fraction


class Jet:
    __slots__ = ("val", "eps")

    def __init__(self, val, eps=0):
        object.__setattr__(self, "val", Fraction(val))
        object.__setattr__(self, "eps", Fraction(eps))

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @staticmethod
    def lift(x):
        if isinstance(x, Jet):
            return x
        return Jet(x)

    def __bool__(self):
        return bool(self.val) or bool(self.eps)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Jet(other)
        if not isinstance(other, Jet):
            return NotImplemented
        return self.val == other.val and self.eps == other.eps

    def __hash__(self):
        return hash((self.val, self.eps))

    def __neg__(self):
        return Jet(-self.val, -self.eps)

    def __add__(self, other):
        other = Jet.lift(other)
        return Jet(self.val + other.val, self.eps + other.eps)

    __radd__ = __add__

    def __sub__(self, other):
        other = Jet.lift(other)
        return Jet(self.val - other.val, self.eps - other.eps)

    def __rsub__(self, other):
        return Jet.lift(other) - self

    def __mul__(self, other):
        other = Jet.lift(other)
        return Jet(self.val * other.val,
                   self.val * other.eps + self.eps * other.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Jet.lift(other)
        if not other.val:
            raise ZeroDivisionError("jet with nilpotent (or zero) unit part")
        v = self.val / other.val
        return Jet(v, (self.eps - v * other.eps) / other.val)

    def __rtruediv__(self, other):
        return Jet.lift(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("jet powers take nonnegative integers")
        out = Jet(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __repr__(self):
        if not self.eps:
            return "Jet(%s)" % self.val
        return "Jet(%s, %s)" % (self.val, self.eps)
