"""
Second-order forward-mode dual numbers.

A ``Dual2`` carries ``(val, d1, d2)``: the value of an expression and its
first and second derivatives with respect to a single seeded variable. The
second slot holds f'' itself, not f''/2.

Every kernel in ``besselk_ad.numerics`` is written against the module-level
functions below (``exp``, ``log``, ``sqrt`` ...), which accept either plain
floats or ``Dual2`` values. Passing floats gives the ordinary evaluation;
passing a seeded dual gives the two order-derivatives for free.
"""

from __future__ import annotations

import math
from typing import Sequence, Tuple, Union

from besselk_ad.numerics.errors import BesselDomainError

Real = Union[float, int]


class Dual2:
    __slots__ = ("val", "d1", "d2")

    def __init__(self, val: float, d1: float = 0.0, d2: float = 0.0):
        self.val = float(val)
        self.d1 = float(d1)
        self.d2 = float(d2)

    def __repr__(self) -> str:
        return f"Dual2({self.val!r}, {self.d1!r}, {self.d2!r})"

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.val, self.d1, self.d2)

    def __float__(self) -> float:
        return self.val

    # Equality is slot-wise; ordering looks at the primal value only.
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dual2):
            return self.as_tuple() == other.as_tuple()
        if isinstance(other, (int, float)):
            return self.val == other and self.d1 == 0.0 and self.d2 == 0.0
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __lt__(self, other: Scalar) -> bool:
        return self.val < value(other)

    def __le__(self, other: Scalar) -> bool:
        return self.val <= value(other)

    def __gt__(self, other: Scalar) -> bool:
        return self.val > value(other)

    def __ge__(self, other: Scalar) -> bool:
        return self.val >= value(other)

    def __neg__(self) -> Dual2:
        return Dual2(-self.val, -self.d1, -self.d2)

    def __pos__(self) -> Dual2:
        return self

    def __abs__(self) -> Dual2:
        if self.val > 0.0:
            return self
        if self.val < 0.0:
            return -self
        # subgradient choice at the kink
        return Dual2(0.0, 0.0, 0.0)

    def __add__(self, other: Scalar) -> Dual2:
        if isinstance(other, Dual2):
            return Dual2(self.val + other.val, self.d1 + other.d1, self.d2 + other.d2)
        return Dual2(self.val + other, self.d1, self.d2)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> Dual2:
        if isinstance(other, Dual2):
            return Dual2(self.val - other.val, self.d1 - other.d1, self.d2 - other.d2)
        return Dual2(self.val - other, self.d1, self.d2)

    def __rsub__(self, other: Real) -> Dual2:
        return Dual2(other - self.val, -self.d1, -self.d2)

    def __mul__(self, other: Scalar) -> Dual2:
        if isinstance(other, Dual2):
            a, a1, a2 = self.val, self.d1, self.d2
            b, b1, b2 = other.val, other.d1, other.d2
            return Dual2(a * b, a1 * b + a * b1, a2 * b + 2.0 * a1 * b1 + a * b2)
        return Dual2(self.val * other, self.d1 * other, self.d2 * other)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> Dual2:
        if isinstance(other, Dual2):
            b = other.val
            if b == 0.0:
                raise BesselDomainError("division by a zero-valued dual")
            q = self.val / b
            q1 = (self.d1 - q * other.d1) / b
            q2 = (self.d2 - 2.0 * q1 * other.d1 - q * other.d2) / b
            return Dual2(q, q1, q2)
        if other == 0:
            raise BesselDomainError("division by zero")
        return Dual2(self.val / other, self.d1 / other, self.d2 / other)

    def __rtruediv__(self, other: Real) -> Dual2:
        b = self.val
        if b == 0.0:
            raise BesselDomainError("division by a zero-valued dual")
        q = other / b
        q1 = -q * self.d1 / b
        q2 = (-2.0 * q1 * self.d1 - q * self.d2) / b
        return Dual2(q, q1, q2)

    def __pow__(self, exponent: Scalar) -> Dual2:
        if isinstance(exponent, Dual2):
            return exp(exponent * log(self))
        return _pow_const(self, exponent)

    def __rpow__(self, base: Real) -> Dual2:
        if base <= 0:
            raise BesselDomainError(f"non-positive base {base} with dual exponent")
        return exp(self * math.log(base))


Scalar = Union[Dual2, float, int]


def seed(x: Real) -> Dual2:
    """Independent variable: (x, 1, 0)."""
    return Dual2(x, 1.0, 0.0)


def lift(c: Real) -> Dual2:
    """Constant: (c, 0, 0)."""
    return Dual2(c, 0.0, 0.0)


def is_dual(x: object) -> bool:
    return isinstance(x, Dual2)


def value(x: Scalar) -> float:
    return x.val if isinstance(x, Dual2) else float(x)


def slots(x: Scalar) -> Tuple[float, ...]:
    return x.as_tuple() if isinstance(x, Dual2) else (float(x),)


def small_relative(step: Scalar, total: Scalar, tol: float) -> bool:
    """True when every slot of ``step`` is within ``tol`` relative of ``total``."""
    return all(
        abs(s) <= tol * abs(t) for s, t in zip(slots(step), slots(total))
    )


def negligible(terms: Sequence[Scalar], total: Scalar, tol: float) -> bool:
    """Slot-wise: sum of |term| over ``terms`` is within ``tol`` relative of ``total``."""
    total_slots = slots(total)
    term_slots = [slots(t) for t in terms]
    for i, t in enumerate(total_slots):
        size = sum(abs(ts[i]) if i < len(ts) else 0.0 for ts in term_slots)
        if size > tol * abs(t):
            return False
    return True


def chain(a: Dual2, f: float, f1: float, f2: float) -> Dual2:
    return Dual2(f, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2)


def _pow_const(a: Dual2, c: Real) -> Dual2:
    if c == 0:
        return Dual2(1.0)
    if c == 1:
        return a
    if c == 2:
        return a * a
    x = a.val
    if x < 0.0 and not float(c).is_integer():
        raise BesselDomainError(f"negative base {x} with non-integer exponent {c}")
    if x == 0.0 and c < 2:
        raise BesselDomainError(f"derivative of x**{c} is unbounded at 0")
    return chain(a, x**c, c * x ** (c - 1), c * (c - 1) * x ** (c - 2))


def exp(x: Scalar) -> Scalar:
    if isinstance(x, Dual2):
        e = math.exp(x.val)
        return chain(x, e, e, e)
    return math.exp(x)


def log(x: Scalar) -> Scalar:
    v = value(x)
    if v <= 0.0:
        raise BesselDomainError(f"log of non-positive value {v}")
    if isinstance(x, Dual2):
        r = 1.0 / v
        return chain(x, math.log(v), r, -r * r)
    return math.log(v)


def sqrt(x: Scalar) -> Scalar:
    v = value(x)
    if v < 0.0:
        raise BesselDomainError(f"sqrt of negative value {v}")
    if isinstance(x, Dual2):
        if v == 0.0:
            if x.d1 == 0.0 and x.d2 == 0.0:
                return Dual2(0.0)
            raise BesselDomainError("derivative of sqrt is unbounded at 0")
        s = math.sqrt(v)
        return chain(x, s, 0.5 / s, -0.25 / (s * v))
    return math.sqrt(v)


def sinh(x: Scalar) -> Scalar:
    if isinstance(x, Dual2):
        s, c = math.sinh(x.val), math.cosh(x.val)
        return chain(x, s, c, s)
    return math.sinh(x)


def cosh(x: Scalar) -> Scalar:
    if isinstance(x, Dual2):
        s, c = math.sinh(x.val), math.cosh(x.val)
        return chain(x, c, s, c)
    return math.cosh(x)


def sin(x: Scalar) -> Scalar:
    if isinstance(x, Dual2):
        s, c = math.sin(x.val), math.cos(x.val)
        return chain(x, s, c, -s)
    return math.sin(x)


def cos(x: Scalar) -> Scalar:
    if isinstance(x, Dual2):
        s, c = math.sin(x.val), math.cos(x.val)
        return chain(x, c, -s, -c)
    return math.cos(x)


def fabs(x: Scalar) -> Scalar:
    return abs(x)


def power(x: Scalar, c: Scalar) -> Scalar:
    """x**c for either argument dual; the base must be positive when c is dual."""
    if isinstance(c, Dual2):
        if isinstance(x, Dual2):
            return exp(c * log(x))
        return c.__rpow__(x)
    if isinstance(x, Dual2):
        return _pow_const(x, c)
    if x < 0.0 and not float(c).is_integer():
        raise BesselDomainError(f"negative base {x} with non-integer exponent {c}")
    return x**c
