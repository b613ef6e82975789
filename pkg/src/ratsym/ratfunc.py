"""Rational functions in lowest terms and points of the Riemann sphere."""
from __future__ import annotations

import os

from .errors import DegreeBudgetExceeded, ZeroDenominator
from .field import ONE, ZERO, TowerElement, elem
from .poly import Poly, poly_gcd, poly_str

DEFAULT_DEGREE_BUDGET = 4096


def default_budget() -> int:
    env = os.environ.get("RATSYM_BUDGET")
    return int(env) if env else DEFAULT_DEGREE_BUDGET


class SpherePoint:
    """A point (x : y) of the projective line, normalized to (x : 1) or (1 : 0)."""

    __slots__ = ("x", "y")

    def __init__(self, x, y=1):
        x, y = elem(x), elem(y)
        if not x and not y:
            raise ValueError("(0 : 0) is not a point")
        if y:
            if y != 1:
                x = x / y
            self.x, self.y = x, ONE
        else:
            self.x, self.y = ONE, ZERO

    @property
    def is_infinity(self) -> bool:
        return not self.y

    @property
    def value(self) -> TowerElement | None:
        return None if self.is_infinity else self.x

    def __eq__(self, other):
        if not isinstance(other, SpherePoint):
            try:
                other = SpherePoint(other)
            except TypeError:
                return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def sort_key(self):
        return (1, ()) if self.is_infinity else (0, self.x.sort_key())

    def __repr__(self):
        return f"SpherePoint({self})"

    def __str__(self):
        return "oo" if self.is_infinity else str(self.x)


INFINITY = SpherePoint(1, 0)


def point(x) -> SpherePoint:
    """Coerce a number, ``"oo"`` or a SpherePoint."""
    if isinstance(x, SpherePoint):
        return x
    if x is None or (isinstance(x, str) and x in ("oo", "inf", "infinity")):
        return INFINITY
    return SpherePoint(x)


class RatFunc:
    """num/den with gcd 1 and monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=1):
        num = num if isinstance(num, Poly) else Poly(num if isinstance(num, (list, tuple)) else [num])
        den = den if isinstance(den, Poly) else Poly(den if isinstance(den, (list, tuple)) else [den])
        if den.is_zero():
            raise ZeroDenominator("denominator is zero")
        if num.is_zero():
            self.num, self.den = Poly([]), Poly([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            inv = den.lc.inverse()
            self.num, self.den = num * inv, den * inv
        self._hash = None

    @classmethod
    def _coprime(cls, num: Poly, den: Poly) -> RatFunc:
        """Build from a pair already known to be coprime."""
        if den.is_zero():
            raise ZeroDenominator("denominator is zero")
        obj = cls.__new__(cls)
        if num.is_zero():
            obj.num, obj.den = Poly([]), Poly([1])
        else:
            inv = den.lc.inverse()
            obj.num, obj.den = num * inv, den * inv
        obj._hash = None
        return obj

    @classmethod
    def z(cls) -> RatFunc:
        return cls(Poly.z())

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def is_constant(self) -> bool:
        return self.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def radicands(self) -> frozenset:
        return self.num.radicands | self.den.radicands

    def elements(self):
        return self.num.elements() + self.den.elements()

    # --- evaluation ---------------------------------------------------
    def __call__(self, p) -> SpherePoint:
        p = point(p)
        n = self.degree
        if p.is_infinity:
            return SpherePoint(self.num[n], self.den[n])
        x = p.x
        return SpherePoint(self.num(x), self.den(x))

    # --- arithmetic used by the expression parser --------------------
    def __add__(self, other):
        other = _coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._coprime(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.num.is_zero():
            raise ZeroDenominator("division by the zero function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            if self.num.is_zero():
                raise ZeroDenominator("zero raised to a negative power")
            return RatFunc._coprime(self.den ** (-e), self.num ** (-e))
        return RatFunc._coprime(self.num ** e, self.den ** e)

    def compose(self, other: RatFunc) -> RatFunc:
        return rf_compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        return rf_str(self)


def _coerce(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    return RatFunc(Poly([elem(x)]))


def rf_str(f: RatFunc, var: str = "z") -> str:
    num = poly_str(f.num, var)
    if f.den == 1:
        return num
    if len(f.num.support()) > 1:
        num = f"({num})"
    den = poly_str(f.den, var)
    if len(f.den.support()) > 1 or f.den.lc != 1 or f.den.degree > 1:
        den = f"({den})"
    return f"{num}/{den}"


def rf_make(num, den=1) -> RatFunc:
    """Reduce num/den to lowest terms with a monic denominator."""
    return RatFunc(num, den)


def rf_eval(f: RatFunc, p) -> SpherePoint:
    return f(p)


def rf_compose(a: RatFunc, b: RatFunc, budget: int | None = None) -> RatFunc:
    """a(b(z)), computed by homogenized substitution."""
    budget = default_budget() if budget is None else budget
    degree = a.degree * b.degree if b.degree else 0
    if degree > budget:
        raise DegreeBudgetExceeded(degree, budget)
    if b.is_constant():
        value = a(SpherePoint(b.num[0], b.den[0]))
        if value.is_infinity:
            raise ZeroDenominator("composition is identically infinite")
        return RatFunc(Poly([value.x]))
    n = a.degree
    num = a.num.homogeneous_substitute(b.num, b.den, n)
    den = a.den.homogeneous_substitute(b.num, b.den, n)
    out = RatFunc._coprime(num, den)
    if out.degree != degree:
        raise AssertionError(f"degree {out.degree} after composition, expected {degree}")
    return out


def rf_iterate(a: RatFunc, k: int, budget: int | None = None) -> RatFunc:
    """The k-th iterate a∘a∘...∘a (k >= 1)."""
    if k < 1:
        raise ValueError("iterate index must be at least 1")
    budget = default_budget() if budget is None else budget
    if a.degree ** k > budget:
        raise DegreeBudgetExceeded(a.degree ** k, budget)
    out = a
    for _ in range(k - 1):
        out = rf_compose(a, out, budget)
    return out


def iterate_point(a: RatFunc, p, k: int) -> SpherePoint:
    p = point(p)
    for _ in range(k):
        p = a(p)
    return p
