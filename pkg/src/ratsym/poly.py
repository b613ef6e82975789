"""Dense univariate polynomials over the multiquadratic tower."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property

import sympy

from .errors import DivisionByZero
from .field import ONE, ZERO, TowerElement, elem

_Z = sympy.Symbol("z")


class Poly:
    """Polynomial with coefficients listed lowest degree first.

    Trailing zeros are stripped, so the zero polynomial has no coefficients
    and degree -1.
    """

    def __init__(self, coeffs=()):
        cs = [elem(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[TowerElement, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, cs: list) -> Poly:
        while cs and not cs[-1]:
            cs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(cs)
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> Poly:
        return cls([0] * degree + [coeff])

    @classmethod
    def z(cls) -> Poly:
        return cls([0, 1])

    # --- inspection ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> TowerElement:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, i: int) -> TowerElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def elements(self):
        return [c for c in self.coeffs if c]

    # --- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (TowerElement, int)) or not isinstance(other, Poly):
            c = _scalar(other)
            if c is NotImplemented:
                return NotImplemented
            if not c:
                return Poly._raw([])
            return Poly._raw([x * c for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw([])
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly._raw(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result, base = Poly([1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        inv = other.lc.inverse()
        if len(r) - 1 < db:
            return Poly._raw([]), self
        q = [ZERO] * (len(r) - db)
        bc = other.coeffs
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db]
            if not c:
                continue
            c = c * inv
            q[k] = c
            for j, y in enumerate(bc):
                if y:
                    r[k + j] = r[k + j] - c * y
        return Poly._raw(q), Poly._raw(r[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("polynomial division is not exact")
        return q

    def scale(self, c) -> Poly:
        return self * elem(c)

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        lc = self.lc
        if lc == 1:
            return self
        inv = lc.inverse()
        return Poly._raw([c * inv for c in self.coeffs])

    def derivative(self) -> Poly:
        return Poly._raw([c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        x = elem(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: Poly) -> Poly:
        """self(other(z))."""
        acc = Poly._raw([])
        for c in reversed(self.coeffs):
            acc = acc * other + Poly._raw([c])
        return acc

    def reversed_to(self, n: int) -> Poly:
        """z**n * self(1/z) for n >= degree."""
        cs = list(self.coeffs) + [ZERO] * (n + 1 - len(self.coeffs))
        return Poly._raw(cs[::-1])

    def substitute_scale(self, c) -> Poly:
        """self(c*z)."""
        c = elem(c)
        out, p = [], ONE
        for a in self.coeffs:
            out.append(a * p)
            p = p * c
        return Poly._raw(out)

    def homogeneous_substitute(self, num: Poly, den: Poly, n: int) -> Poly:
        """den**n * self(num/den) for n >= degree."""
        if n < self.degree:
            raise ValueError("homogenizing degree below polynomial degree")
        num_pows = [Poly([1])]
        for _ in range(n):
            num_pows.append(num_pows[-1] * num)
        den_pows = [Poly([1])]
        for _ in range(n):
            den_pows.append(den_pows[-1] * den)
        acc = Poly._raw([])
        for i, c in enumerate(self.coeffs):
            if c:
                acc = acc + (num_pows[i] * den_pows[n - i]) * c
        return acc

    # --- structure ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        c = _scalar(other)
        if c is NotImplemented:
            return NotImplemented
        return self.coeffs == ((c,) if c else ())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return poly_str(self, "z")

    def to_sympy(self, var=_Z):
        return sum((c.to_sympy() * var ** i for i, c in enumerate(self.coeffs)), sympy.Integer(0))

    @classmethod
    def from_sympy(cls, expr, var=_Z) -> Poly:
        p = sympy.Poly(expr, var)
        return cls([TowerElement.from_sympy(c) for c in reversed(p.all_coeffs())])

    @cached_property
    def radicands(self) -> frozenset:
        out = set()
        for c in self.coeffs:
            out.update(c.radicands)
        return frozenset(out)


def _scalar(x):
    if isinstance(x, TowerElement):
        return x
    try:
        return elem(x)
    except TypeError:
        return NotImplemented


def _coerce(x):
    if isinstance(x, Poly):
        return x
    c = _scalar(x)
    if c is NotImplemented:
        return NotImplemented
    return Poly._raw([c])


def _coeff_text(c: TowerElement) -> str:
    text = str(c)
    if len(c.coeffs) > 1:
        return f"({text})"
    return text


def poly_str(p: Poly, var: str = "z") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(_coeff_text(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{_coeff_text(c)}*{mono}")
    text = terms[0]
    for t in terms[1:]:
        text += " - " + t[1:] if t.startswith("-") else " + " + t
    return text


# --- named operations -------------------------------------------------

def _rational(*ps: Poly) -> bool:
    return all(c.is_rational() for p in ps for c in p.coeffs)


def _to_qq(p: Poly) -> sympy.Poly:
    coeffs = [sympy.QQ(c.rational().numerator, c.rational().denominator) for c in reversed(p.coeffs)] or [sympy.QQ(0)]
    return sympy.Poly.from_list(coeffs, _Z, domain=sympy.QQ)


def _from_qq(p: sympy.Poly) -> Poly:
    return Poly([Fraction(int(c.numerator), int(c.denominator)) for c in reversed(p.rep.to_list())])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    if _rational(a, b) and not (a.is_zero() and b.is_zero()):
        # sympy's modular gcd avoids coefficient swell over Q
        return _from_qq(_to_qq(a).gcd(_to_qq(b))).monic()
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic square-free factors with their multiplicities."""
    if p.degree <= 0:
        return []
    p = p.monic()
    dp = p.derivative()
    g = poly_gcd(p, dp)
    b = p.exact_div(g)
    c = dp.exact_div(g) if not g.is_zero() else dp
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    out = Poly([1])
    for f, _ in squarefree_decomposition(p):
        out = out * f
    return out


def resultant(a: Poly, b: Poly) -> TowerElement:
    """Resultant by the Euclidean algorithm."""
    if a.is_zero() or b.is_zero():
        return ZERO
    if a.degree == 0:
        return a.lc ** b.degree
    if b.degree == 0:
        return b.lc ** a.degree
    if _rational(a, b):
        r = _to_qq(a).resultant(_to_qq(b))
        return TowerElement(Fraction(int(r.numerator), int(r.denominator)))
    res = ONE
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return res * b.lc ** da
        r = a.divmod(b)[1]
        if r.is_zero():
            return ZERO
        dr = r.degree
        sign = -1 if (da * db) % 2 else 1
        res = res * sign * b.lc ** (da - dr)
        a, b = b, r
