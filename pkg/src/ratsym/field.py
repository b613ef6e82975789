"""Exact arithmetic in multiquadratic fields.

Every element is stored as a finite sum ``sum c_s * sqrt(s)`` with rational
coefficients ``c_s`` and distinct square-free integers ``s``.  Negative
radicands use the convention ``sqrt(-k) = i*sqrt(k)`` so ``sqrt(-1)`` is
``i``.  With this basis every field generated by finitely many square roots
of integers shares one representation, and equality is structural.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from numbers import Rational

import sympy

from .errors import DepthCapExceeded, DependentGenerator, DivisionByZero, SqrtNotInTower

DEFAULT_DEPTH_CAP = 6


@lru_cache(maxsize=None)
def prime_signature(d: int) -> frozenset:
    """Odd-multiplicity primes of ``d`` with -1 standing for the sign."""
    if d == 0:
        raise ValueError("zero has no square class")
    sig = set()
    if d < 0:
        sig.add(-1)
    for p, e in sympy.factorint(abs(d)).items():
        if e % 2:
            sig.add(p)
    return frozenset(sig)


@lru_cache(maxsize=None)
def squarefree_decompose(d: int) -> tuple[int, int]:
    """Write ``d = f**2 * s`` with ``s`` square-free (sign kept in ``s``)."""
    if d == 0:
        return 0, 0
    f = 1
    s = -1 if d < 0 else 1
    for p, e in sympy.factorint(abs(d)).items():
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    return f, s


@lru_cache(maxsize=None)
def _mul_keys(s: int, t: int) -> tuple[int, int]:
    """sqrt(s) * sqrt(t) = factor * sqrt(key)."""
    a, b = abs(s), abs(t)
    g = gcd(a, b)
    key = (a // g) * (b // g)
    negs = (s < 0) + (t < 0)
    if negs == 2:
        return -g, key
    if negs == 1:
        return g, -key
    return g, key


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class TowerElement:
    """Immutable element of a multiquadratic field."""

    __slots__ = ("_c", "_hash")

    def __init__(self, value=0):
        if isinstance(value, TowerElement):
            self._c = value._c
        elif isinstance(value, dict):
            self._c = {k: v for k, v in value.items() if v}
        else:
            q = _as_fraction(value)
            self._c = {1: q} if q else {}
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: dict) -> TowerElement:
        obj = cls.__new__(cls)
        obj._c = coeffs
        obj._hash = None
        return obj

    @classmethod
    def sqrt_int(cls, d: int) -> TowerElement:
        """The principal square root of an integer (``i*sqrt(|d|)`` when negative)."""
        if d == 0:
            return ZERO
        f, s = squarefree_decompose(d)
        return cls._raw({s: Fraction(f)})

    # --- inspection ---------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items(), key=lambda kv: _key_order(kv[0]))

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(self._c, key=_key_order))

    def is_zero(self) -> bool:
        return not self._c

    def is_rational(self) -> bool:
        return not self._c or (len(self._c) == 1 and 1 in self._c)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c.get(1, Fraction(0))

    def primes(self) -> frozenset:
        """Primes (and -1) occurring in the radicands."""
        out = set()
        for k in self._c:
            if k != 1:
                out |= prime_signature(k)
        return frozenset(out)

    def sort_key(self):
        return tuple((_key_order(k), v) for k, v in self.items())

    # --- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._c:
            return self
        out = dict(self._c)
        for k, v in other._c.items():
            w = out.get(k, 0) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return TowerElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement._raw({k: -v for k, v in self._c.items()})

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
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return ZERO
        if len(b) == 1 and 1 in b:
            q = b[1]
            return TowerElement._raw({k: v * q for k, v in a.items()})
        if len(a) == 1 and 1 in a:
            q = a[1]
            return TowerElement._raw({k: v * q for k, v in b.items()})
        out: dict = {}
        for s, u in a.items():
            for t, v in b.items():
                if s == 1:
                    f, key = 1, t
                elif t == 1:
                    f, key = 1, s
                else:
                    f, key = _mul_keys(s, t)
                w = out.get(key, 0) + f * u * v
                if w:
                    out[key] = w
                else:
                    out.pop(key, None)
        return TowerElement._raw(out)

    __rmul__ = __mul__

    def inverse(self) -> TowerElement:
        if not self._c:
            raise DivisionByZero("division by zero in tower")
        if self.is_rational():
            return TowerElement._raw({1: 1 / self._c[1]})
        p = _split_prime(self)
        conj = self.flip(p)
        return conj * (self * conj).inverse()

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def flip(self, p: int) -> TowerElement:
        """Galois automorphism sqrt(p) -> -sqrt(p) for a prime ``p`` or -1."""
        out = {}
        for k, v in self._c.items():
            odd = (k < 0) if p == -1 else (k % p == 0)
            out[k] = -v if odd else v
        return TowerElement._raw(out)

    def conjugate(self) -> TowerElement:
        """Complex conjugation."""
        return self.flip(-1)

    # --- comparisons --------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self._c.get(1, 0))
            else:
                self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    # --- conversion ---------------------------------------------------
    def __repr__(self):
        return f"TowerElement({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, v in self.items():
            parts.append(_term_str(k, v))
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def to_sympy(self):
        return sympy.Add(*[sympy.Rational(v.numerator, v.denominator) * _sympy_root(k) for k, v in self._c.items()])

    @classmethod
    def from_sympy(cls, expr) -> TowerElement:
        expr = sympy.expand(sympy.nsimplify(expr) if expr.has(sympy.Float) else expr)
        total = ZERO
        for term in sympy.Add.make_args(expr):
            coeff, rest = term.as_coeff_Mul()
            if not coeff.is_Rational:
                raise ValueError(f"non-rational coefficient in {expr}")
            value = cls(Fraction(int(coeff.p), int(coeff.q)))
            for factor in sympy.Mul.make_args(rest):
                if factor == 1:
                    continue
                if factor == sympy.I:
                    value = value * I
                elif factor.is_Pow and factor.exp == sympy.Rational(1, 2) and factor.base.is_Integer:
                    value = value * cls.sqrt_int(int(factor.base))
                elif factor.is_Pow and factor.exp == sympy.Rational(-1, 2) and factor.base.is_Integer:
                    value = value / cls.sqrt_int(int(factor.base))
                elif factor.is_Rational:
                    value = value * cls(Fraction(int(factor.p), int(factor.q)))
                else:
                    raise ValueError(f"{factor} is not in a multiquadratic tower")
            total = total + value
        return total

    def approx(self) -> complex:
        """Floating-point value, for display only."""
        z = 0j
        for k, v in self._c.items():
            r = abs(k) ** 0.5
            z += float(v) * (1j * r if k < 0 else r)
        return z


def _key_order(k: int):
    return (abs(k), k < 0)


def _term_str(k: int, v: Fraction) -> str:
    coeff = str(v)
    if k == 1:
        return coeff
    root = "i" if k == -1 else (f"i*sqrt({-k})" if k < 0 else f"sqrt({k})")
    if v == 1:
        return root
    if v == -1:
        return "-" + root
    return f"{coeff}*{root}"


def _sympy_root(k: int):
    if k == 1:
        return sympy.Integer(1)
    if k < 0:
        return sympy.I * sympy.sqrt(-k)
    return sympy.sqrt(k)


def _coerce(x):
    if isinstance(x, TowerElement):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return TowerElement(x)
    return NotImplemented


def _split_prime(x: TowerElement) -> int:
    keys = [k for k in x._c if k != 1]
    if any(k < 0 for k in keys):
        return -1
    return min(min(p for p in prime_signature(k)) for k in keys)


ZERO = TowerElement._raw({})
ONE = TowerElement._raw({1: Fraction(1)})
I = TowerElement._raw({-1: Fraction(1)})


def elem(x) -> TowerElement:
    """Coerce ints, Fractions and TowerElements to TowerElement."""
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {x!r} to a tower element")
    return out


# --- towers ------------------------------------------------------------

class Tower:
    """A tower Q(sqrt(d_1), ..., sqrt(d_k)) with a depth cap.

    Generators are square-free integers, -1 standing for ``i``.  They are
    kept independent over GF(2) so the depth equals the number of
    generators and the field has degree ``2**depth``.
    """

    def __init__(self, generators=(), cap: int = DEFAULT_DEPTH_CAP):
        self.cap = cap
        self.generators: tuple[int, ...] = ()
        self._basis: dict = {}
        for d in generators:
            self._push(d)

    def _push(self, d: int):
        f, s = squarefree_decompose(int(d))
        if s == 0:
            raise ValueError("cannot adjoin sqrt(0)")
        vec = self._reduce(prime_signature(s))
        if not vec:
            raise DependentGenerator(f"sqrt({d}) already lies in {self}")
        if len(self.generators) >= self.cap:
            raise DepthCapExceeded(f"adjoining sqrt({d}) exceeds depth cap {self.cap}")
        self._basis[max(vec, key=_prime_order)] = vec
        self.generators = self.generators + (s,)

    def _reduce(self, vec: frozenset) -> frozenset:
        vec = set(vec)
        while vec:
            p = max(vec, key=_prime_order)
            if p not in self._basis:
                break
            vec ^= self._basis[p]
        return frozenset(vec)

    @property
    def depth(self) -> int:
        return len(self.generators)

    def adjoin(self, d: int) -> Tower:
        t = Tower(self.generators, self.cap)
        t._push(d)
        return t

    def contains_radicand(self, k: int) -> bool:
        return k == 1 or not self._reduce(prime_signature(k))

    def contains(self, x) -> bool:
        return all(self.contains_radicand(k) for k in elem(x)._c)

    def extended_by(self, *elements) -> Tower:
        """Smallest extension of this tower containing the given elements."""
        t = self
        for x in elements:
            for k in elem(x).radicands:
                if not t.contains_radicand(k):
                    t = t.adjoin(k)
        return t

    def sympy_generators(self) -> list:
        return [_sympy_root(d) for d in self.generators]

    def __eq__(self, other):
        if not isinstance(other, Tower):
            return NotImplemented
        return self.depth == other.depth and all(other.contains_radicand(d) for d in self.generators)

    def __hash__(self):
        return hash(self.depth)

    def __repr__(self):
        return f"Tower({self.label()})"

    def label(self) -> str:
        if not self.generators:
            return "Q"
        names = ["i" if d == -1 else (f"i*sqrt({-d})" if d < 0 else f"sqrt({d})") for d in self.generators]
        return "Q(" + ", ".join(names) + ")"

    @classmethod
    def of(cls, *elements, cap: int = DEFAULT_DEPTH_CAP) -> Tower:
        return cls((), cap).extended_by(*elements)

    @classmethod
    def parse(cls, text: str, cap: int = DEFAULT_DEPTH_CAP) -> Tower:
        """Parse a generator list such as ``"i,sqrt2,sqrt3"``."""
        t = cls((), cap)
        for raw in text.split(","):
            g = raw.strip().replace(" ", "")
            if not g:
                continue
            if g == "i":
                d = -1
            elif g.startswith("sqrt"):
                body = g[4:].strip("()")
                d = int(body)
            else:
                d = int(g)
            t = t.adjoin(d)
        return t


def _prime_order(p):
    return p


def tower_adjoin(tower: Tower, d: int) -> Tower:
    """Adjoin ``sqrt(d)`` (``d = -1`` for ``i``) to ``tower``."""
    return tower.adjoin(d)


# --- square roots ------------------------------------------------------

def rational_sqrt(q: Fraction) -> TowerElement:
    """sqrt of a rational number as ``c*sqrt(s)``; always exists in the closure."""
    q = Fraction(q)
    if q == 0:
        return ZERO
    num, den = q.numerator, q.denominator
    f, s = squarefree_decompose(num * den)
    return TowerElement._raw({s: Fraction(f, den)})


def _is_square(q: Fraction):
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _split(x: TowerElement, q: int):
    """x = a + sqrt(q) * b with a, b free of the generator q."""
    a, b = {}, {}
    for k, v in x._c.items():
        odd = (k < 0) if q == -1 else (k % q == 0)
        if not odd:
            a[k] = v
        elif q == -1:
            b[-k] = v
        else:
            b[k // q] = v
    return TowerElement._raw(a), TowerElement._raw(b)


def _sqrt_in(x: TowerElement, gens: tuple):
    """A square root of x inside Q(sqrt(p) : p in gens), or None."""
    if not x._c:
        return ZERO
    if not gens:
        r = _is_square(x.rational())
        return None if r is None else TowerElement(r)
    q = gens[-1]
    rest = gens[:-1]
    a, b = _split(x, q)
    root_q = TowerElement.sqrt_int(q)
    if not b._c:
        r = _sqrt_in(a, rest)
        if r is not None:
            return r
        r = _sqrt_in(a * Fraction(1, q), rest)
        return None if r is None else r * root_q
    n = _sqrt_in(a * a - b * b * q, rest)
    if n is None:
        return None
    for s in (n, -n):
        u = _sqrt_in((a + s) * Fraction(1, 2), rest)
        if u is not None and u._c:
            return u + (b / (u * 2)) * root_q
    return None


def _norm_primes(x: TowerElement, limit: int = 10 ** 5) -> set:
    n = x
    for p in sorted(x.primes()):
        n = n * n.flip(p)
    q = n.rational()
    out = set()
    for part in (q.numerator, q.denominator):
        for p in sympy.factorint(abs(part), limit=limit):
            if 1 < p < limit:
                out.add(p)
    return out


def canonical_sign(x: TowerElement) -> TowerElement:
    """Pick the representative of ``{x, -x}`` whose leading coefficient is positive."""
    items = x.items()
    if items and items[0][1] < 0:
        return -x
    return x


def field_sqrt(x, tower: Tower | None = None, extend: bool = True) -> tuple[TowerElement, Tower]:
    """Exact square root of ``x`` and the tower it lives in.

    With ``extend`` the tower may grow (up to its cap) by the generators the
    root needs.  Raises SqrtNotInTower otherwise.
    """
    x = elem(x)
    tower = tower if tower is not None else Tower.of(x)
    if x.is_rational():
        root = rational_sqrt(x.rational())
    else:
        primes = set(x.primes())
        for d in tower.generators:
            primes |= prime_signature(d)
        if extend:
            primes |= {-1, 2} | _norm_primes(x)
        gens = tuple(sorted(primes, key=lambda p: (p != -1, p)))[:10]
        root = _sqrt_in(x, gens)
    if root is None:
        raise SqrtNotInTower(x, _minpoly(x))
    root = canonical_sign(root)
    try:
        needed = tower.extended_by(root)
    except DepthCapExceeded:
        raise SqrtNotInTower(x, _minpoly(x)) from None
    if not extend and needed.depth != tower.depth:
        raise SqrtNotInTower(x, _minpoly(x))
    return root, needed


def _minpoly(x):
    from .poly import Poly
    return Poly([-x, 0, 1])
