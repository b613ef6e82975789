"""Roots of polynomials inside a multiquadratic tower.

Factoring over a tower is delegated to sympy's algebraic-extension
factorization; everything else (quadratic formula, denesting square roots,
trying extra square roots) is done here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from .errors import DepthCapExceeded, NeedsExtension, SqrtNotInTower
from .field import TowerElement, Tower, elem, field_sqrt
from .poly import Poly, _Z, poly_gcd, squarefree_decomposition

# factors up to this degree get the "adjoin one more square root" treatment
ADJOIN_DEGREE_LIMIT = 8
# roots are not searched for when the norm over Q would exceed this degree
NORM_DEGREE_LIMIT = 32
SMALL_PRIMES = (-1, 2, 3, 5, 7)


@dataclass
class RootSet:
    roots: list = field(default_factory=list)        # (TowerElement, multiplicity)
    unresolved: list = field(default_factory=list)   # (monic Poly, multiplicity)
    tower: Tower = None

    @property
    def exact(self) -> bool:
        return not self.unresolved


class _NumberField:
    """A tower as a sympy algebraic field, with exact coordinate maps both ways."""

    def __init__(self, gens: tuple):
        self.gens = gens
        self.K = sympy.QQ.algebraic_field(*[sympy.I if d == -1 else sympy.sqrt(d) for d in gens])
        roots = [self.K.from_sympy(sympy.I if d == -1 else sympy.sqrt(d)) for d in gens]
        self.degree = 2 ** len(gens)
        self.basis = {}
        for mask in range(self.degree):
            t, e = TowerElement(1), self.K.one
            for j, d in enumerate(gens):
                if mask >> j & 1:
                    t, e = t * TowerElement.sqrt_int(d), e * roots[j]
            (s, c), = t.items()
            self.basis[s] = e * self.K.convert(sympy.QQ(c.denominator, c.numerator))
        cols = [self._coords(e) for e in self.basis.values()]
        self.inverse = sympy.Matrix(cols).T.inv()

    def _coords(self, a) -> list:
        v = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in a.to_list()]
        return [0] * (self.degree - len(v)) + v

    def to_field(self, c: TowerElement):
        out = self.K.zero
        for d, q in c.items():
            out += self.basis[d] * self.K.convert(sympy.QQ(q.numerator, q.denominator))
        return out

    def from_field(self, a) -> TowerElement:
        x = self.inverse * sympy.Matrix(self._coords(a))
        return TowerElement({d: Fraction(int(q.p), int(q.q)) for d, q in zip(self.basis, x) if q})


@lru_cache(maxsize=64)
def _number_field(gens: tuple) -> _NumberField:
    return _NumberField(gens)


@lru_cache(maxsize=4096)
def _sympy_factors(p: Poly, gens: tuple) -> tuple:
    if not gens:
        _, facs = sympy.factor_list(p.to_sympy(), _Z)
        out = [Poly.from_sympy(f) for f, _ in facs], [m for _, m in facs]
    else:
        nf = _number_field(gens)
        sp = sympy.Poly.from_list([nf.to_field(c) for c in reversed(p.coeffs)], _Z, domain=nf.K)
        _, facs = sp.factor_list()
        polys = [Poly([nf.from_field(c) for c in reversed(f.rep.to_list())]) for f, _ in facs]
        out = polys, [m for _, m in facs]
    return tuple((f.monic(), m) for f, m in zip(*out) if f.degree > 0)


def factor_over(p: Poly, tower: Tower) -> list[tuple[Poly, int]]:
    """Monic irreducible factors of ``p`` over ``tower`` (via sympy)."""
    gens = tuple(tower.extended_by(*p.coeffs).generators)
    return list(_sympy_factors(p.monic(), gens))


def norm_poly(f: Poly) -> Poly:
    """Product of all Galois conjugates of ``f``: a polynomial over Q."""
    primes = set()
    for c in f.coeffs:
        primes |= set(c.primes())
    for p in sorted(primes):
        f = f * Poly([c.flip(p) for c in f.coeffs])
    return f


@lru_cache(maxsize=4096)
def _norm_factors(f: Poly) -> tuple:
    """Q-factors of the norm of ``f`` whose degree is a power of two.

    Every element of a multiquadratic tower has degree 2^j over Q, so any
    tower root of f is a root of one of these factors.
    """
    n = norm_poly(f)
    coeffs = [sympy.QQ(c.rational().numerator, c.rational().denominator) for c in reversed(n.coeffs)]
    _, facs = sympy.Poly.from_list(coeffs, _Z, domain=sympy.QQ).factor_list()
    out = []
    for g, _ in facs:
        d = g.degree()
        if d > 0 and d & (d - 1) == 0:
            out.append(Poly([Fraction(int(c.numerator), int(c.denominator)) for c in reversed(g.rep.to_list())]).monic())
    return tuple(out)


def _norm_degree(f: Poly) -> int:
    primes = set()
    for c in f.coeffs:
        primes |= set(c.primes())
    return f.degree * 2 ** len(primes)


def _split_by_norm(f: Poly):
    """A proper factor of ``f`` carrying tower roots, None if f has none, f if undecided."""
    for g in _norm_factors(f):
        h = poly_gcd(f, g)
        if 0 < h.degree < f.degree:
            return h
        if h.degree == f.degree:
            return f
    return None


def _quadratic(f: Poly, tower: Tower, extend: bool):
    b, c = f[1], f[0]
    disc = b * b - c * 4
    root, tower = field_sqrt(disc, tower, extend=extend)
    return [(-b + root) / 2, (-b - root) / 2], tower


def _candidate_generators(f: Poly, tower: Tower) -> list[int]:
    primes = set(SMALL_PRIMES)
    for c in f.coeffs:
        n = c
        for p in sorted(c.primes()):
            n = n * n.flip(p)
        q = n.rational()
        for part in (q.numerator, q.denominator):
            for p in sympy.factorint(abs(part), limit=1000):
                if 1 < p < 1000:
                    primes.add(p)
    return sorted(d for d in primes if not tower.contains_radicand(d))


def _resolve(f: Poly, tower: Tower, extend: bool, depth: int = 0):
    """Roots of a monic square-free ``f``: (roots, unresolved factors, tower)."""
    if f.degree == 1:
        return [-f[0]], [], tower
    if not f[0]:
        rest = f.exact_div(Poly.z())
        roots, bad, tower = _resolve(rest, tower, extend, depth)
        return [TowerElement(0)] + roots, bad, tower
    if f.degree == 2:
        try:
            roots, tower = _quadratic(f, tower, extend)
            return roots, [], tower
        except SqrtNotInTower:
            return [], [f], tower
    if _norm_degree(f) > NORM_DEGREE_LIMIT:
        return [], [f], tower
    h = _split_by_norm(f)
    if h is None:
        return [], [f], tower
    if h.degree < f.degree:
        roots, bad, tower = _resolve(h, tower, extend, depth)
        r2, b2, tower = _resolve(f.exact_div(h), tower, extend, depth)
        return roots + r2, bad + b2, tower
    tower = tower.extended_by(*f.coeffs)
    facs = factor_over(f, tower)
    if len(facs) > 1:
        roots, bad = [], []
        for g, _ in facs:
            r, b, tower = _resolve(g, tower, extend, depth)
            roots += r
            bad += b
        return roots, bad, tower
    # irreducible over the current tower
    if all(not c for c in f.coeffs[1::2]):
        h = Poly(f.coeffs[::2])
        hroots, hbad, t2 = _resolve(h, tower, extend, depth)
        roots, bad = [], []
        for w in hroots:
            try:
                r, t2 = field_sqrt(w, t2, extend=extend)
                roots += [r, -r]
            except SqrtNotInTower:
                bad.append(Poly([-w, 0, 1]))
        for g in hbad:
            bad.append(Poly([c for x in g.coeffs for c in (x, 0)][:-1]))
        if roots:
            return roots, bad, t2
    # a quadratic extension splits an irreducible factor into at most two
    # conjugate halves, so odd degrees never profit from adjoining
    if extend and depth == 0 and f.degree % 2 == 0 and f.degree <= ADJOIN_DEGREE_LIMIT:
        for d in _candidate_generators(f, tower):
            try:
                bigger = tower.adjoin(d)
            except DepthCapExceeded:
                break
            if len(factor_over(f, bigger)) > 1:
                roots, bad, t2 = _resolve(f, bigger, extend, depth + 1)
                if roots:
                    return roots, bad, t2
    return [], [f], tower


def find_roots(p: Poly, tower: Tower | None = None, extend: bool = True) -> RootSet:
    """All roots of ``p`` reachable in the tower, plus the factors that are not."""
    if p.degree < 1:
        raise ValueError("need a nonconstant polynomial")
    tower = tower if tower is not None else Tower.of(*p.coeffs)
    out = RootSet(tower=tower)
    for f, m in squarefree_decomposition(p):
        roots, bad, out.tower = _resolve(f, out.tower, extend)
        out.roots += [(r, m) for r in roots]
        out.unresolved += [(g.monic(), m) for g in bad]
    out.roots.sort(key=lambda rm: rm[0].sort_key())
    return out


def roots_in_tower(p: Poly, tower: Tower | None = None, extend: bool = True) -> list[tuple[TowerElement, int]]:
    """Roots with multiplicity; raises NeedsExtension naming an unsplit factor."""
    rs = find_roots(p, tower, extend)
    if rs.unresolved:
        raise NeedsExtension(rs.unresolved[0][0])
    return rs.roots


def nth_roots(value, n: int, tower: Tower | None = None) -> tuple[list[TowerElement], Tower, bool]:
    """Solutions of x**n = value in the tower and whether the list is complete."""
    if n < 0:
        value = elem(value).inverse()
        n = -n
    if n == 0:
        raise ValueError("zeroth root")
    p = Poly([-elem(value)] + [0] * (n - 1) + [1])
    rs = find_roots(p, tower)
    return [r for r, _ in rs.roots], rs.tower, rs.exact
