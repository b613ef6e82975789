"""Critical points, critical values and fibers with local multiplicities."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import InexactCriticalData
from .field import Tower, elem
from .poly import Poly, resultant, squarefree_decomposition
from .ratfunc import INFINITY, RatFunc, SpherePoint, iterate_point, point
from .roots import find_roots


@dataclass(frozen=True)
class FiberProfile:
    """The preimage of ``value`` with the local multiplicity of every point.

    ``unresolved`` lists monic factors whose roots belong to the fiber but
    are not representable in the tower, with the multiplicity shared by
    all of their roots.
    """

    value: SpherePoint
    points: tuple = ()
    unresolved: tuple = ()

    @property
    def exact(self) -> bool:
        return not self.unresolved

    @property
    def multiplicities(self) -> tuple[int, ...]:
        ms = [m for _, m in self.points]
        for f, m in self.unresolved:
            ms += [m] * f.degree
        return tuple(sorted(ms, reverse=True))

    @property
    def signature(self) -> tuple[tuple[int, int], ...]:
        """Multiplicity profile as sorted (multiplicity, count) pairs."""
        return tuple(sorted(Counter(self.multiplicities).items(), reverse=True))

    @property
    def ramification(self) -> int:
        return sum(m - 1 for m in self.multiplicities)

    def multiplicity_of(self, p) -> int:
        p = point(p)
        for q, m in self.points:
            if q == p:
                return m
        return 0

    def points_with(self, m: int) -> list[SpherePoint]:
        return [q for q, k in self.points if k == m]


@dataclass
class CriticalData:
    function: RatFunc
    fibers: dict = field(default_factory=dict)           # SpherePoint -> FiberProfile
    unresolved_values: list = field(default_factory=list)  # Polys whose roots are critical values
    tower: Tower = None

    @property
    def degree(self) -> int:
        return self.function.degree

    @property
    def values(self) -> list[SpherePoint]:
        return sorted(self.fibers, key=lambda p: p.sort_key())

    @property
    def value_count(self) -> int:
        return len(self.fibers) + sum(f.degree for f in self.unresolved_values)

    @property
    def values_exact(self) -> bool:
        return not self.unresolved_values

    @property
    def exact(self) -> bool:
        return self.values_exact and all(f.exact for f in self.fibers.values())

    @property
    def critical_points(self) -> list[tuple[SpherePoint, int]]:
        out = []
        for v in self.values:
            out += [(p, m) for p, m in self.fibers[v].points if m > 1]
        return out

    def fiber(self, value) -> FiberProfile:
        return self.fibers[point(value)]

    def ramification_total(self) -> int:
        total = sum(f.ramification for f in self.fibers.values())
        return total

    def riemann_hurwitz_ok(self) -> bool:
        """Sum of (multiplicity - 1) equals 2n - 2; only decidable with all values known."""
        return self.values_exact and self.ramification_total() == 2 * self.degree - 2


def multiplicity_at_infinity(a: RatFunc) -> int:
    dp, dq = a.num.degree, a.den.degree
    if dp > dq:
        return dp - dq
    c = a.num[dq] / a.den[dq]
    diff = a.num - a.den * c
    return dq - diff.degree if not diff.is_zero() else dq


def fiber(a: RatFunc, value, tower: Tower | None = None) -> tuple[FiberProfile, Tower]:
    """Preimage of ``value`` under ``a`` with local multiplicities."""
    value = point(value)
    tower = tower if tower is not None else Tower.of(*a.elements())
    if value.is_infinity:
        poly = a.den
    else:
        tower = tower.extended_by(value.x)
        poly = a.num - a.den * value.x
    pts, bad = [], []
    if poly.degree > 0:
        rs = find_roots(poly, tower)
        tower = rs.tower
        pts = [(SpherePoint(r), m) for r, m in rs.roots]
        bad = list(rs.unresolved)
    if a(INFINITY) == value:
        pts.append((INFINITY, multiplicity_at_infinity(a)))
    pts.sort(key=lambda pm: pm[0].sort_key())
    return FiberProfile(value, tuple(pts), tuple(bad)), tower


def wronskian(a: RatFunc) -> Poly:
    """P'Q - PQ'; a finite point has multiplicity 1 + (order of vanishing here)."""
    return a.num.derivative() * a.den - a.num * a.den.derivative()


def _interpolate(xs, ys) -> Poly:
    """Newton interpolation through (xs, ys)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = Poly([coef[-1]])
    for i in range(n - 2, -1, -1):
        p = p * Poly([-xs[i], 1]) + Poly([coef[i]])
    return p


def _value_polynomial(a: RatFunc, f: Poly) -> Poly:
    """Polynomial in w vanishing exactly at a(roots of f), for f coprime to den."""
    d = f.degree
    xs = [elem(k) for k in range(d + 1)]
    ys = [resultant(f, a.num - a.den * x) for x in xs]
    return _interpolate(xs, ys)


def critical_data(a: RatFunc, tower: Tower | None = None, values=None) -> CriticalData:
    """Critical values of ``a`` with their fibers.

    ``values`` may list a superset of the critical values (for instance from
    the chain rule for iterates); otherwise they are computed from the
    critical points.
    """
    if a.degree < 1:
        raise ValueError("constant functions have no critical data")
    tower = tower if tower is not None else Tower.of(*a.elements())
    out = CriticalData(a, tower=tower)
    hinted = values is not None
    if not hinted:
        values, unresolved, tower = _critical_values(a, tower)
        out.unresolved_values = unresolved
    for v in sorted(set(point(v) for v in values), key=lambda p: p.sort_key()):
        fp, tower = fiber(a, v, tower)
        if any(m > 1 for m in fp.multiplicities):
            out.fibers[v] = fp
    out.tower = tower
    if out.values_exact and out.ramification_total() != 2 * a.degree - 2:
        if hinted and out.ramification_total() < 2 * a.degree - 2:
            raise InexactCriticalData("supplied values miss some critical values")
        raise AssertionError("Riemann-Hurwitz count failed")
    return out


def _critical_values(a: RatFunc, tower: Tower):
    values = set()
    unresolved = []
    if multiplicity_at_infinity(a) > 1:
        values.add(a(INFINITY))
    w = wronskian(a)
    if w.degree > 0:
        rs = find_roots(w, tower)
        tower = rs.tower
        for r, _ in rs.roots:
            values.add(a(r))
        for f, _ in rs.unresolved:
            g = _gcd_with_den(f, a.den)
            if g.degree > 0:
                values.add(INFINITY)
                f = f.exact_div(g)
            if f.degree < 1:
                continue
            vp = _value_polynomial(a, f)
            for h, _ in squarefree_decomposition(vp):
                vr = find_roots(h, tower)
                tower = vr.tower
                values.update(SpherePoint(r) for r, _ in vr.roots)
                unresolved += [g for g, _ in vr.unresolved]
    return values, unresolved, tower


def _gcd_with_den(f: Poly, den: Poly) -> Poly:
    from .poly import poly_gcd
    return poly_gcd(f, den) if den.degree > 0 else Poly([1])


def fixed_points(a: RatFunc, tower: Tower | None = None):
    """Fixed points in the tower (with multiplicity) and the unresolved factors."""
    tower = tower if tower is not None else Tower.of(*a.elements())
    poly = a.num - a.den * Poly.z()
    if poly.is_zero():
        raise ValueError("every point is fixed by the identity")
    pts, bad = [], []
    if poly.degree > 0:
        rs = find_roots(poly, tower)
        pts = [(SpherePoint(r), m) for r, m in rs.roots]
        bad = rs.unresolved
    # the homogenized fixed-point form has degree n + 1; the drop is the
    # multiplicity at infinity
    drop = a.degree + 1 - poly.degree
    if drop > 0:
        pts.append((INFINITY, drop))
    return pts, bad


def fixed_point_set(a: RatFunc) -> list[SpherePoint]:
    return [p for p, _ in fixed_points(a)[0]]


# --- iterates ------------------------------------------------------------

def _pullback(a: RatFunc, fp: FiberProfile, tower: Tower, base: CriticalData | None = None) -> tuple[FiberProfile, Tower]:
    """Fiber of X∘a over fp.value, given the fiber fp of X (and optionally c(a))."""
    pts, bad = [], []
    for w, m in fp.points:
        sub, tower = fiber(a, w, tower)
        pts += [(p, e * m) for p, e in sub.points]
        bad += [(g, e * m) for g, e in sub.unresolved]
    for f, m in fp.unresolved:
        shortcut = base is not None and not any(_gcd_with_den(f, v).degree > 0 for v in base.unresolved_values)
        if shortcut:
            # exact roots of f among c(a) and a(oo) are split off; what is
            # left pulls back to a square-free polynomial of full degree
            special = {v for v in base.values if not v.is_infinity}
            if not a(INFINITY).is_infinity:
                special.add(a(INFINITY))
            for v in special:
                if not f(v.x):
                    f = f.exact_div(Poly([-v.x, 1]))
                    sub, tower = fiber(a, v, tower)
                    pts += [(p, e * m) for p, e in sub.points]
                    bad += [(g, e * m) for g, e in sub.unresolved]
            if f.degree > 0:
                bad.append((f.homogeneous_substitute(a.num, a.den, f.degree).monic(), m))
            continue
        # a tower root z would make a(z) a tower root of f, so the pullback
        # stays unresolved; only its multiplicity pattern is needed
        poly = f.homogeneous_substitute(a.num, a.den, f.degree)
        bad += [(g.monic(), e * m) for g, e in squarefree_decomposition(poly)]
    pts.sort(key=lambda pm: pm[0].sort_key())
    return FiberProfile(fp.value, tuple(pts), tuple(bad)), tower


def iterate_values(a: RatFunc, base: CriticalData, k: int) -> list[SpherePoint]:
    """Chain rule: c(a∘k) is the union of a∘j(c(a)) for j < k."""
    out = set()
    for v in base.values:
        p = v
        for _ in range(k):
            out.add(p)
            p = a(p)
    return sorted(out, key=lambda p: p.sort_key())


def _image_values(a: RatFunc, f: Poly, tower: Tower):
    """a(roots of f) as exact points plus unresolved factors."""
    pts, bad = set(), []
    g = _gcd_with_den(f, a.den)
    if g.degree > 0:
        pts.add(INFINITY)
        f = f.exact_div(g)
    if f.degree > 0:
        for h, _ in squarefree_decomposition(_value_polynomial(a, f)):
            rs = find_roots(h, tower)
            tower = rs.tower
            pts.update(SpherePoint(r) for r, _ in rs.roots)
            bad += [g for g, _ in rs.unresolved]
    return pts, bad, tower


def iterate_critical_data(a: RatFunc, k: int, base: CriticalData | None = None, iterate: RatFunc | None = None) -> CriticalData:
    """Critical data of a∘k built by pulling fibers back through ``a``.

    Uses only degree-deg(a) root finding at each level.  Critical values of
    ``a`` outside the tower are carried along as polynomials: their images
    stay unresolved values of a∘k.
    """
    base = base if base is not None else critical_data(a)
    if k == 1:
        return base
    from .ratfunc import rf_iterate
    f = iterate if iterate is not None else rf_iterate(a, k)
    tower = base.tower
    out = CriticalData(f, tower=tower)
    values = set(iterate_values(a, base, k))
    layer, unresolved = list(base.unresolved_values), []
    for _ in range(k - 1):
        unresolved += layer
        nxt = []
        for g in layer:
            pts, bad, tower = _image_values(a, g, tower)
            values |= {iterate_point(a, p, j) for p in pts for j in range(k)}
            nxt += bad
        layer = nxt
    unresolved += layer
    for v in sorted(values, key=lambda p: p.sort_key()):
        fp, tower = fiber(a, v, tower)
        for _ in range(k - 1):
            fp, tower = _pullback(a, fp, tower, base)
        if any(m > 1 for m in fp.multiplicities):
            out.fibers[v] = fp
    seen, out.unresolved_values = set(), []
    for g in unresolved:
        g = g.monic()
        if g not in seen:
            seen.add(g)
            out.unresolved_values.append(g)
    out.tower = tower
    if out.values_exact and out.ramification_total() != 2 * f.degree - 2:
        raise AssertionError("Riemann-Hurwitz count failed for iterate")
    return out


def orbit(a: RatFunc, p, k: int) -> list[SpherePoint]:
    return [iterate_point(a, p, j) for j in range(k + 1)]
