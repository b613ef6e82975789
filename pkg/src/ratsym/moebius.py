"""Möbius transformations over the tower and finite Möbius groups."""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import ClosureCapExceeded, DegenerateTriple, UnsupportedClass
from .field import ONE, TowerElement, Tower, elem
from .poly import Poly
from .ratfunc import INFINITY, RatFunc, SpherePoint, point
from .roots import find_roots, nth_roots

DEFAULT_ORDER_CAP = 120
DEFAULT_CLOSURE_CAP = 60


class MoebiusMap:
    """z -> (a z + b)/(c z + d), scaled so the first nonzero entry is 1."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a, b, c, d):
        a, b, c, d = elem(a), elem(b), elem(c), elem(d)
        if not (a * d - b * c):
            raise ValueError("singular Möbius matrix")
        lead = next(x for x in (a, b, c, d) if x)
        if lead != 1:
            inv = lead.inverse()
            a, b, c, d = a * inv, b * inv, c * inv, d * inv
        self.a, self.b, self.c, self.d = a, b, c, d
        self._hash = None

    @classmethod
    def identity(cls) -> MoebiusMap:
        return cls(1, 0, 0, 1)

    @classmethod
    def scaling(cls, c) -> MoebiusMap:
        """z -> c z."""
        return cls(c, 0, 0, 1)

    @classmethod
    def inversion(cls, c=1) -> MoebiusMap:
        """z -> c / z."""
        return cls(0, c, 1, 0)

    @classmethod
    def translation(cls, t) -> MoebiusMap:
        return cls(1, t, 0, 1)

    @classmethod
    def from_ratfunc(cls, f: RatFunc) -> MoebiusMap:
        if f.degree != 1:
            raise ValueError("a Möbius map has degree one")
        return cls(f.num[1], f.num[0], f.den[1], f.den[0])

    @property
    def matrix(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, p) -> SpherePoint:
        p = point(p)
        x, y = p.x, p.y
        return SpherePoint(self.a * x + self.b * y, self.c * x + self.d * y)

    def compose(self, other: MoebiusMap) -> MoebiusMap:
        """self ∘ other."""
        a, b, c, d = self.matrix
        e, f, g, h = other.matrix
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    __matmul__ = compose

    def inverse(self) -> MoebiusMap:
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> MoebiusMap:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = MoebiusMap.identity()
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return not self.b and not self.c and self.a == self.d

    def order(self, cap: int = DEFAULT_ORDER_CAP):
        return moebius_order(self, cap)

    def fixed_points(self, tower: Tower | None = None) -> tuple[list[SpherePoint], bool]:
        """Fixed points in the tower and whether both were found."""
        a, b, c, d = self.matrix
        if self.is_identity():
            raise ValueError("the identity fixes every point")
        if not c:
            pts = [INFINITY]
            if a != d:
                pts.append(SpherePoint(b / (d - a)))
            return pts, True
        rs = find_roots(Poly([-b, d - a, c]), tower)
        pts = [SpherePoint(r) for r, _ in rs.roots]
        return pts, rs.exact

    def to_ratfunc(self) -> RatFunc:
        return RatFunc(Poly([self.b, self.a]), Poly([self.d, self.c]))

    def elements(self):
        return [x for x in self.matrix if x]

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.matrix)
        return self._hash

    def sort_key(self):
        return tuple((0, ()) if not x else (1, x.sort_key()) for x in self.matrix)

    def __repr__(self):
        return f"MoebiusMap({self})"

    def __str__(self):
        return str(self.to_ratfunc())


def sorted_maps(maps) -> list[MoebiusMap]:
    return sorted(maps, key=lambda m: (not m.is_identity(), m.sort_key()))


def moebius_order(m: MoebiusMap, cap: int = DEFAULT_ORDER_CAP):
    """Order of ``m`` or ``math.inf`` when no power up to ``cap`` is the identity."""
    p = m
    for k in range(1, cap + 1):
        if p.is_identity():
            return k
        p = p @ m
    return math.inf


def moebius_from_three_points(src, dst) -> MoebiusMap:
    """The unique Möbius map sending src[i] to dst[i]."""
    src = [point(p) for p in src]
    dst = [point(p) for p in dst]
    if len(src) != 3 or len(dst) != 3:
        raise ValueError("need exactly three points on each side")
    return _to_standard(dst).inverse() @ _to_standard(src)


def _to_standard(pts) -> MoebiusMap:
    """Map sending pts to (0, oo, 1)."""
    (x1, y1), (x2, y2), (x3, y3) = [(p.x, p.y) for p in pts]
    l1 = y1 * x3 - x1 * y3
    l2 = y2 * x3 - x2 * y3
    if not l1 or not l2 or not (y1 * x2 - x1 * y2):
        raise DegenerateTriple("three points must be distinct")
    lam = l2 / l1
    return MoebiusMap(lam * y1, -lam * x1, y2, -x2)


# --- acting on rational functions ---------------------------------------

def pre_compose(f: RatFunc, m: MoebiusMap) -> RatFunc:
    """f ∘ m."""
    n = f.degree
    a, b, c, d = m.matrix
    if not b and not c:
        s = a / d
        return RatFunc._coprime(f.num.substitute_scale(s), f.den.substitute_scale(s))
    if not a and not d:
        s = b / c
        num = f.num.substitute_scale(s).reversed_to(n)
        den = f.den.substitute_scale(s).reversed_to(n)
        return RatFunc._coprime(num, den)
    num_m, den_m = Poly([b, a]), Poly([d, c])
    return RatFunc._coprime(
        f.num.homogeneous_substitute(num_m, den_m, n),
        f.den.homogeneous_substitute(num_m, den_m, n),
    )


def post_compose(m: MoebiusMap, f: RatFunc) -> RatFunc:
    """m ∘ f."""
    a, b, c, d = m.matrix
    return RatFunc._coprime(f.num * a + f.den * b, f.num * c + f.den * d)


def conjugate_rf(f: RatFunc, m: MoebiusMap) -> RatFunc:
    """m^-1 ∘ f ∘ m."""
    return post_compose(m.inverse(), pre_compose(f, m))


def two_sided(m1: MoebiusMap, f: RatFunc, m2: MoebiusMap) -> RatFunc:
    """m1 ∘ f ∘ m2."""
    return post_compose(m1, pre_compose(f, m2))


def axis_map(z0, z1) -> MoebiusMap:
    """A Möbius map sending 0 to z0 and oo to z1."""
    z0, z1 = point(z0), point(z1)
    if z0 == z1:
        raise DegenerateTriple("axis points must differ")
    # columns are the images of 0 = (0:1) and oo = (1:0)
    return MoebiusMap(z1.x, z0.x, z1.y, z0.y)


# --- finite groups --------------------------------------------------------

@dataclass(frozen=True)
class FiniteMoebiusGroup:
    elements: tuple
    cls: str
    orders: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_elements(cls, elements) -> FiniteMoebiusGroup:
        elements = tuple(sorted_maps(set(elements)))
        orders = {g: moebius_order(g, len(elements) + 1) for g in elements}
        return cls(elements, classify(len(elements), Counter(orders.values())), orders)

    @classmethod
    def trivial(cls) -> FiniteMoebiusGroup:
        return cls.from_elements([MoebiusMap.identity()])

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m):
        return m in set(self.elements)

    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def same_elements(self, other) -> bool:
        return self.element_set() == frozenset(other)

    def issubgroup(self, other) -> bool:
        return self.element_set() <= frozenset(other)

    def element_orders(self) -> Counter:
        return Counter(self.orders[g] for g in self.elements)

    def max_order_element(self) -> MoebiusMap:
        return max(self.elements, key=lambda g: (self.orders[g], -len(str(g))))

    def conjugate(self, beta: MoebiusMap) -> FiniteMoebiusGroup:
        """beta^-1 G beta."""
        inv = beta.inverse()
        return FiniteMoebiusGroup.from_elements(inv @ g @ beta for g in self.elements)

    def generators(self) -> list[MoebiusMap]:
        gens, span = [], {MoebiusMap.identity()}
        for g in sorted(self.elements, key=lambda g: -self.orders[g]):
            if g not in span:
                gens.append(g)
                span = set(group_closure(gens, cap=self.order).elements)
        return gens

    def __str__(self):
        return f"{self.cls}{{{', '.join(str(g) for g in self.elements)}}}"


def classify(order: int, orders: Counter) -> str:
    """Name of the finite Möbius group with this order and element orders."""
    if order == 1:
        return "C1"
    top = max(orders)
    if top == order:
        return f"C{order}"
    if order % 2 == 0 and top == order // 2:
        return f"D{order}"
    names = {12: "A4", 24: "S4", 60: "A5"}
    if order in names and top == {12: 3, 24: 4, 60: 5}[order]:
        return names[order]
    raise ValueError(f"no finite Möbius group of order {order} with element orders {dict(orders)}")


def group_closure(seed, cap: int = DEFAULT_CLOSURE_CAP) -> FiniteMoebiusGroup:
    """Smallest group containing ``seed``."""
    gens = [g for g in seed if not g.is_identity()]
    ident = MoebiusMap.identity()
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x @ g
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise ClosureCapExceeded(f"closure exceeds {cap} elements")
                queue.append(y)
    return FiniteMoebiusGroup.from_elements(seen)


def is_group(elements) -> bool:
    s = set(elements)
    return all((x @ y) in s for x in s for y in s) and MoebiusMap.identity() in s


# --- invariants -----------------------------------------------------------

def axis_conjugator(g: FiniteMoebiusGroup, tower: Tower | None = None) -> MoebiusMap:
    """beta with beta^-1 G beta in normal form: rotations z -> e z, flips z -> 1/z."""
    if g.cls[0] not in "CD":
        raise UnsupportedClass(f"{g.cls} has no rotation axis")
    if g.order == 1:
        return MoebiusMap.identity()
    l = g.order if g.cls[0] == "C" else g.order // 2
    rots = [h for h in g.elements if g.orders[h] == l]
    rot = min(rots, key=lambda h: (not _fixes_zero_inf(h), h.sort_key()))
    pts, ok = rot.fixed_points(tower)
    if not ok or len(pts) != 2:
        raise UnsupportedClass("rotation axis is not in the tower")
    if pts[0].is_infinity:
        pts = pts[::-1]     # keeps beta = id for groups already about {0, oo}
    beta = axis_map(pts[0], pts[1])
    if g.cls[0] == "D":
        inv = beta.inverse()
        flips = [inv @ h @ beta for h in g.elements if h not in _cyclic_part(g, rot)]
        flip = min(flips, key=lambda h: (h.b != h.c, h.sort_key()))
        c = flip.b / flip.c  # flip is z -> c / z
        roots, _, ok = nth_roots(c, 2, tower)
        if not roots:
            raise UnsupportedClass("flip normalization needs a square root outside the tower")
        beta = beta @ MoebiusMap.scaling(roots[0])
    return beta


def _fixes_zero_inf(h: MoebiusMap) -> bool:
    return not h.b and not h.c


def _cyclic_part(g: FiniteMoebiusGroup, rot: MoebiusMap) -> set:
    out, p = set(), MoebiusMap.identity()
    for _ in range(g.orders[rot]):
        out.add(p)
        p = p @ rot
    return out


def invariant_function(g: FiniteMoebiusGroup, tower: Tower | None = None) -> RatFunc:
    """A rational function of degree |G| constant on G-orbits (cyclic and dihedral only)."""
    if g.cls[0] not in "CD":
        raise UnsupportedClass(f"no invariant function produced for {g.cls}")
    beta = axis_conjugator(g, tower)
    z = Poly.z()
    if g.cls[0] == "C":
        theta = RatFunc(z ** g.order)
    else:
        l = g.order // 2
        theta = RatFunc(z ** (2 * l) + 1, z ** l)
    return pre_compose(theta, beta.inverse())


def roots_of_unity(l: int, tower: Tower | None = None) -> list[TowerElement]:
    """All l-th roots of unity in the tower (complete only when l divides 24)."""
    return nth_roots(1, l, tower)[0]


def primitive_root_of_unity(l: int, tower: Tower | None = None) -> TowerElement | None:
    for r in roots_of_unity(l, tower):
        if _mult_order(r, l) == l:
            return r
    return None


def _mult_order(x: TowerElement, cap: int) -> int:
    p = x
    for k in range(1, cap + 1):
        if p == ONE:
            return k
        p = p * x
    return 0


__all__ = [
    "MoebiusMap", "FiniteMoebiusGroup", "moebius_order", "moebius_from_three_points",
    "group_closure", "invariant_function", "conjugate_rf", "pre_compose", "post_compose",
    "two_sided", "axis_map", "classify", "roots_of_unity", "primitive_root_of_unity",
]
