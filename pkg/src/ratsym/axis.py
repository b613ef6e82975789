"""Symmetries that preserve a pair of points (an axis).

After conjugating the axis {z0, z1} to {0, oo}, an axis-preserving Möbius
map is either a rotation c*z or a swap c/z, and equations between the
function and these maps reduce to binomial systems (see ``monomial``).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .critical import fixed_points
from .errors import InfiniteSolutionFamily, NotAFixedPoint
from .field import Tower
from .monomial import MonoRF, solve_equal, unit
from .moebius import FiniteMoebiusGroup, MoebiusMap, axis_map, conjugate_rf, primitive_root_of_unity
from .ratfunc import RatFunc, point, rf_iterate


@dataclass(frozen=True)
class HomozygousOrder:
    """Largest l with num supported in one residue class mod l and den in another.

    ``residue`` is r with A(e z) = e^r A(z) for every l-th root of unity e.
    ``l == 0`` flags a monomial c z^m, for which every l works.
    """

    l: int
    residue: int | None

    @property
    def power_family(self) -> bool:
        return self.l == 0


def homozygous_order(a: RatFunc) -> HomozygousOrder:
    ns, ds = a.num.support(), a.den.support()
    l = 0
    for s in (ns, ds):
        for e in s[1:]:
            l = gcd(l, e - s[0])
    if l == 0:
        return HomozygousOrder(0, None)
    return HomozygousOrder(l, (ns[0] - ds[0]) % l)


@dataclass
class AxisGroup:
    """G(A, z0, z1): rotations about the axis that lie in G(A), with their ν."""

    z0: object
    z1: object
    order: int                    # 0 for the power-map family
    residue: int | None
    conjugator: MoebiusMap        # sends 0 -> z0, oo -> z1
    group: FiniteMoebiusGroup | None = None
    nus: dict | None = None

    @property
    def power_family(self) -> bool:
        return self.order == 0


def axis_group(a: RatFunc, z0=0, z1="oo", tower: Tower | None = None) -> AxisGroup:
    z0, z1 = point(z0), point(z1)
    if a(z0) != z0:
        raise NotAFixedPoint(f"{z0} is not fixed by the map")
    mu = axis_map(z0, z1)
    h = homozygous_order(conjugate_rf(a, mu))
    out = AxisGroup(z0, z1, h.l, h.residue, mu)
    if h.power_family:
        return out
    zeta = primitive_root_of_unity(h.l, tower)
    if zeta is None:
        return out
    inv = mu.inverse()
    elems, nus = [], {}
    for j in range(h.l):
        s = mu @ MoebiusMap.scaling(zeta ** j) @ inv
        elems.append(s)
        nus[s] = mu @ MoebiusMap.scaling(zeta ** (j * h.residue)) @ inv
    out.group = FiniteMoebiusGroup.from_elements(elems)
    out.nus = nus
    return out


def seq0_check(a: RatFunc, z0=0, z1="oo", k_max: int = 3, budget: int | None = None) -> tuple[bool, list[int]]:
    """Whether |G(A∘k, z0, z1)| is the same for k = 1..k_max, and the orders."""
    z0, z1 = point(z0), point(z1)
    if a(z0) != z0:
        raise NotAFixedPoint(f"{z0} is not fixed by the map")
    b = conjugate_rf(a, axis_map(z0, z1))
    orders = [homozygous_order(rf_iterate(b, k, budget)).l for k in range(1, k_max + 1)]
    return len(set(orders)) == 1, orders


def axis_solutions(a: RatFunc, axis: MoebiusMap, relation: str, l: int = 0, forms=("rotate", "swap")):
    """Axis-preserving σ satisfying a relation, as (σ, β) pairs, plus completeness.

    relations:
      "sigma"  a∘σ = a
      "aut"    a∘σ = σ∘a
      "gamma"  a∘σ = σ^l∘a
      "kross"  a∘σ = β∘a∘β^-1 with β also axis-preserving
    """
    b = conjugate_rf(a, axis)
    inv = axis.inverse()
    nvars = 2 if relation == "kross" else 1
    m = MonoRF.from_rf(b, nvars)
    c = unit(0, nvars)
    out, complete = [], True
    for swap in (False, True):
        if ("swap" if swap else "rotate") not in forms:
            continue
        lhs = m.pre_swap(c) if swap else m.pre_scale(c)
        if relation == "kross":
            d, dinv = unit(1, 2), unit(1, 2, -1)
            rhss = [(False, m.pre_scale(dinv).post_scale(d)), (True, m.pre_swap(d).post_swap(d))]
        elif relation == "sigma":
            rhss = [(None, m)]
        elif relation == "aut":
            rhss = [(None, m.post_swap(c) if swap else m.post_scale(c))]
        elif swap:
            rhss = [(None, m.post_swap(c) if l % 2 else m)]
        else:
            rhss = [(None, m.post_scale(c, l))]
        for beta_swap, rhs in rhss:
            try:
                sols, ok = solve_equal(lhs, rhs)
            except InfiniteSolutionFamily:
                complete = False
                continue
            complete = complete and ok
            for sol in sols:
                s = MoebiusMap.inversion(sol[0]) if swap else MoebiusMap.scaling(sol[0])
                sigma = axis @ s @ inv
                if relation == "kross":
                    t = MoebiusMap.inversion(sol[1]) if beta_swap else MoebiusMap.scaling(sol[1])
                    beta = axis @ t @ inv
                elif relation == "sigma":
                    beta = MoebiusMap.identity()
                elif relation == "aut":
                    beta = sigma
                else:
                    beta = sigma ** l
                out.append((sigma, beta))
    return out, complete


def swap_solutions(a: RatFunc, z0=0, z1="oo", mode: str = "sigma", forms=("swap",)) -> list[MoebiusMap]:
    """σ preserving the axis {z0, z1} solving the Sigma- or Gamma-mode equation.

    SigmaMode solves a∘σ = a.  GammaMode solves a∘σ = β∘a∘β^-1 with β
    also preserving the axis.  ``forms`` picks the swaps c/z, the
    rotations c*z, or both.
    """
    relation = {"sigma": "sigma", "gamma": "kross"}[mode.lower().replace("mode", "")]
    pairs, _ = axis_solutions(a, axis_map(z0, z1), relation, forms=forms)
    seen, out = set(), []
    for s, _ in pairs:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def exact_fixed_points(a: RatFunc, limit: int = 8):
    pts, _ = fixed_points(a)
    return [p for p, _ in pts][:limit]


def axis_layer(a: RatFunc, limit: int = 8) -> list[tuple[MoebiusMap, str]]:
    """Candidate symmetries found on axes through fixed points of ``a``."""
    pts = exact_fixed_points(a, limit)
    out = []
    for i, z0 in enumerate(pts):
        for z1 in pts[i + 1:]:
            ag = axis_group(a, z0, z1)
            if ag.group is not None:
                out += [(s, "axis-support") for s in ag.group.elements]
            mu = ag.conjugator
            for rel in ("sigma", "aut"):
                pairs, _ = axis_solutions(a, mu, rel)
                out += [(s, "swap-solve") for s, _ in pairs]
    return out
