"""Groups attached to the iterates of a rational function.

Σ∞(A) is the union of Σ(A∘k) over k, Aut∞(A) the union of Aut(A∘k) and
S(A) the union of Ĝ(A∘k).  None of these can be computed by running k to
infinity, so every limit result is a group found at levels k <= k_max,
each element carrying the level at which its identity was verified, plus
a completeness flag that is set only when a finiteness argument rules out
anything larger.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from sympy import primefactors

from .axis import axis_group, axis_solutions, homozygous_order, seq0_check, swap_solutions  # noqa: F401
from .critical import CriticalData, _value_polynomial, critical_data, iterate_critical_data
from .errors import (
    ClosureCapExceeded,
    DegenerateTriple,
    DegreeBudgetExceeded,
    InexactCriticalData,
    RootNotInTower,
)
from .field import ONE
from .moebius import (
    FiniteMoebiusGroup,
    MoebiusMap,
    axis_map,
    group_closure,
    moebius_from_three_points,
    post_compose,
    pre_compose,
    sorted_maps,
)
from .poly import Poly, poly_gcd, squarefree_part
from .ratfunc import INFINITY, RatFunc, SpherePoint, default_budget, iterate_point, rf_compose
from .roots import nth_roots
from .symmetry import GroupReport, group_of, quasi_power_class

KMAX_DEGREE = 64      # default sweep stops once deg(A)^k would pass this
AXIS_LEVELS = 4       # iterates searched for a fixed point on a rotation axis


def default_kmax(n: int, budget: int | None = None) -> int:
    """Largest k <= 6 with n^k within both the sweep cap and the budget."""
    cap = min(KMAX_DEGREE, default_budget() if budget is None else budget)
    k = 1
    while k < 6 and n ** (k + 1) <= cap:
        k += 1
    return k


class Iterates:
    """A∘1, A∘2, ... built one composition at a time, with critical data."""

    def __init__(self, a: RatFunc, budget: int | None = None):
        self.a = a
        self.budget = default_budget() if budget is None else budget
        self._maps = [a]
        self._crit: dict = {}

    def __getitem__(self, k: int) -> RatFunc:
        if k < 1:
            raise ValueError("iterate index must be at least 1")
        if self.a.degree ** k > self.budget:
            raise DegreeBudgetExceeded(self.a.degree ** k, self.budget)
        while len(self._maps) < k:
            self._maps.append(rf_compose(self.a, self._maps[-1], self.budget))
        return self._maps[k - 1]

    def critical(self, k: int) -> CriticalData:
        if k not in self._crit:
            base = self._crit.get(1)
            if base is None:
                base = self._crit[1] = critical_data(self.a)
            if k > 1:
                try:
                    self._crit[k] = iterate_critical_data(self.a, k, base, self[k])
                except InexactCriticalData:
                    self._crit[k] = critical_data(self[k])
        return self._crit[k]


# --- single levels --------------------------------------------------------

@dataclass
class IterateGroupReport:
    """G(A∘k) with, per element of G, (level first seen, generation rule)."""

    k: int
    function: RatFunc
    report: GroupReport
    provenance: dict = field(default_factory=dict)

    @property
    def power_family(self) -> bool:
        return self.report.quasi_class.kind == "PowerMapConjugate"

    @property
    def complete(self) -> bool:
        return self.report.complete


def iterate_group(a: RatFunc, k: int, budget: int | None = None, seeds=(), iterates: Iterates | None = None) -> IterateGroupReport:
    """G(A∘k), searched with base-level symmetries lifted and re-verified.

    Σ(A) and Aut(A) always lift (Σ(A) ⊆ Σ(A∘k), Aut(A) ⊆ Aut(A∘k)); extra
    ``seeds`` are (σ, rule, level) triples from other levels.
    """
    its = iterates if iterates is not None else Iterates(a, budget)
    f = its[k]
    crit = its.critical(k)
    levels, tagged = {}, []
    if k > 1:
        base = group_of(a, its.critical(1))
        lift = list(base.sigma_group or ()) + list(base.aut or ())
        for s in lift:
            tagged.append((s, "base-meb"))
            levels.setdefault(s, 1)
    for s, rule, level in seeds:
        tagged.append((s, rule))
        levels.setdefault(s, level)
    report = group_of(f, crit, seeds=tagged)
    if report.g is not None:
        prov = {s: (levels.get(s, k), report.provenance.get(s, "closure")) for s in report.g.elements}
    else:
        prov = {c.sigma: (k, "swap-solve") for c in report.certificates}
    return IterateGroupReport(k, f, report, prov)


# --- limit groups ---------------------------------------------------------

@dataclass(frozen=True)
class LimitCertificate:
    """σ satisfies A∘level∘σ = ν∘A∘level, with ν = id (Σ∞) or ν = σ (Aut∞)."""

    sigma: MoebiusMap
    nu: MoebiusMap
    level: int

    def check(self, a: RatFunc, budget: int | None = None) -> bool:
        f = Iterates(a, budget)[self.level]
        return pre_compose(f, self.sigma) == post_compose(self.nu, f)


@dataclass
class LimitGroupResult:
    kind: str                              # "sigma" or "aut"
    status: str                            # Stabilized | BudgetExhausted | InfinitePowerMap
    group: FiniteMoebiusGroup | None = None
    stabilized_at: int | None = None
    certificates: list = field(default_factory=list)
    trace: list = field(default_factory=list)       # (level, group at that level)
    complete: bool = False
    reason: str | None = None              # argument behind ``complete``
    bound: int | None = None               # axis bound 2L when one applied
    k_max: int = 0

    def bound_ok(self) -> bool:
        return self.bound is None or self.group is None or self.group.order <= self.bound

    def verify(self, a: RatFunc, budget: int | None = None) -> bool:
        return all(c.check(a, budget) for c in self.certificates)


def _stabilized_at(trace) -> int | None:
    if not trace:
        return None
    last = trace[-1][1].element_set()
    at = trace[-1][0]
    for level, g in reversed(trace):
        if g.element_set() != last:
            break
        at = level
    return at


def _status(trace, complete: bool) -> tuple[str, int | None]:
    at = _stabilized_at(trace)
    if complete or (at is not None and at < trace[-1][0]):
        return "Stabilized", at
    return "BudgetExhausted", at


def _power_result(kind: str, k_max: int) -> LimitGroupResult:
    return LimitGroupResult(kind, "InfinitePowerMap", reason="conjugate to a power map", complete=True, k_max=k_max)


def _axis_order(its: Iterates, rot: MoebiusMap) -> int | None:
    """L = |G(A∘j, z0, z1)| on the axis of ``rot`` for the first j fixing an axis point.

    Every rotation about this axis lying in Σ∞(A) or Aut∞(A) has order
    dividing L, because the local group does not change along iterates.
    """
    pts, exact = rot.fixed_points()
    if not exact or len(pts) != 2:
        return None
    for j in range(1, AXIS_LEVELS + 1):
        for z0, z1 in (pts, pts[::-1]):
            if iterate_point(its.a, z0, j) == z0:
                try:
                    f = its[j]
                except DegreeBudgetExceeded:
                    return None
                return axis_group(f, z0, z1).order or None
    return None


def _allowed(order: int, n: int) -> bool:
    """|Σ(A∘k)| divides n^k, so every prime factor of the order divides n."""
    return all(n % p == 0 for p in primefactors(order))


POLYHEDRAL = {"A4": (12, 3), "S4": (24, 4), "A5": (60, 5)}


def _sigma_sieve(its: Iterates, h: FiniteMoebiusGroup) -> bool:
    """True when no finite Möbius group strictly containing ``h`` can be Σ∞(A)."""
    n = its.a.degree
    if h.cls in ("S4", "A5"):
        return True
    rot = h.max_order_element()
    m = h.orders[rot]
    if m < 3:
        return False
    if h.cls == "A4":
        return not any(_allowed(o, n) for o, _ in (POLYHEDRAL["S4"], POLYHEDRAL["A5"]))
    L = _axis_order(its, rot)
    if L is None or L % m:
        return False
    cyclic = h.cls.startswith("C")
    for mm in range(m, L + 1, m):
        if L % mm:
            continue
        if cyclic and mm > m and _allowed(mm, n):
            return False
        if (mm > m or cyclic) and _allowed(2 * mm, n):
            return False
    for order, top in POLYHEDRAL.values():
        if m <= top and order % h.order == 0 and _allowed(order, n):
            return False
    return True


def _kross_candidates(report: GroupReport) -> list[MoebiusMap]:
    """σ = τ∘ν_τ^-1 for τ in G: the σ with A∘σ = β∘A∘β^-1 (β = ν_τ)."""
    return sorted_maps({s @ n.inverse() for s, n in report.gamma_table})


def _base_map(a: RatFunc, its: Iterates):
    """(F, step): F = A for non-quasi-powers, F = A∘2 for quasi-powers."""
    qc = quasi_power_class(a, its.critical(1))
    if qc.kind == "NotQuasiPower":
        return qc, a, 1
    return qc, its[2], 2


def sigma_infinity(a: RatFunc, k_max: int | None = None, budget: int | None = None,
                   assert_indecomposable: bool = False) -> LimitGroupResult:
    """Σ∞(A) from levels 1..k_max, with a completeness argument when one applies."""
    if a.degree < 2:
        raise ValueError("sigma_infinity needs degree at least two")
    its = Iterates(a, budget)
    k_max = k_max if k_max is not None else default_kmax(a.degree, budget)
    qc = quasi_power_class(a, its.critical(1))
    if qc.kind == "PowerMapConjugate":
        return _power_result("sigma", k_max)
    try:
        _, f, step = _base_map(a, its)
    except DegreeBudgetExceeded:
        return LimitGroupResult("sigma", "BudgetExhausted", k_max=k_max, reason="second iterate over budget")
    base = group_of(f, its.critical(step))
    indecomposable = (assert_indecomposable and step == 1) or is_indecomposable_by_multiplicity(f, its.critical(step))
    # fast paths when the identity A∘σ = β∘A∘β^-1 pins σ down completely
    if indecomposable and base.complete:
        if base.ghat.order == 1:
            group, reason = base.sigma_group, "indecomposable with trivial Ĝ"
        elif base.g.same_elements(base.aut.elements):
            group, reason = FiniteMoebiusGroup.trivial(), "indecomposable with G = Aut"
        else:
            group, reason = None, None
        if group is not None:
            certs = [LimitCertificate(s, MoebiusMap.identity(), step) for s in group.elements]
            trace = [(step, group)]
            return LimitGroupResult("sigma", "Stabilized", group, step, certs, trace, True, reason, k_max=k_max)
    shortcut = _kross_candidates(base)
    found: dict = {}
    trace = []
    for k in range(1, k_max + 1):
        try:
            its[k]
        except DegreeBudgetExceeded:
            break
        seeds = [(s, "conjugacy-shortcut", k) for s in shortcut] + [(s, "closure", lv) for s, lv in found.items()]
        rep = iterate_group(a, k, seeds=seeds, iterates=its).report
        for s in rep.sigma_group.elements:
            found.setdefault(s, k)
        trace.append((k, rep.sigma_group))
    if not trace:
        return LimitGroupResult("sigma", "BudgetExhausted", k_max=k_max, reason="first level over budget")
    group = trace[-1][1]
    complete, reason = False, None
    if indecomposable and base.complete and all(s in found for s in shortcut):
        complete, reason = True, "indecomposable, every shortcut candidate certified"
    elif _sigma_sieve(its, group):
        complete, reason = True, "order divisibility and axis bound exclude larger groups"
    status, at = _status(trace, complete)
    certs = [LimitCertificate(s, MoebiusMap.identity(), found[s]) for s in group.elements]
    return LimitGroupResult("sigma", status, group, at, certs, trace, complete, reason, k_max=k_max)


def _candidates_from_values(crit: CriticalData, a: RatFunc) -> list[MoebiusMap] | None:
    """Möbius ν with ν(c(A)) ⊆ c(A∘2), or None when that set is not computable."""
    if not crit.values_exact or crit.value_count < 3:
        return None
    cv = crit.values
    targets = set(cv) | {a(v) for v in cv}
    src = cv[:3]
    out = set()
    for dst in itertools.permutations(sorted(targets, key=lambda p: p.sort_key()), 3):
        try:
            nu = moebius_from_three_points(src, list(dst))
        except DegenerateTriple:
            continue
        if all(nu(v) in targets for v in cv):
            out.add(nu)
    # Aut(A∘k) preserves the exceptional set, a single point for non-power maps
    e = exceptional_point(crit, a)
    if e is not None:
        out = {nu for nu in out if nu(e) == e}
    return sorted_maps(out)


def exceptional_point(crit: CriticalData, a: RatFunc) -> SpherePoint | None:
    """The point e with a^-1(e) = {e}, if there is one."""
    for v in crit.values:
        fp = crit.fibers[v]
        if fp.exact and len(fp.points) == 1 and fp.points[0] == (v, a.degree):
            return v
    return None


def _in_aut(f: RatFunc, s: MoebiusMap) -> bool:
    return pre_compose(f, s) == post_compose(s, f)


def aut_infinity(a: RatFunc, k_max: int | None = None, budget: int | None = None) -> LimitGroupResult:
    """Aut∞(A) from levels 1..k_max, using the critical-value filter and the axis bound."""
    if a.degree < 2:
        raise ValueError("aut_infinity needs degree at least two")
    its = Iterates(a, budget)
    k_max = k_max if k_max is not None else default_kmax(a.degree, budget)
    qc = quasi_power_class(a, its.critical(1))
    if qc.kind == "PowerMapConjugate":
        return _power_result("aut", k_max)
    try:
        _, f, step = _base_map(a, its)
    except DegreeBudgetExceeded:
        return LimitGroupResult("aut", "BudgetExhausted", k_max=k_max, reason="second iterate over budget")
    cands = _candidates_from_values(its.critical(step), f)
    found: dict = {}
    trace = []
    for k in range(1, k_max + 1):
        try:
            fk = its[k]
        except DegreeBudgetExceeded:
            break
        level = set()
        if k == 1:
            rep = iterate_group(a, 1, iterates=its).report
            level.update(rep.aut.elements if rep.aut is not None else ())
        elif cands is None:
            # no complete candidate list: axis solutions through known
            # rotation axes and fixed points of F stand in for a full search
            for s in _axis_aut_candidates(fk, found):
                if _in_aut(fk, s):
                    level.add(s)
        for s in (cands or []) + list(found):
            if s not in level and _in_aut(fk, s):
                level.add(s)
        for s in level:
            found.setdefault(s, k)
        trace.append((k, group_closure(level, cap=max(60, 2 * fk.degree))))
    if not trace:
        return LimitGroupResult("aut", "BudgetExhausted", k_max=k_max, reason="first level over budget")
    # Aut(A∘j) and Aut(A∘k) both sit in Aut(A∘lcm(j, k)), so the union is a group
    try:
        group = group_closure(list(found), cap=max(60, 2 * a.degree ** k_max))
    except ClosureCapExceeded:
        group = trace[-1][1]
    for s in group.elements:
        if s not in found:
            found[s] = _certify_level(its, s, found)
    complete, reason, bound = False, None, None
    if group.order > 1 and max(group.orders.values()) > 5:
        L = _axis_order(its, group.max_order_element())
        if L:
            bound = 2 * L
            if group.order == bound:
                complete, reason = True, f"axis bound 2*{L} attained"
    if not complete and cands is not None:
        pending = [t for t in cands if t not in group]
        if all(_excluded(group, t, set(cands)) for t in pending):
            complete, reason = True, "every critical-value candidate certified or excluded"
    status, at = _status(trace, complete)
    certs = [LimitCertificate(s, s, found[s]) for s in group.elements]
    return LimitGroupResult("aut", status, group, at, certs, trace, complete, reason, bound, k_max)


def _axis_aut_candidates(f: RatFunc, found) -> list[MoebiusMap]:
    out = []
    for s in found:
        if s.is_identity():
            continue
        pts, exact = s.fixed_points()
        if exact and len(pts) == 2:
            pairs, _ = axis_solutions(f, axis_map(*pts), "aut")
            out += [t for t, _ in pairs]
    return out


def _certify_level(its: Iterates, s: MoebiusMap, found: dict) -> int:
    for k in range(1, AXIS_LEVELS + 1):
        try:
            if _in_aut(its[k], s):
                return k
        except DegreeBudgetExceeded:
            break
    raise AssertionError(f"closure element {s} not certified at any affordable level")


def _excluded(group: FiniteMoebiusGroup, t: MoebiusMap, allowed: set) -> bool:
    """t cannot lie in Aut∞: joining it to the group leaves the candidate set."""
    try:
        closed = group_closure(list(group.elements) + [t], cap=len(allowed))
    except ClosureCapExceeded:
        return True
    return not closed.element_set() <= allowed


# --- S(A) -----------------------------------------------------------------

@dataclass
class SSetResult:
    elements: dict                 # ν -> first level where ν ∈ Ĝ(A∘k)
    levels: list                   # (k, Ĝ(A∘k))
    inclusion_ok: bool

    def __contains__(self, nu):
        return nu in self.elements


def maps_values_into(nu: MoebiusMap, src: CriticalData, a: RatFunc) -> bool:
    """ν(c(A)) ⊆ c(A∘2), decided exactly even for unresolved critical values."""
    targets = set(src.values) | {a(v) for v in src.values}
    if not all(nu(v) in targets for v in src.values):
        return False
    if src.values_exact:
        return True
    finite = [p for p in targets if not p.is_infinity]
    dst = Poly([1])
    for p in finite:
        dst = dst * Poly([-p.x, 1])
    for f in src.unresolved_values:
        dst = dst * f
        img = _value_polynomial(a, f)
        # roots of f landing on poles are infinite values of A∘2
        if img.degree < f.degree:
            targets.add(INFINITY)
        dst = dst * img
    dst = squarefree_part(dst)
    inv = nu.inverse()
    for f in src.unresolved_values:
        g = f.homogeneous_substitute(Poly([inv.b, inv.a]), Poly([inv.d, inv.c]), f.degree)
        if g.degree < f.degree and INFINITY not in targets:
            return False
        g = squarefree_part(g)
        if poly_gcd(g, dst).degree != g.degree:
            return False
    return True


def s_set(a: RatFunc, k_max: int | None = None, budget: int | None = None) -> SSetResult:
    """Ĝ(A∘k) for k <= k_max, each ν checked against ν(c(A)) ⊆ c(A∘2)."""
    its = Iterates(a, budget)
    crit = its.critical(1)
    if quasi_power_class(a, crit).is_quasi_power:
        raise ValueError("S(A) is infinite for quasi-powers")
    k_max = k_max if k_max is not None else default_kmax(a.degree, budget)
    elements, levels = {}, []
    for k in range(1, k_max + 1):
        try:
            its[k]
        except DegreeBudgetExceeded:
            break
        ghat = iterate_group(a, k, iterates=its).report.ghat
        levels.append((k, ghat))
        for nu in ghat.elements:
            elements.setdefault(nu, k)
    for nu in elements:
        if not maps_values_into(nu, crit, a):
            raise AssertionError(f"{nu} does not map c(A) into c(A∘2)")
    return SSetResult(elements, levels, True)


# --- shared iterates, Chebyshev, normal forms --------------------------------

def shares_iterate(a: RatFunc, b: RatFunc, k_max: int, budget: int | None = None) -> int | None:
    """Least k <= k_max with a∘k = b∘k, else None."""
    if a.degree != b.degree:
        return None
    ia, ib = Iterates(a, budget), Iterates(b, budget)
    for k in range(1, k_max + 1):
        if ia[k] == ib[k]:
            return k
    return None


def chebyshev(n: int) -> Poly:
    """T_n from the closed formula (n/2) Σ (-1)^k (n-k-1)!/(k!(n-2k)!) (2z)^(n-2k)."""
    if n < 1:
        raise ValueError("chebyshev needs n >= 1")
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        c = Fraction(n, 2) * (-1) ** k * Fraction(factorial(n - k - 1), factorial(k) * factorial(n - 2 * k))
        coeffs[n - 2 * k] += c * 2 ** (n - 2 * k)
    return Poly(coeffs)


def normal_form(p, tower=None) -> tuple[Poly, MoebiusMap]:
    """Monic, centered conjugate q = μ^-1∘p∘μ with μ = αz + β affine."""
    if isinstance(p, RatFunc):
        if not p.is_polynomial:
            raise ValueError("normal_form needs a polynomial")
        p = p.num * p.den[0].inverse()
    n = p.degree
    if n < 2:
        raise ValueError("normal_form needs degree at least two")
    lc = p.lc
    roots, _, _ = nth_roots(lc.inverse(), n - 1, tower)
    if not roots:
        raise RootNotInTower(f"no ({n - 1})-th root of 1/({lc}) in the tower")
    alpha = ONE if ONE in roots else next((r for r in roots if r.is_rational()), roots[0])
    beta = -p[n - 1] / (lc * n)
    mu = MoebiusMap(alpha, beta, 0, 1)
    shifted = p.compose(Poly([beta, alpha])) - Poly([beta])
    q = Poly([c / alpha for c in shifted.coeffs])
    return q, mu


def is_indecomposable_by_multiplicity(a: RatFunc, crit: CriticalData | None = None) -> bool:
    """True when local multiplicities alone rule out every split A = A1∘A2.

    At a point z, mult_A(z) = mult_A2(z) * mult_A1(A2(z)) with the factors
    bounded by deg A2 and deg A1.
    """
    crit = crit if crit is not None else critical_data(a)
    if not crit.values_exact:
        return False
    mults = {m for v in crit.values for m in crit.fibers[v].multiplicities}
    n = a.degree
    for d1 in range(2, n // 2 + 1):
        if n % d1:
            continue
        d2 = n // d1
        for outer, inner in ((d1, d2), (d2, d1)):
            if all(any(m % u == 0 and u <= inner and m // u <= outer for u in range(1, m + 1)) for m in mults):
                return False
    return True


__all__ = [
    "IterateGroupReport", "LimitGroupResult", "LimitCertificate", "SSetResult", "Iterates",
    "homozygous_order", "axis_group", "seq0_check", "swap_solutions", "iterate_group",
    "sigma_infinity", "aut_infinity", "s_set", "shares_iterate", "chebyshev", "normal_form",
    "is_indecomposable_by_multiplicity", "maps_values_into", "default_kmax",
]
