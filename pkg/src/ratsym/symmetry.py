"""The group of Möbius maps σ with A∘σ = ν∘A, and its pieces.

For a rational function A the group G(A) consists of the Möbius maps σ
for which A∘σ = ν_σ∘A for some Möbius ν_σ.  The map σ -> ν_σ is a
homomorphism whose kernel is Σ(A) (A∘σ = A) and whose image is Ĝ(A); the
maps with ν_σ = σ form Aut(A).

Candidates for σ come from fiber matching: σ sends the fiber over each
critical value c onto the fiber over ν(c) and preserves local
multiplicities, so three anchor points with few possible images pin σ
down.  Every candidate is then verified by exact composition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .axis import axis_layer, axis_solutions
from .critical import CriticalData, critical_data
from .errors import ClosureCapExceeded, DegenerateTriple
from .field import ONE, TowerElement
from .moebius import (
    FiniteMoebiusGroup,
    MoebiusMap,
    axis_map,
    conjugate_rf,
    group_closure,
    moebius_from_three_points,
    post_compose,
    pre_compose,
    sorted_maps,
)
from .ratfunc import INFINITY, RatFunc, SpherePoint
from .roots import nth_roots

CORRESPONDENCE_CAP = 10 ** 5
SAMPLE_POINTS = [INFINITY] + [SpherePoint(k) for k in (0, 1, -1, 2, -2, 3, -3, 4, 5, 7, 11)]


# --- certificates -------------------------------------------------------

@dataclass(frozen=True)
class SymmetryCertificate:
    """Witness that A∘sigma = nu∘A, both sides in canonical form."""

    sigma: MoebiusMap
    nu: MoebiusMap
    lhs: RatFunc
    rhs: RatFunc

    def check(self, a: RatFunc) -> bool:
        lhs = pre_compose(a, self.sigma)
        rhs = post_compose(self.nu, a)
        return lhs == rhs == self.lhs == self.rhs


@dataclass(frozen=True)
class Rejected:
    sigma: MoebiusMap
    reason: str

    def __bool__(self):
        return False


def _sample_points(a: RatFunc, count: int = 3) -> list[SpherePoint]:
    pts, vals = [], []
    for p in SAMPLE_POINTS:
        v = a(p)
        if v not in vals:
            pts.append(p)
            vals.append(v)
        if len(pts) == count:
            return pts
    k = 12
    while len(pts) < count:
        p = SpherePoint(k)
        v = a(p)
        if v not in vals:
            pts.append(p)
            vals.append(v)
        k += 1
    return pts


def verify_pair(a: RatFunc, sigma: MoebiusMap):
    """Find ν with a∘σ = ν∘a from three sample points, then check exactly."""
    pts = _sample_points(a)
    src = [a(p) for p in pts]
    dst = [a(sigma(p)) for p in pts]
    try:
        nu = moebius_from_three_points(src, dst)
    except DegenerateTriple:
        return Rejected(sigma, "sample images collide")
    lhs = pre_compose(a, sigma)
    rhs = post_compose(nu, a)
    if lhs != rhs:
        return Rejected(sigma, "composition identity fails")
    return SymmetryCertificate(sigma, nu, lhs, rhs)


# --- quasi-powers -------------------------------------------------------

@dataclass(frozen=True)
class QuasiClass:
    """NotQuasiPower, QuasiPower or PowerMapConjugate.

    For quasi-powers ``axis`` is a Möbius map sending 0 and oo to the two
    critical points.  For PowerMapConjugate, ``exponent`` is ±n and
    ``conjugator`` satisfies conjugator^-1 ∘ A ∘ conjugator = z^exponent
    when such a map exists in the tower (``constant`` records c when only
    c*z^exponent is reachable).
    """

    kind: str
    exponent: int | None = None
    conjugator: MoebiusMap | None = None
    constant: TowerElement | None = None
    axis: MoebiusMap | None = None

    @property
    def is_quasi_power(self) -> bool:
        return self.kind != "NotQuasiPower"

    def family(self) -> str | None:
        if self.kind == "NotQuasiPower":
            return None
        return f"mu∘{{c*z, c/z : c != 0}}∘mu^-1 with mu = {self.axis}"


def quasi_power_class(a: RatFunc, crit: CriticalData | None = None) -> QuasiClass:
    crit = crit if crit is not None else critical_data(a)
    if crit.value_count != 2:
        return QuasiClass("NotQuasiPower")
    c0, c1 = crit.values
    (p0, _), = crit.fiber(c0).points
    (p1, _), = crit.fiber(c1).points
    axis = axis_map(p0, p1)
    images = {a(c0), a(c1)}
    if not images <= {c0, c1}:
        return QuasiClass("QuasiPower", axis=axis)
    n = a.degree
    b = conjugate_rf(a, axis)
    swaps = a(p0) == p1
    if swaps:
        # b = k / z^n ; conjugating by s z gives k s^-(n+1) / z^n
        k = b.num.lc / b.den.lc
        roots, _, _ = nth_roots(k, n + 1)
        exponent = -n
    else:
        k = b.num.lc / b.den.lc
        roots, _, _ = nth_roots(k.inverse(), n - 1)
        exponent = n
    if roots:
        conj = axis @ MoebiusMap.scaling(roots[0])
        return QuasiClass("PowerMapConjugate", exponent, conj, ONE, axis)
    return QuasiClass("PowerMapConjugate", exponent, axis, k, axis)


# --- candidates from fiber matching -------------------------------------

def _point_classes(crit: CriticalData):
    """Critical-fiber points grouped by (fiber signature, multiplicity)."""
    classes: dict = {}
    complete: dict = {}
    for v in crit.values:
        fp = crit.fibers[v]
        sig = fp.signature
        for p, m in fp.points:
            classes.setdefault((sig, m), []).append((p, v))
            complete.setdefault((sig, m), True)
        for f, m in fp.unresolved:
            complete[(sig, m)] = False
            classes.setdefault((sig, m), [])
    return classes, complete


def _assignments(anchors, classes, cap):
    """Injective, fiber-consistent images for three anchors."""
    pools = [classes[key] for key, _ in anchors]
    anchor_vals = [v for _, (p, v) in anchors]
    count = 0
    for combo in itertools.product(*pools):
        pts = [p for p, _ in combo]
        if len(set(pts)) < 3:
            continue
        vals = [v for _, v in combo]
        if any((anchor_vals[i] == anchor_vals[j]) != (vals[i] == vals[j]) for i in range(3) for j in range(i)):
            continue
        count += 1
        if count > cap:
            raise ClosureCapExceeded(f"more than {cap} fiber correspondences")
        yield pts


def _choose_anchors(classes, usable):
    """Three anchor points minimizing the number of correspondences."""
    pool = []
    for key in sorted(usable, key=lambda k: len(classes[k])):
        for pv in classes[key]:
            pool.append((key, pv))
    pool = pool[:14]
    best, best_count = None, None
    for trio in itertools.combinations(pool, 3):
        if len({pv[0] for _, pv in trio}) < 3:
            continue
        size = 1
        for key, _ in trio:
            size *= len(classes[key])
        if best_count is not None and size >= best_count * 4:
            continue
        n = sum(1 for _ in _assignments(trio, classes, CORRESPONDENCE_CAP))
        if best_count is None or n < best_count:
            best, best_count = trio, n
    return best


def candidate_sigmas(a: RatFunc, crit: CriticalData | None = None) -> tuple[list[MoebiusMap], bool]:
    """Möbius maps compatible with the fiber structure, and whether they are exhaustive."""
    crit = crit if crit is not None else critical_data(a)
    classes, complete = _point_classes(crit)
    usable = [k for k in classes if complete[k] and classes[k]]
    exhaustive = crit.values_exact
    anchors = _choose_anchors(classes, usable)
    if anchors is None:
        exhaustive = False
        partial = [k for k in classes if classes[k]]
        anchors = _choose_anchors(classes, partial)
        if anchors is None:
            return [MoebiusMap.identity()], False
    src = [p for _, (p, _) in anchors]
    out = set()
    for dst in _assignments(anchors, classes, CORRESPONDENCE_CAP):
        sigma = moebius_from_three_points(src, dst)
        if _respects_classes(sigma, classes, usable):
            out.add(sigma)
    return sorted_maps(out), exhaustive


def _respects_classes(sigma: MoebiusMap, classes, usable) -> bool:
    for key in usable:
        members = {p for p, _ in classes[key]}
        if any(sigma(p) not in members for p in members):
            return False
    return True


# --- group reports --------------------------------------------------------

@dataclass
class GroupReport:
    function: RatFunc
    quasi_class: QuasiClass
    g: FiniteMoebiusGroup | None = None
    sigma_group: FiniteMoebiusGroup | None = None
    ghat: FiniteMoebiusGroup | None = None
    aut: FiniteMoebiusGroup | None = None
    gamma_table: list = field(default_factory=list)      # (sigma, nu)
    certificates: list = field(default_factory=list)
    complete: bool = False
    critical: CriticalData | None = None
    provenance: dict = field(default_factory=dict)  # sigma -> how it was found

    @property
    def family(self) -> str | None:
        return self.quasi_class.family()

    def nu(self, sigma: MoebiusMap) -> MoebiusMap:
        return dict(self.gamma_table)[sigma]

    def burnside_ok(self) -> bool:
        return self.g is None or self.g.order == self.ghat.order * self.sigma_group.order

    def order_bound_ok(self) -> bool:
        return self.g is None or self.g.order <= max(60, 2 * self.function.degree)

    def element_orders_ok(self) -> bool:
        return self.g is None or max(self.g.orders.values()) <= self.function.degree

    def homomorphism_ok(self) -> bool:
        if self.g is None:
            return True
        table = dict(self.gamma_table)
        return all(table[s @ t] == table[s] @ table[t] for s in table for t in table)


def _finish(a, qc, crit, certs, complete) -> GroupReport:
    table = [(c.sigma, c.nu) for c in certs]
    g = FiniteMoebiusGroup.from_elements(s for s, _ in table)
    sigma = FiniteMoebiusGroup.from_elements(s for s, n in table if n.is_identity())
    aut = FiniteMoebiusGroup.from_elements(s for s, n in table if s == n)
    ghat = FiniteMoebiusGroup.from_elements({n for _, n in table})
    order = {s: i for i, s in enumerate(g.elements)}
    table.sort(key=lambda sn: order[sn[0]])
    certs = sorted(certs, key=lambda c: order[c.sigma])
    return GroupReport(a, qc, g, sigma, ghat, aut, table, certs, complete, crit)


def group_of(a: RatFunc, crit: CriticalData | None = None, seeds=(), use_axes: bool = True) -> GroupReport:
    """G(A) with Σ(A), Ĝ(A), Aut(A), the σ -> ν table and certificates.

    When fiber matching cannot be exhaustive, symmetries found on axes
    through fixed points (and any extra ``seeds``) are verified and added.
    """
    if a.degree < 2:
        raise ValueError("group_of needs degree at least two")
    crit = crit if crit is not None else critical_data(a)
    qc = quasi_power_class(a, crit)
    if qc.is_quasi_power:
        return _quasi_report(a, qc, crit)
    found, complete = candidate_sigmas(a, crit)
    cands = [(s, "base-meb") for s in found]
    cands += [(s, "conjugacy-shortcut") if isinstance(s, MoebiusMap) else s for s in seeds]
    if not complete and use_axes:
        cands += axis_layer(a)
    certs, prov = {}, {}
    for s, how in cands:
        if s in certs or s in prov:
            continue
        c = verify_pair(a, s)
        prov[s] = how
        if c:
            certs[s] = c
    cap = max(60, 2 * a.degree)
    closed = group_closure(list(certs), cap=cap)
    for s in closed.elements:
        if s not in certs:
            c = verify_pair(a, s)
            if not c:
                raise AssertionError(f"closure element {s} fails verification")
            certs[s] = c
            prov[s] = "closure"
    report = _finish(a, qc, crit, list(certs.values()), complete)
    report.provenance = {s: prov[s] for s in report.g.elements}
    return report


def _quasi_report(a: RatFunc, qc: QuasiClass, crit: CriticalData) -> GroupReport:
    """Quasi-powers: G(A) is infinite; Σ(A) and Aut(A) are solved on the axis."""
    pairs, ok1 = axis_solutions(a, qc.axis, "sigma")
    sig = [s for s, _ in pairs]
    certs = [verify_pair(a, s) for s in sig]
    sigma = FiniteMoebiusGroup.from_elements(sig)
    aut = None
    ok2 = True
    if qc.kind == "QuasiPower":
        pairs, ok2 = axis_solutions(a, qc.axis, "aut")
        auts = [s for s, _ in pairs]
        certs += [verify_pair(a, s) for s in auts if s not in sigma]
        aut = FiniteMoebiusGroup.from_elements(auts)
    certs = [c for c in certs if c]
    table = [(c.sigma, c.nu) for c in certs]
    return GroupReport(a, qc, None, sigma, None, aut, table, certs, ok1 and ok2, crit)


def gamma_set(a: RatFunc, report: GroupReport | None = None, max_power: int | None = None) -> list[MoebiusMap]:
    """σ in G(A) whose ν is an iterate σ∘l (l >= 0)."""
    report = report if report is not None else group_of(a)
    if report.g is not None:
        out = []
        for s, n in report.gamma_table:
            p, powers = MoebiusMap.identity(), []
            for _ in range(report.g.orders[s]):
                powers.append(p)
                p = p @ s
            if n in powers:
                out.append(s)
        return sorted_maps(out)
    max_power = max_power if max_power is not None else 2 * a.degree + 1
    out = set()
    for l in range(max_power + 1):
        pairs, _ = axis_solutions(a, report.quasi_class.axis, "gamma", l)
        out.update(s for s, _ in pairs)
    return sorted_maps(out)


def unique_multiplicity_points(crit: CriticalData) -> list[SpherePoint]:
    """Points whose local multiplicity no other point shares."""
    counts: dict = {}
    for v in crit.values:
        for m in crit.fibers[v].multiplicities:
            counts[m] = counts.get(m, 0) + 1
    out = []
    for v in crit.values:
        for p, m in crit.fibers[v].points:
            if m > 1 and counts[m] == 1:
                out.append(p)
    return out


def conjugate_report_elements(report: GroupReport, beta: MoebiusMap) -> set:
    inv = beta.inverse()
    return {inv @ s @ beta for s in report.g.elements}


__all__ = [
    "SymmetryCertificate", "Rejected", "QuasiClass", "GroupReport", "verify_pair",
    "quasi_power_class", "candidate_sigmas", "group_of", "gamma_set", "unique_multiplicity_points",
]
