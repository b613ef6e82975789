"""Critical values, fibers and fixed points."""
import sympy
from hypothesis import given, settings, strategies as st

from conftest import B, D12, EX21
from oracle import critical_values, expr, fiber as oracle_fiber
from ratsym.critical import critical_data, fixed_points, iterate_critical_data
from ratsym.parser import parse_expression as P
from ratsym.ratfunc import INFINITY, point, rf_iterate


def profile(crit, v):
    return sorted((str(p), m) for p, m in crit.fiber(v).points)


def test_example_fibers():
    c = critical_data(P(EX21))
    assert [str(v) for v in c.values] == ["1", "9", "oo"]
    assert profile(c, 1) == [("-8", 1), ("0", 3)]
    assert profile(c, "oo") == [("1", 1), ("oo", 3)]
    assert profile(c, 9) == [("-2 + 2*sqrt(3)", 2), ("-2 - 2*sqrt(3)", 2)]
    assert c.riemann_hurwitz_ok()


def test_b_fibers():
    c = critical_data(P(B))
    assert {str(v) for v in c.values} == {"0", "-1", "1"}
    assert profile(c, 0) == [("0", 2), ("oo", 2)]


def test_power_map_values():
    assert critical_data(P("z^2")).values == [point(0), INFINITY]


def test_fixed_points():
    assert point(0) in [p for p, _ in fixed_points(rf_iterate(P(B), 1))[0]]
    assert point(0) in [p for p, _ in fixed_points(P(D12))[0]]
    assert [p for p, _ in fixed_points(P("z^2"))[0]] == [point(0), point(1), INFINITY]


def test_values_match_oracle():
    for text in (EX21, B, "4*z^3-3*z", "z^3/(z-1)", "z+27/z^3"):
        a = P(text)
        c = critical_data(a)
        assert c.values_exact
        ours = {"oo" if v.is_infinity else sympy.nsimplify(v.x.to_sympy()) for v in c.values}
        theirs = critical_values(expr(a))
        assert {sympy.simplify(x) if x != "oo" else x for x in ours} == {sympy.simplify(x) if x != "oo" else x for x in theirs}


def test_fiber_matches_oracle():
    a = P(EX21)
    ours = {sympy.nsimplify(p.x.to_sympy()): m for p, m in critical_data(a).fiber(9).points}
    assert ours == oracle_fiber(expr(a), 9)


def test_iterate_critical_data_contains_base_and_images():
    a = P("(z^2-1)/(z^2+1)")
    c2 = iterate_critical_data(a, 2)
    base = critical_data(a)
    assert set(base.values) <= set(c2.values)
    assert {a(v) for v in base.values} <= set(c2.values)
    assert c2.riemann_hurwitz_ok()


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(-3, 3))
def test_riemann_hurwitz_on_belyi_family(a, b, shift):
    # z^a (z-1)^b + shift has critical points 0, 1, a/(a+b) and oo
    f = P(f"z^{a}*(z-1)^{b}+({shift})")
    c = critical_data(f)
    if c.values_exact:
        assert c.ramification_total() == 2 * f.degree - 2
