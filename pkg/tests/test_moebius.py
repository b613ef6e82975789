"""Möbius maps, finite groups and their invariants."""
import math

import pytest
from hypothesis import given, settings, strategies as st

from conftest import EX21
from oracle import expr, moebius_order as oracle_order, same
from ratsym.errors import DegenerateTriple, UnsupportedClass
from ratsym.field import I, TowerElement
from ratsym.moebius import (
    MoebiusMap, conjugate_rf, group_closure, invariant_function, moebius_from_three_points,
    moebius_order, pre_compose, two_sided,
)
from ratsym.parser import parse_expression as P

M = lambda s: MoebiusMap.from_ratfunc(P(s))  # noqa: E731


def test_three_point_maps():
    assert moebius_from_three_points([0, "oo", -8], ["oo", 0, 1]) == M("-8/z")
    assert moebius_from_three_points([1, "oo", 9], ["oo", 1, 9]) == M("(z+63)/(z-1)")
    assert moebius_from_three_points([0, 1, "oo"], [0, 1, "oo"]).is_identity()
    with pytest.raises(DegenerateTriple):
        moebius_from_three_points([0, 0, 1], [0, 1, 2])


def test_orders():
    assert moebius_order(M("-8/z")) == 2
    assert moebius_order(M("i*z")) == 4
    assert moebius_order(M("z+1")) == math.inf


def test_closures():
    assert group_closure([M("-z"), M("1/z")]).cls == "D4"
    assert group_closure([M("i*z"), M("1/z")]).cls == "D8"
    g = group_closure([M("i*z"), M("1/z"), M("(z+i)/(z-i)")])
    assert (g.cls, g.order) == ("S4", 24)


def test_invariant_functions():
    assert invariant_function(group_closure([M("-z")])) == P("z^2")
    assert invariant_function(group_closure([M("i*z")])) == P("z^4")
    d4 = group_closure([M("-z"), M("1/z")])
    theta = invariant_function(d4)
    assert theta.degree == 4
    for s in d4.elements:
        assert pre_compose(theta, s) == theta
    with pytest.raises(UnsupportedClass):
        invariant_function(group_closure([M("i*z"), M("1/z"), M("(z+i)/(z-i)")]))


def test_conjugation():
    assert conjugate_rf(P("z^2"), M("z+1")) == P("z^2+2*z")
    assert conjugate_rf(P(EX21), MoebiusMap.identity()) == P(EX21)
    m1, m2 = M("(z+7)/(z-9)"), M("(2*i*sqrt(2)*z+2*i*sqrt(2))/(-z+1)")
    want = P("4*z*((i*sqrt(2)+1)*z^2-i*sqrt(2)+1)/((2*i*sqrt(2)+1)*z^4+6*z^2-2*i*sqrt(2)+1)")
    assert two_sided(m1, P(EX21), m2) == want
    assert m1 @ M("(z+63)/(z-1)") @ m1.inverse() == M("-z")
    assert m2.inverse() @ M("-8/z") @ m2 == M("-z")


# --- properties -----------------------------------------------------------

gauss = st.builds(lambda a, b: TowerElement(a) + I * b, st.integers(-3, 3), st.integers(-3, 3))
maps = st.tuples(gauss, gauss, gauss, gauss).filter(lambda t: t[0] * t[3] - t[1] * t[2] != 0).map(lambda t: MoebiusMap(*t))


@given(maps, maps, maps)
def test_group_laws(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert (a @ a.inverse()).is_identity()


@settings(max_examples=30, deadline=None)
@given(maps, maps)
def test_composition_matches_oracle(a, b):
    assert same(expr(a @ b), expr(a).subs("z", expr(b)))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["-z", "i*z", "1/z", "(z+i)/(z-i)", "-8/z", "(z+63)/(z-1)", "(i*z+1)/(z+i)"]), maps)
def test_order_conjugation_invariant(text, beta):
    m = M(text)
    conj = beta.inverse() @ m @ beta
    assert moebius_order(conj) == moebius_order(m) == oracle_order(expr(m))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.sampled_from(["-z", "i*z", "1/z", "(z+i)/(z-i)", "-1/z"]), min_size=1, max_size=3))
def test_closure_is_group(seeds):
    g = group_closure([M(s) for s in seeds])
    els = g.element_set()
    for x in g.elements:
        assert x.inverse() in els
        for y in g.elements:
            assert x @ y in els
