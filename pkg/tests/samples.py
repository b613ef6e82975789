"""Seeded samplers for random rational functions and Möbius maps over Q(i)."""
from __future__ import annotations

import random

from ratsym.critical import critical_data
from ratsym.dynamics import chebyshev
from ratsym.field import I, TowerElement
from ratsym.moebius import MoebiusMap
from ratsym.poly import Poly
from ratsym.ratfunc import RatFunc

Z = RatFunc.z()


def gaussian(rng: random.Random, bound: int = 3) -> TowerElement:
    return TowerElement(rng.randint(-bound, bound)) + I * rng.randint(-bound, bound)


def random_moebius(rng: random.Random, bound: int = 3) -> MoebiusMap:
    while True:
        a, b, c, d = (gaussian(rng, bound) for _ in range(4))
        if a * d - b * c != 0:
            return MoebiusMap(a, b, c, d)


def _belyi(rng: random.Random, n: int) -> RatFunc:
    a = rng.randint(1, n - 1)
    return Z ** a * (Z - 1) ** (n - a)


def _ratio(rng: random.Random, n: int) -> RatFunc:
    b = rng.randint(1, n - 1)
    return Z ** n / (Z - 1) ** b


def _cheb(rng: random.Random, n: int) -> RatFunc:
    return RatFunc(chebyshev(n))


def _sum(rng: random.Random, n: int) -> RatFunc:
    # z + c/z^(n-1): critical points are the n-th roots of (n-1)c
    return Z + TowerElement(rng.choice([1, -1, 2, 27, -27])) / Z ** (n - 1)


def _generic(rng: random.Random, n: int) -> RatFunc:
    num = Poly([gaussian(rng) for _ in range(n)] + [TowerElement(1)])
    den = Poly([gaussian(rng) for _ in range(rng.randint(0, n))] + [TowerElement(1)])
    return RatFunc(num, den)


FAMILIES = (_belyi, _ratio, _cheb, _sum, _generic)


def random_function(rng: random.Random, lo: int = 2, hi: int = 4) -> RatFunc:
    """α∘P∘β with P drawn from families whose critical data is rational."""
    while True:
        n = rng.randint(lo, hi)
        p = rng.choice(FAMILIES)(rng, n)
        if p.degree < 2:
            continue
        f = random_moebius(rng, 2).to_ratfunc().compose(p) if rng.random() < 0.7 else p
        if rng.random() < 0.7:
            f = f.compose(random_moebius(rng, 2).to_ratfunc())
        return f


def exact_sample(seed: int, count: int, lo: int = 2, hi: int = 4) -> list[RatFunc]:
    """``count`` random functions of degree lo..hi whose critical data is fully exact."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = random_function(rng, lo, hi)
        if critical_data(f).exact:
            out.append(f)
    return out
