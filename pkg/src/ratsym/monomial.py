"""Equations between rational functions whose coefficients are monomials in unknowns.

Composing a rational function with ``z -> t z`` or ``z -> t / z`` (``t`` a
monomial in unknown scalars) multiplies every coefficient by a monomial and
never mixes coefficients.  Equality of two such functions in lowest terms
means the numerators and denominators are proportional, which is a system
of binomial equations ``x^e = const``.  Those are solved exactly by integer
row reduction of the exponent matrix followed by root extraction.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InfiniteSolutionFamily
from .field import ONE, TowerElement, Tower
from .ratfunc import RatFunc
from .roots import nth_roots


@dataclass(frozen=True)
class MonoRF:
    """num/den with each coefficient ``const * prod(x_j ** e_j)``."""

    num: dict   # degree -> (TowerElement, exponent tuple)
    den: dict
    nvars: int

    @classmethod
    def from_rf(cls, f: RatFunc, nvars: int) -> MonoRF:
        zero = (0,) * nvars
        num = {i: (c, zero) for i, c in enumerate(f.num.coeffs) if c}
        den = {i: (c, zero) for i, c in enumerate(f.den.coeffs) if c}
        return cls(num, den, nvars)

    @property
    def degree(self) -> int:
        return max(list(self.num) + list(self.den))

    def pre_scale(self, e) -> MonoRF:
        """self(t z) with t = x**e."""
        def go(part):
            return {i: (c, _add(x, e, i)) for i, (c, x) in part.items()}
        return MonoRF(go(self.num), go(self.den), self.nvars)

    def pre_swap(self, e) -> MonoRF:
        """self(t / z) with t = x**e, homogenized by z**degree."""
        n = self.degree

        def go(part):
            return {n - i: (c, _add(x, e, i)) for i, (c, x) in part.items()}
        return MonoRF(go(self.num), go(self.den), self.nvars)

    def post_scale(self, e, k: int = 1) -> MonoRF:
        """t**k * self."""
        return MonoRF({i: (c, _add(x, e, k)) for i, (c, x) in self.num.items()}, self.den, self.nvars)

    def post_swap(self, e) -> MonoRF:
        """t / self."""
        return MonoRF({i: (c, _add(x, e, 1)) for i, (c, x) in self.den.items()}, self.num, self.nvars)


def _add(x, e, k):
    return tuple(a + k * b for a, b in zip(x, e))


def unit(j: int, nvars: int, sign: int = 1) -> tuple:
    return tuple(sign if i == j else 0 for i in range(nvars))


def solve_equal(lhs: MonoRF, rhs: MonoRF, tower: Tower | None = None) -> tuple[list[tuple], bool]:
    """All nonzero assignments of the unknowns making lhs == rhs.

    Returns the solutions found in the tower and whether that list is
    complete.  Raises InfiniteSolutionFamily for positive-dimensional sets.
    """
    if set(lhs.num) != set(rhs.num) or set(lhs.den) != set(rhs.den):
        return [], True
    rows = []
    for part_l, part_r in ((lhs.num, rhs.num), (lhs.den, rhs.den)):
        for k in part_l:
            cl, el = part_l[k]
            cr, er = part_r[k]
            # x**(el - er) = lambda * cr / cl
            rows.append(([a - b for a, b in zip(el, er)], cr / cl))
    v0, r0 = rows[0]
    system = [([a - b for a, b in zip(v, v0)], r / r0) for v, r in rows[1:]]
    return _solve_binomial(system, lhs.nvars, tower)


def _solve_binomial(rows, nvars: int, tower):
    rows = [[list(v), r] for v, r in rows]
    pivots = []
    free = list(range(len(rows)))
    for col in range(nvars):
        while True:
            active = [i for i in free if rows[i][0][col]]
            if len(active) <= 1:
                break
            p = min(active, key=lambda i: abs(rows[i][0][col]))
            pv, pr = rows[p]
            for i in active:
                if i == p:
                    continue
                q = rows[i][0][col] // pv[col]
                rows[i][0] = [a - q * b for a, b in zip(rows[i][0], pv)]
                rows[i][1] = rows[i][1] / pr ** q
        if active:
            pivots.append((col, active[0]))
            free.remove(active[0])
    for i in free:
        if any(rows[i][0]):
            raise AssertionError("row reduction left a nonzero free row")
        if rows[i][1] != ONE:
            return [], True
    if len(pivots) < nvars:
        raise InfiniteSolutionFamily("solution set is positive dimensional")
    partial = [dict()]
    complete = True
    for col, i in reversed(pivots):
        vec, rhs = rows[i]
        nxt = []
        for sol in partial:
            value = rhs
            for j in range(col + 1, nvars):
                if vec[j]:
                    value = value / sol[j] ** vec[j]
            roots, tower, exact = nth_roots(value, vec[col], tower)
            complete = complete and exact
            for r in roots:
                s = dict(sol)
                s[col] = r
                nxt.append(s)
        partial = nxt
    sols = sorted({tuple(s[j] for j in range(nvars)) for s in partial}, key=lambda t: [x.sort_key() for x in t])
    return sols, complete


def as_element(x) -> TowerElement:
    return x if isinstance(x, TowerElement) else TowerElement(x)
