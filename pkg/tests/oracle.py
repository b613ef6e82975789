"""Independent sympy oracle for derived values.

Nothing here calls the package's algorithms: inputs are converted to
sympy expressions and every identity is decided by sympy's own
expansion, cancellation and root finding.
"""
from __future__ import annotations

import sympy

z = sympy.Symbol("z")


def expr(f) -> sympy.Expr:
    """Sympy expression of a RatFunc, Poly or MoebiusMap."""
    if hasattr(f, "to_ratfunc"):
        f = f.to_ratfunc()
    if hasattr(f, "num"):
        return f.num.to_sympy(z) / f.den.to_sympy(z)
    return f.to_sympy(z)


def same(e1, e2) -> bool:
    return sympy.simplify(sympy.cancel(sympy.expand(e1 - e2))) == 0


def compose(outer, inner):
    return sympy.cancel(outer.subs(z, inner))


def satisfies(a, sigma, nu) -> bool:
    """a∘σ == ν∘a as rational functions."""
    return same(compose(a, sigma), compose(nu, a))


def critical_points(a) -> list:
    """Finite critical points, each with its local multiplicity."""
    num, den = sympy.fraction(sympy.cancel(a))
    w = sympy.expand(sympy.diff(num, z) * den - num * sympy.diff(den, z))
    out = []
    for r, m in sympy.roots(sympy.Poly(w, z)).items():
        out.append((sympy.nsimplify(r), m + 1))
    return out


def critical_values(a) -> set:
    """Critical values of a rational map, with "oo" for infinity."""
    num, den = sympy.fraction(sympy.cancel(a))
    n = max(sympy.degree(num, z), sympy.degree(den, z))
    vals = set()
    for r, _ in critical_points(a):
        d = den.subs(z, r)
        vals.add("oo" if sympy.simplify(d) == 0 else sympy.nsimplify(sympy.simplify(num.subs(z, r) / d)))
    # local multiplicity at infinity is |deg num - deg den| unless it is 1
    dn, dd = sympy.degree(num, z), sympy.degree(den, z)
    if abs(dn - dd) > 1:
        vals.add("oo" if dn > dd else 0)
    elif dn == dd:
        w = sympy.cancel(a.subs(z, 1 / z))
        lead = sympy.limit(a, z, sympy.oo)
        order = sympy.Poly(sympy.numer(sympy.cancel(w - lead)), z)
        low = min(m[0] for m in order.monoms())
        if low > 1:
            vals.add(sympy.nsimplify(lead))
    del n
    return vals


def fiber(a, value) -> dict:
    """Finite preimages of a finite value, with multiplicities."""
    num, den = sympy.fraction(sympy.cancel(a))
    return {sympy.nsimplify(r): m for r, m in sympy.roots(sympy.Poly(sympy.expand(num - value * den), z)).items()}


def iterate(a, k):
    out = z
    for _ in range(k):
        out = compose(a, out)
    return out


def moebius_order(m, cap: int = 60):
    cur = m
    for k in range(1, cap + 1):
        if same(cur, z):
            return k
        cur = compose(m, cur)
    return None


def chebyshev(n):
    return sympy.expand(sympy.chebyshevt(n, z))
