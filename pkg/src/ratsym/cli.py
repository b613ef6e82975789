"""Command-line front end: ``ratsym <command> <expr> [options]``.

Every command writes one JSON report.  Exit codes: 0 complete, 3 finished
with a completeness gap, 1 input error, 2 degree budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .axis import axis_group, seq0_check
from .critical import critical_data
from .dynamics import (
    Iterates, aut_infinity, chebyshev, default_kmax, is_indecomposable_by_multiplicity,
    iterate_group, maps_values_into, normal_form, s_set, shares_iterate, sigma_infinity,
)
from .errors import DegreeBudgetExceeded, DepthCapExceeded, RatsymError
from .field import Tower
from .parser import parse_expression, parse_with_tower
from .ratfunc import RatFunc, default_budget, point
from .report import (
    SCHEMA, decode_element, encode_group, encode_limit, encode_map, encode_point, encode_poly, encode_rf,
    group_payloads, verify_report,
)
from .symmetry import group_of

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_DEGRADED = 0, 1, 2, 3
ANALYZE_DEGREE = 16     # limit sweeps inside ``analyze`` stop at this iterate degree

COMMANDS = (
    "analyze", "iterate-groups", "sigma-infinity", "aut-infinity", "s-set",
    "axis-group", "shares-iterate", "chebyshev", "normal-form", "verify",
)


class InputError(Exception):
    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ratsym", description="Exact Möbius symmetry groups of rational functions and their iterates.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("expr", help="rational function in z (for chebyshev: n, for verify: a report file)")
    p.add_argument("expr2", nargs="?", help="second function for shares-iterate")
    p.add_argument("--kmax", type=int, help="highest iterate level to examine")
    p.add_argument("--budget", type=int, help="degree budget for iterates (default: RATSYM_BUDGET or built-in)")
    p.add_argument("--tower", default="", help='initial generators, e.g. "i,sqrt2,sqrt3"')
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--assert-indecomposable", action="store_true", help="treat the input as indecomposable")
    p.add_argument("--approx", action="store_true", help="add decimal renderings (not authoritative)")
    p.add_argument("--z0", default="0", help="axis point fixed by the map (axis-group)")
    p.add_argument("--z1", default="oo", help="second axis point (axis-group)")
    return p


def _protect_negatives(argv):
    """Keep expressions such as "-2*z^2/(z^4+1)" from being read as options."""
    return [" " + a if a.startswith("-") and not a.startswith("--") else a for a in argv]


def _validate(args):
    if args.kmax is not None and args.kmax < 1:
        raise InputError("--kmax must be at least 1")
    if args.budget is not None and args.budget < 1:
        raise InputError("--budget must be at least 1")
    if args.command == "shares-iterate" and args.expr2 is None:
        raise InputError("shares-iterate needs two expressions")
    if args.command != "shares-iterate" and args.expr2 is not None:
        raise InputError(f"unexpected argument {args.expr2!r}")
    if args.command == "chebyshev":
        try:
            n = int(args.expr)
        except ValueError:
            raise InputError("chebyshev takes a positive integer") from None
        if n < 1:
            raise InputError("chebyshev takes a positive integer")
    args.budget = args.budget if args.budget is not None else default_budget()
    args.tower_obj = Tower.parse(args.tower)


def _parse_point(text: str, tower: Tower):
    if text.strip() in ("oo", "inf", "infinity"):
        return point("oo")
    f = parse_expression(text, tower)
    if f.degree > 0:
        raise InputError(f"axis point {text!r} is not a constant")
    return point(f.num[0] / f.den[0])


# --- command bodies; each returns (payload, complete, budget_hit) -------------

def _critical_payload(crit) -> dict:
    fibers = []
    for v in crit.values:
        fp = crit.fibers[v]
        fibers.append({
            "value": encode_point(v),
            "text": str(v),
            "points": [{"point": encode_point(q), "text": str(q), "multiplicity": m} for q, m in fp.points],
            "unresolved": [{"factor": encode_poly(f), "multiplicity": m} for f, m in fp.unresolved],
            "signature": [list(s) for s in fp.signature],
        })
    return {
        "values": [str(v) for v in crit.values],
        "unresolved_values": [encode_poly(f) for f in crit.unresolved_values],
        "fibers": fibers,
        "exact": crit.exact,
    }


def _seq0_axis(a: RatFunc):
    """The axis used for the level-independence check: {0, oo} when 0 is fixed."""
    from .axis import exact_fixed_points

    if a(point(0)) == point(0):
        return point(0), point("oo")
    pts = exact_fixed_points(a)
    if not pts:
        return None
    z0 = pts[0]
    z1 = pts[1] if len(pts) > 1 else (point("oo") if not z0.is_infinity else point(0))
    return z0, z1


def _seq0_payload(a: RatFunc, k_max: int, budget: int):
    axis = _seq0_axis(a)
    if axis is None:
        return None
    ok, orders = seq0_check(a, axis[0], axis[1], k_max, budget)
    return {"axis": [str(axis[0]), str(axis[1])], "orders": orders, "ok": ok}


def _limits(a: RatFunc, args, k_max: int, approx: bool):
    out, complete, budget_hit = {}, True, False
    for key, fn in (("sigma_infinity", sigma_infinity), ("aut_infinity", aut_infinity)):
        kw = {"assert_indecomposable": args.assert_indecomposable} if key == "sigma_infinity" else {}
        res = fn(a, k_max, args.budget, **kw)
        out[key] = encode_limit(res, approx)
        complete = complete and res.complete
        budget_hit = budget_hit or (res.status == "BudgetExhausted")
    return out, complete, budget_hit


def cmd_analyze(a: RatFunc, args):
    crit = critical_data(a)
    report = group_of(a, crit)
    k_max = args.kmax if args.kmax is not None else default_kmax(a.degree, min(args.budget, ANALYZE_DEGREE))
    limits, lim_complete, budget_hit = _limits(a, args, k_max, args.approx)
    if report.g is not None:
        inclusion = {
            "checked": report.ghat.order,
            "ok": all(maps_values_into(nu, crit, a) for nu in report.ghat.elements),
        }
    else:
        inclusion = None
    checks = {
        "burnside": report.burnside_ok(),
        "order_bound": report.order_bound_ok(),
        "element_orders": report.element_orders_ok(),
        "homomorphism": report.homomorphism_ok(),
        "critical_value_inclusion": inclusion,
        "riemann_hurwitz": crit.riemann_hurwitz_ok() if crit.values_exact else None,
        "seq0": _seq0_payload(a, min(k_max, 3), args.budget),
    }
    checks_ok = all(v for k, v in checks.items() if isinstance(v, bool))
    checks_ok = checks_ok and (inclusion is None or inclusion["ok"])
    checks_ok = checks_ok and (checks["seq0"] is None or checks["seq0"]["ok"])
    payload = {
        "quasi_power": report.quasi_class.kind,
        "critical": _critical_payload(crit),
        "groups": group_payloads(report, args.approx),
        "provenance": [{"sigma": str(s), "rule": r} for s, r in report.provenance.items()],
        "indecomposable": {
            "asserted": args.assert_indecomposable,
            "multiplicity_obstruction": is_indecomposable_by_multiplicity(a, crit),
        },
        "limits": limits,
        "checks": checks,
    }
    return payload, report.complete and lim_complete and checks_ok, budget_hit


def cmd_iterate_groups(a: RatFunc, args):
    k_max = args.kmax if args.kmax is not None else default_kmax(a.degree, min(args.budget, ANALYZE_DEGREE))
    its = Iterates(a, args.budget)
    levels, complete = [], True
    for k in range(1, k_max + 1):
        rep = iterate_group(a, k, iterates=its)
        levels.append({
            "level": k,
            "function_degree": rep.function.degree,
            "groups": group_payloads(rep.report, args.approx),
            "provenance": [{"sigma": str(s), "level": lv, "rule": r} for s, (lv, r) in rep.provenance.items()],
            "complete": rep.complete,
        })
        complete = complete and rep.complete
    return {"levels": levels}, complete, False


def cmd_limit(kind):
    def run(a: RatFunc, args):
        if kind == "sigma":
            res = sigma_infinity(a, args.kmax, args.budget, assert_indecomposable=args.assert_indecomposable)
        else:
            res = aut_infinity(a, args.kmax, args.budget)
        key = "sigma_infinity" if kind == "sigma" else "aut_infinity"
        return {"limits": {key: encode_limit(res, args.approx)}}, res.complete, res.status == "BudgetExhausted"
    return run


def cmd_s_set(a: RatFunc, args):
    k_max = args.kmax if args.kmax is not None else default_kmax(a.degree, min(args.budget, ANALYZE_DEGREE))
    try:
        res = s_set(a, k_max, args.budget)
    except ValueError as e:
        return {"s_set": None, "reason": str(e)}, True, False
    payload = {
        "s_set": {
            "elements": [dict(encode_map(nu, args.approx), level=lv) for nu, lv in res.elements.items()],
            "levels": [{"level": k, "order": g.order, "class": g.cls} for k, g in res.levels],
        },
        "checks": {"critical_value_inclusion": {"checked": len(res.elements), "ok": res.inclusion_ok}},
    }
    return payload, res.inclusion_ok, False


def cmd_axis_group(a: RatFunc, args):
    z0, z1 = _parse_point(args.z0, args.tower_obj), _parse_point(args.z1, args.tower_obj)
    ag = axis_group(a, z0, z1, args.tower_obj)
    k_max = args.kmax if args.kmax is not None else 3
    ok, orders = seq0_check(a, z0, z1, k_max, args.budget)
    certs = []
    if ag.group is not None:
        certs = [_Cert(s, ag.nus[s]) for s in ag.group.elements]
    payload = {
        "axis": [encode_point(z0), encode_point(z1)],
        "axis_text": [str(z0), str(z1)],
        "order": ag.order if not ag.power_family else None,
        "power_family": ag.power_family,
        "residue": ag.residue,
        "group": encode_group(ag.group, certs, args.approx),
        "checks": {"seq0": {"orders": orders, "ok": ok}},
    }
    # an order whose roots of unity are missing from the tower leaves the group unlisted
    complete = ag.power_family or ag.group is not None
    return payload, complete, False


class _Cert:
    def __init__(self, sigma, nu):
        self.sigma, self.nu = sigma, nu


def cmd_shares_iterate(a: RatFunc, args):
    b = parse_expression(args.expr2, args.tower_obj)
    k_max = args.kmax if args.kmax is not None else 4
    k = shares_iterate(a, b, k_max, args.budget)
    return {"second": encode_rf(b), "k_max": k_max, "shared_level": k}, True, False


def cmd_normal_form(a: RatFunc, args):
    q, mu = normal_form(a, args.tower_obj)
    return {"normal_form": {"text": str(q), "coefficients": encode_poly(q)}, "conjugator": encode_map(mu, args.approx)}, True, False


HANDLERS = {
    "analyze": cmd_analyze,
    "iterate-groups": cmd_iterate_groups,
    "sigma-infinity": cmd_limit("sigma"),
    "aut-infinity": cmd_limit("aut"),
    "s-set": cmd_s_set,
    "axis-group": cmd_axis_group,
    "shares-iterate": cmd_shares_iterate,
    "normal-form": cmd_normal_form,
}


def run(argv=None) -> tuple[int, dict]:
    """Execute one command; returns (exit code, report)."""
    start = time.perf_counter()
    report: dict = {"schema": SCHEMA}
    try:
        args = build_parser().parse_args(_protect_negatives(sys.argv[1:] if argv is None else argv))
        report["command"] = args.command
        _validate(args)
        if args.command == "chebyshev":
            t = chebyshev(int(args.expr))
            report["input"] = {"n": int(args.expr)}
            payload, complete, budget_hit = {"polynomial": {"text": str(t), "coefficients": encode_poly(t)}}, True, False
        elif args.command == "verify":
            with open(args.expr) as fh:
                data = json.load(fh)
            res = verify_report(data, args.budget)
            report["input"] = data.get("input")
            payload = {"verification": res}
            complete, budget_hit = res["ok"], False
            if not res["ok"]:
                report.update(payload, status="verification-failed")
                return _finish(EXIT_INPUT, report, start, args)
        else:
            a, tower = parse_with_tower(args.expr, args.tower_obj)
            if a.degree < 1:
                raise InputError("expected a non-constant rational function")
            report["input"] = dict(encode_rf(a), expression=args.expr)
            report["tower"] = _tower_payload(tower)
            if args.command not in ("shares-iterate", "normal-form", "axis-group") and a.degree < 2:
                raise InputError(f"{args.command} needs degree at least two")
            payload, complete, budget_hit = HANDLERS[args.command](a, args)
            report["tower"] = _tower_used(tower, payload)
        report.update(payload)
        if complete:
            code, status = EXIT_OK, "complete"
        elif budget_hit:
            code, status = EXIT_BUDGET, "budget-exhausted"
        else:
            code, status = EXIT_DEGRADED, "degraded"
        report["status"] = status
        return _finish(code, report, start, args)
    except DegreeBudgetExceeded as e:
        report.update(status="budget-exhausted", error={"type": type(e).__name__, "message": str(e)})
        return _finish(EXIT_BUDGET, report, start, None)
    except (InputError, RatsymError, ValueError, OSError, json.JSONDecodeError) as e:
        err = {"type": type(e).__name__, "message": str(e)}
        if getattr(e, "offset", None) is not None:
            err["offset"] = e.offset
        report.update(status="input-error", error=err)
        return _finish(EXIT_INPUT, report, start, None)


def _tower_payload(tower: Tower) -> dict:
    return {"label": tower.label(), "generators": list(tower.generators)}


def _encoded_elements(node):
    """Every exactly encoded tower element inside a payload."""
    if isinstance(node, dict):
        for v in node.values():
            yield from _encoded_elements(v)
    elif isinstance(node, list):
        if node and all(isinstance(t, list) and len(t) == 2 and isinstance(t[0], int) and isinstance(t[1], str) for t in node):
            yield decode_element(node)
        else:
            for v in node:
                yield from _encoded_elements(v)


def _tower_used(tower: Tower, payload: dict) -> dict:
    """The input tower grown by every radical the results needed."""
    try:
        return _tower_payload(tower.extended_by(*_encoded_elements(payload)))
    except DepthCapExceeded:
        return dict(_tower_payload(tower), note="results need more generators than the depth cap")


def _finish(code, report, start, args):
    report["wall_ms"] = round((time.perf_counter() - start) * 1000)
    report["_out"] = getattr(args, "out", None) if args is not None else None
    return code, report


def main(argv=None) -> int:
    code, report = run(argv)
    out = report.pop("_out", None)
    text = json.dumps(report, indent=2, ensure_ascii=False)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if code == EXIT_INPUT:
        print(f"ratsym: {report.get('error', {}).get('message', report.get('status'))}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
