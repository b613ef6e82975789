"""JSON encoding of groups, certificates and limit results, and re-verification.

Tower elements are encoded exactly as lists of [radicand, "p/q"] pairs
(radicand -1 meaning i); Möbius maps as their four matrix entries.  No
floats appear unless approximations are requested, and those sit under
keys named ``approx``.
"""
from __future__ import annotations

from fractions import Fraction

from .field import TowerElement
from .moebius import FiniteMoebiusGroup, MoebiusMap, post_compose, pre_compose
from .poly import Poly
from .ratfunc import INFINITY, RatFunc, SpherePoint
from .symmetry import GroupReport

SCHEMA = 1


# --- scalars ----------------------------------------------------------------

def encode_element(x: TowerElement) -> list:
    return [[d, str(q)] for d, q in x.items()]


def decode_element(data) -> TowerElement:
    return TowerElement({int(d): Fraction(q) for d, q in data})


def encode_point(p: SpherePoint):
    return "oo" if p.is_infinity else encode_element(p.x)


def decode_point(data) -> SpherePoint:
    return INFINITY if data == "oo" else SpherePoint(decode_element(data))


def encode_poly(p: Poly) -> list:
    return [encode_element(c) for c in p.coeffs]


def decode_poly(data) -> Poly:
    return Poly([decode_element(c) for c in data])


def encode_rf(f: RatFunc) -> dict:
    return {"text": str(f), "num": encode_poly(f.num), "den": encode_poly(f.den)}


def decode_rf(data) -> RatFunc:
    return RatFunc(decode_poly(data["num"]), decode_poly(data["den"]))


def encode_map(m: MoebiusMap, approx: bool = False) -> dict:
    out = {"text": str(m), "matrix": [encode_element(x) for x in m.matrix]}
    if approx:
        out["approx"] = [str(complex(x.approx())) for x in m.matrix]
    return out


def decode_map(data) -> MoebiusMap:
    return MoebiusMap(*[decode_element(x) for x in data["matrix"]])


# --- groups -----------------------------------------------------------------

def encode_group(g: FiniteMoebiusGroup | None, certs=(), approx: bool = False) -> dict | None:
    if g is None:
        return None
    return {
        "order": g.order,
        "class": g.cls,
        "elements": [encode_map(s, approx) for s in g.elements],
        "certificates": [encode_certificate(c) for c in certs],
    }


def encode_certificate(c) -> dict:
    out = {"sigma": encode_map(c.sigma), "nu": encode_map(c.nu)}
    level = getattr(c, "level", None)
    if level is not None:
        out["level"] = level
    return out


def group_payloads(report: GroupReport, approx: bool = False) -> dict:
    """{"G", "Sigma", "Aut", "Ghat"} with certificates attached to their members."""
    if report.g is None:
        fam = {"order": None, "class": "infinite", "family": report.family, "elements": [], "certificates": []}
        by_sigma = {c.sigma: c for c in report.certificates}
        out = {"G": fam, "Ghat": dict(fam)}
        for key, grp in (("Sigma", report.sigma_group), ("Aut", report.aut)):
            certs = [by_sigma[s] for s in grp.elements if s in by_sigma] if grp is not None else []
            out[key] = encode_group(grp, certs, approx)
        return out
    by_sigma = {c.sigma: c for c in report.certificates}
    ghat_certs = []
    seen = set()
    for c in report.certificates:
        if c.nu not in seen:
            seen.add(c.nu)
            ghat_certs.append(c)
    return {
        "G": encode_group(report.g, report.certificates, approx),
        "Sigma": encode_group(report.sigma_group, [by_sigma[s] for s in report.sigma_group.elements], approx),
        "Aut": encode_group(report.aut, [by_sigma[s] for s in report.aut.elements], approx),
        "Ghat": encode_group(report.ghat, ghat_certs, approx),
    }


def encode_limit(res, approx: bool = False) -> dict:
    out = {
        "kind": res.kind,
        "status": res.status,
        "stabilized_at": res.stabilized_at,
        "k_max": res.k_max,
        "complete": res.complete,
        "reason": res.reason,
        "bound": res.bound,
        "group": encode_group(res.group, res.certificates, approx),
        "trace": [{"level": k, "order": g.order, "class": g.cls} for k, g in res.trace],
    }
    return out


# --- verification -------------------------------------------------------------

def _check_certificate(a: RatFunc, cert: dict, iterates) -> bool:
    sigma, nu = decode_map(cert["sigma"]), decode_map(cert["nu"])
    f = iterates[cert.get("level", 1)]
    return pre_compose(f, sigma) == post_compose(nu, f)


def verify_report(data: dict, budget: int | None = None) -> dict:
    """Re-check every certificate stored in a report; returns counts and failures."""
    from .dynamics import Iterates

    a = decode_rf(data["input"])
    its = Iterates(a, budget)
    checked, failed = 0, []

    def walk(node, path):
        nonlocal checked
        if isinstance(node, dict):
            if "certificates" in node:
                for i, c in enumerate(node["certificates"]):
                    checked += 1
                    if not _check_certificate(a, c, its):
                        failed.append(f"{path}/certificates/{i}")
            for key, val in node.items():
                if key != "certificates":
                    walk(val, f"{path}/{key}")
        elif isinstance(node, list):
            for i, val in enumerate(node):
                walk(val, f"{path}/{i}")

    walk({k: v for k, v in data.items() if k != "input"}, "")
    return {"checked": checked, "failed": failed, "ok": not failed}


__all__ = [
    "encode_element", "decode_element", "encode_point", "decode_point", "encode_poly", "decode_poly",
    "encode_rf", "decode_rf", "encode_map", "decode_map", "encode_group", "group_payloads",
    "encode_limit", "verify_report", "SCHEMA",
]
