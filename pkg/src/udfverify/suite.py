"""Deterministic acceptance battery.

Each criterion is a function ``(seed) -> dict`` with keys ``id``, ``name``,
``passed`` and ``details``. Random inputs come from a counter-based Philox
stream keyed by ``(seed, criterion id)``, so results do not depend on which
thread runs which criterion. Timings are deliberately absent from the output.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from udfverify.enveloping import LieElement, builtin_spec
from udfverify.estimates import (
    axb_inclusion_checks,
    cauchy_check,
    entire_order0_bound_check,
    equicontinuity_check,
)
from udfverify.repspaces import Poly, monomials_up_to, representation_for
from udfverify.scalars import GaussQ
from udfverify.seminorms import PolydiskSup, divergence_witness
from udfverify.starprod import assoc_residual, poisson_bracket, poisson_formula_sl, star_eval
from udfverify.twists import AbelianConfig, build_twist, verify_axioms

HBAR = GaussQ(Fraction(3, 7), Fraction(1, 5))
FAMILIES = ("abelian", "axb", "heis-sl:3", "heis-sl:4")


def rng_for(seed: int, battery: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, battery])))


def acceptance_abelian() -> AbelianConfig:
    """``r = e1 ⊗ e2 + 2 e2 ⊗ e1`` on two generators."""
    return AbelianConfig.from_triples(2, [(1, 0, 1), (2, 1, 0)])


def family_twist(name: str, N: int):
    if name == "abelian":
        return build_twist("abelian", N, abelian=acceptance_abelian())
    if name == "axb":
        return build_twist("axb", N)
    d = int(name.split(":")[1])
    return build_twist("heis-sl", N, d=d)


def family_rep(F):
    return representation_for(F.spec)


def random_poly(rng: np.random.Generator, nvars: int, degree: int, n_terms: int = 3) -> Poly:
    exps = monomials_up_to(nvars, degree)
    picks = rng.choice(len(exps), size=min(n_terms, len(exps)), replace=False)
    terms = {}
    for i in sorted(int(p) for p in picks):
        num = int(rng.integers(-3, 4)) or 1
        den = int(rng.integers(1, 4))
        terms[exps[i]] = Fraction(num, den)
    return Poly(nvars, terms)


def _result(cid: int, name: str, passed: bool, status: str | None = None, **details) -> dict:
    """``status`` is "pass", "fail" or "unknown" (only uncertified rows, no failures)."""
    if status is None:
        status = "pass" if passed else "fail"
    return {"id": cid, "name": name, "passed": bool(passed), "status": status, "details": details}


def _status(counts: dict) -> str:
    if counts["Fail"]:
        return "fail"
    return "unknown" if counts["Unknown"] else "pass"


# ---------------------------------------------------------------------------


def c1_axioms(seed: int) -> dict:
    out = {}
    for name in FAMILIES:
        rep = verify_axioms(family_twist(name, 4), 4)
        out[name] = rep.passed
    return _result(1, "twist axioms n<=4", all(out.values()), families=out)


def c2_associativity(seed: int) -> dict:
    rng = rng_for(seed, 2)
    out = {}
    for name in FAMILIES:
        F = family_twist(name, 4)
        rep = family_rep(F)
        bad = 0
        for _ in range(25):
            a, b, c = (random_poly(rng, rep.nvars, 3) for _ in range(3))
            if not assoc_residual(F, rep, a, b, c, HBAR).is_zero():
                bad += 1
        out[name] = bad
    return _result(2, "associativity at hbar=3/7+i/5", not any(out.values()), failures=out)


def c3_unit_limit(seed: int) -> dict:
    rng = rng_for(seed, 3)
    out = {}
    for name in FAMILIES:
        F = family_twist(name, 4)
        rep = family_rep(F)
        one = Poly.constant(rep.nvars, 1)
        bad = 0
        for _ in range(8):
            f = random_poly(rng, rep.nvars, 5, 4)
            g = random_poly(rng, rep.nvars, 5, 4)
            if star_eval(F, rep, one, f, HBAR) != f or star_eval(F, rep, f, one, HBAR) != f:
                bad += 1
            if star_eval(F, rep, f, g, 0) != f * g:
                bad += 1
        out[name] = bad
    return _result(3, "unit and classical limit", not any(out.values()), failures=out)


def c4_poisson(seed: int) -> dict:
    out = {}
    for d in (3, 4):
        F = build_twist("heis-sl", 1, d=d)
        rep = family_rep(F)
        monos = [Poly.monomial(e) for e in monomials_up_to(d, 3)]
        bad = checked = 0
        for f in monos:
            for g in monos:
                if f.degree() + g.degree() > 3:
                    continue
                checked += 1
                if poisson_bracket(F, rep, f, g) != poisson_formula_sl(f, g, d):
                    bad += 1
        out[str(d)] = {"pairs": checked, "failures": bad}
    return _result(4, "Poisson bracket formula", all(v["failures"] == 0 for v in out.values()), dims=out)


def c5_worked_values(seed: int) -> dict:
    F = family_twist("axb", 2)
    rep = family_rep(F)
    z = Poly.var(0, 1)
    h = HBAR
    ok_axb = star_eval(F, rep, z, z, h) == z * z - Poly.constant(1, h * h)
    Fa = build_twist("abelian", 2)
    repa = family_rep(Fa)
    x, y = Poly.var(0, 2), Poly.var(1, 2)
    ok_ab = star_eval(Fa, repa, x, y, h) - star_eval(Fa, repa, y, x, h) == Poly.constant(2, h)
    return _result(5, "worked values", ok_axb and ok_ab, axb_z_star_z=ok_axb, abelian_commutator=ok_ab)


def _scaled_basis(spec, k: int) -> LieElement:
    xi = spec.basis(k)
    nrm = spec.norm_of(xi)
    return xi if nrm <= 1 else xi * Fraction(1, math.ceil(nrm))


def cauchy_battery(seed: int):
    """Probe list: (family, R, monomial, word indices)."""
    rng = rng_for(seed, 6)
    probes = []
    for name in FAMILIES:
        spec = family_twist(name, 0).spec
        nvars = family_rep(family_twist(name, 0)).nvars
        for R in (0.5, 1.0):
            for e in monomials_up_to(nvars, 4):
                probes.append((name, R, e, ()))
                for length in (1, 2, 3):
                    word = tuple(int(i) for i in rng.integers(0, spec.dim, size=length))
                    probes.append((name, R, e, word))
    return probes


def run_cauchy_probe(probe, K: int = 16):
    name, R, e, word = probe
    F = family_twist(name, 0)
    rep = family_rep(F)
    v = Poly.monomial(e)
    r = 1 / (4 * (sum(e) + 1))
    letters = [_scaled_basis(rep.spec, k) for k in word]
    return cauchy_check(rep, v, R, r, letters, K)


def c6_cauchy(seed: int) -> dict:
    probes = cauchy_battery(seed)
    counts = {"Pass": 0, "Fail": 0, "Unknown": 0}
    for p in probes:
        rep = run_cauchy_probe(p)
        counts[rep.verdict] += 1
    return _result(6, "Cauchy estimates", _status(counts) == "pass", _status(counts), rows=counts)


EQUI_RADII = {"abelian": (1.0, 1.0), "axb": (0.125, 0.125), "heis-sl:3": (0.125, 0.125), "heis-sl:4": (0.125, 0.125)}


def equicontinuity_battery(seed: int):
    rng = rng_for(seed, 7)
    probes = []
    for name in FAMILIES:
        nvars = family_rep(family_twist(name, 0)).nvars
        monos = monomials_up_to(nvars, 3)
        for e in monos:
            other = monos[int(rng.integers(0, len(monos)))]
            probes.append((name, e, other))
    return probes


def run_equicontinuity_probe(probe, n_max: int = 8, lhs_fault: bool = False):
    name, e1, e2 = probe
    F = family_twist(name, n_max)
    rep = family_rep(F)
    R = 0.5 if name == "abelian" else 1.0
    return equicontinuity_check(F, rep, Poly.monomial(e1), Poly.monomial(e2), R, radii=EQUI_RADII[name],
                                m=1.0, n_max=n_max, lhs_fault=lhs_fault)


def c7_equicontinuity(seed: int) -> dict:
    counts = {"Pass": 0, "Fail": 0, "Unknown": 0}
    min_margin = math.inf
    for p in equicontinuity_battery(seed):
        rep = run_equicontinuity_probe(p)
        for row in rep.rows:
            counts[row["verdict"]] += 1
            min_margin = min(min_margin, row["margin"])
    status = _status(counts)
    if status == "pass" and min_margin < 1:
        status = "fail"
    return _result(7, "equicontinuity with family constants", status == "pass", status, rows=counts,
                   min_margin=_num(min_margin))


def c8_divergence(seed: int) -> dict:
    spec = builtin_spec("axb")
    rep = representation_for(spec)
    H = spec.basis(spec.index("H"))
    out = {}
    for k in range(1, 5):
        f = Poly.monomial((k,))
        wit = divergence_witness(rep, f, H, -k, 2 / k, PolydiskSup(1.0), target=1e6)
        out[str(k)] = {"ratio": wit.ratio, "terms": wit.terms_needed}
    ok = all(v["terms"] is not None and v["terms"] <= 21 for v in out.values())
    return _result(8, "divergence witness", ok, witnesses=out)


def entire0_battery(seed: int):
    rng = rng_for(seed, 9)
    probes = []
    for d, deg in ((1, 5), (3, 3)):
        for i in range(10):
            f = random_poly(rng, d, deg, 3)
            r0 = (0.5, 1.0)[i % 2]
            r1 = (0.25, 0.5)[(i // 2) % 2]
            probes.append((d, f, r0, r1))
    return probes


def c9_entire0(seed: int) -> dict:
    counts = {"Pass": 0, "Fail": 0, "Unknown": 0}
    for d, f, r0, r1 in entire0_battery(seed):
        counts[entire_order0_bound_check(d, f, r0, r1).verdict] += 1
    return _result(9, "entire order-0 bound", _status(counts) == "pass", _status(counts), rows=counts)


def axb_battery(seed: int):
    rng = rng_for(seed, 10)
    polys = [Poly.monomial((k,)) for k in range(6)] + [random_poly(rng, 1, 5, 3) for _ in range(4)]
    return [(f, r0) for f in polys for r0 in (0.5, 1.0)]


def c10_axb_inclusions(seed: int) -> dict:
    counts = {"i": {"Pass": 0, "Fail": 0, "Unknown": 0}, "ii": {"Pass": 0, "Fail": 0, "Unknown": 0}}
    for f, r0 in axb_battery(seed):
        for row in axb_inclusion_checks(f, r0, 0.25).rows:
            counts[row["check"]][row["verdict"]] += 1
    merged = {k: counts["i"][k] + counts["ii"][k] for k in counts["i"]}
    return _result(10, "ax+b inclusion inequalities", _status(merged) == "pass", _status(merged), rows=counts)


CRITERIA = (c1_axioms, c2_associativity, c3_unit_limit, c4_poisson, c5_worked_values, c6_cauchy,
            c7_equicontinuity, c8_divergence, c9_entire0, c10_axb_inclusions)


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf"
    return x


def run_suite(seed: int = 7, jobs: int = 1, only=None) -> dict:
    chosen = [c for c in CRITERIA if only is None or int(c.__name__[1:].split("_")[0]) in only]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda c: c(seed), chosen))
    else:
        results = [c(seed) for c in chosen]
    return {"seed": seed, "passed": all(r["passed"] for r in results), "criteria": results}


def suite_exit_code(report: dict, strict: bool) -> int:
    """0 when every criterion passes; uncertified-only criteria fail only under ``strict``."""
    statuses = [r["status"] for r in report["criteria"]]
    if "fail" in statuses or (strict and "unknown" in statuses):
        return 1
    return 0


def suite_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


