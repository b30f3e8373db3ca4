import math
from fractions import Fraction

import pytest

from udfverify import UnsupportedFamilyOrder
from udfverify.enveloping import builtin_spec
from udfverify.estimates import (
    FAIL,
    PASS,
    axb_inclusion_checks,
    cauchy_check,
    entire_order0_bound_check,
    entire_order0_constant,
    equicontinuity_check,
    equicontinuity_constants,
    malleable_continuity_check,
)
from udfverify.repspaces import Poly, parse_poly, representation_for
from udfverify.twists import AbelianConfig, abelian_twist, build_twist

AXB = builtin_spec("axb")
RHO = representation_for(AXB)
z = Poly.var(0, 1)


def sound_rows(report):
    for row in report.rows:
        if row["verdict"] == PASS:
            assert row["lhs_lower"] <= row["rhs_scaled_upper"]


def test_cauchy_empty_word_is_monotonicity():
    rep = cauchy_check(RHO, z**2, 1.0, 0.125, [])
    assert rep.verdict == PASS


def test_cauchy_axb_single_letter():
    E = AXB.basis(AXB.index("E"))
    rep = cauchy_check(RHO, z**2, 1.0, 0.125, [E])
    assert rep.verdict == PASS and rep.unknown_count == 0
    sound_rows(rep)


def test_cauchy_rejects_letters_outside_ball():
    with pytest.raises(ValueError):
        cauchy_check(RHO, z, 1.0, 0.1, [AXB.basis(0) * 2])


def test_malleable_examples():
    assert malleable_continuity_check(RHO, z, Poly.constant(1, 1), 1.0, 1 / 16).verdict == PASS
    assert malleable_continuity_check(RHO, z, z, 1.0, 1 / 16).verdict == PASS
    ab1 = representation_for(builtin_spec("abelian:1"))
    assert malleable_continuity_check(ab1, z, z, 0.5, 0.5).verdict == PASS


def test_equicontinuity_constants():
    c = equicontinuity_constants(build_twist("axb", 1), (0.125, 0.125), 1.0)
    assert c.r0 == 0.125 / 4
    assert c.N == 128 and c.C == 2.0**127 and c.T == 4 / c.r0
    cfg = AbelianConfig.from_triples(2, [(1, 0, 1)])
    ca = equicontinuity_constants(abelian_twist(cfg, 1), (1.0, 1.0), 1.0)
    assert ca.R == 0.5 and ca.C == 1.0 and ca.T == cfg.c**2


def test_equicontinuity_abelian_example():
    cfg = AbelianConfig.from_triples(2, [(1, 0, 1)])
    F = abelian_twist(cfg, 8)
    rho = representation_for(cfg.spec)
    v = parse_poly("z1*z2", 2)
    rep = equicontinuity_check(F, rho, v, v, 0.5, radii=(1.0, 1.0))
    assert rep.verdict == PASS
    assert all(row["margin"] >= 1 for row in rep.rows)


def test_equicontinuity_axb_example():
    F = build_twist("axb", 8)
    rep = equicontinuity_check(F, RHO, z**2, z**2, 1.0, radii=(0.125, 0.125))
    assert rep.verdict == PASS
    sound_rows(rep)


def test_equicontinuity_fault_injection_fails_early():
    cfg = AbelianConfig.from_triples(2, [(1, 0, 1), (2, 1, 0)])
    F = abelian_twist(cfg, 4)
    rho = representation_for(cfg.spec)
    v = parse_poly("z1*z2", 2)
    rep = equicontinuity_check(F, rho, v, v, 0.5, radii=(1.0, 1.0), n_max=4, lhs_fault=True)
    failed = sorted({row["n"] for row in rep.rows if row["verdict"] == FAIL})
    assert failed and failed[0] <= 3


def test_equicontinuity_wrong_order():
    F = build_twist("axb", 2)
    with pytest.raises(UnsupportedFamilyOrder):
        equicontinuity_check(F, RHO, z, z, 0.5, radii=(0.125, 0.125), n_max=2)


def test_equicontinuity_radius_window():
    F = build_twist("axb", 2)
    with pytest.raises(ValueError):
        equicontinuity_check(F, RHO, z, z, 1.0, radii=(0.125, 0.125), n_max=2, r_values=[1.0])


def test_entire_constant():
    lo, up = entire_order0_constant()
    partial = 1 + sum(Fraction(k**k, math.factorial(k) * 3**k) for k in range(1, 400))
    last = Fraction(399**399, math.factorial(399) * 3**399)
    assert lo <= partial
    # the term ratios increase towards e/3, so e/3 bounds the geometric tail
    assert float(partial + last * 3 / (3 - Fraction(2718282, 1000000))) <= up
    assert up - lo < 1e-10


def test_entire_examples():
    assert entire_order0_bound_check(1, Poly.constant(1, 5), 0.5, 0.5).verdict == PASS
    assert entire_order0_bound_check(1, z**3, 0.5, 0.5).verdict == PASS
    assert entire_order0_bound_check(3, parse_poly("z1*z2*z3", 3), 1.0, 0.25).verdict == PASS


def test_axb_inclusions_examples():
    rep = axb_inclusion_checks(Poly.constant(1, 1), 1.0, 0.25)
    assert rep.verdict == PASS
    rep = axb_inclusion_checks(z**4, 0.5, 0.25)
    assert rep.verdict == PASS
    rep = axb_inclusion_checks(z, 1.0, 0.25)
    last = [r for r in rep.rows if r["check"] == "ii"][-1]
    assert last["rhs_scaled_upper"] == pytest.approx(math.exp(-1) * 1.25)
    assert rep.verdict == PASS


def test_axb_inclusion_i_fails_at_high_degree():
    # S_k(z^m) is at least m!/(m-k)! times a weight ratio; for m = 11 > 4e the claimed bound breaks
    rep = axb_inclusion_checks(z**11, 1.0, 0.25)
    fails = [r for r in rep.rows if r["check"] == "i" and r["verdict"] == FAIL]
    assert fails


def test_report_exports():
    E = AXB.basis(0)
    rep = cauchy_check(RHO, z**2, 1.0, 0.125, [E])
    text = rep.to_csv()
    assert text.splitlines()[0] == "n,lhs_lower,rhs_scaled_upper,margin,verdict"
    assert rep.to_json()["verdict"] == PASS
