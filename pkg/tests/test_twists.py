from fractions import Fraction

import pytest

from udfverify import DegreeCapExceeded
from udfverify.enveloping import LieAlgebraSpec, TensorElement, UEAElement, builtin_spec, pochhammer_rising, tensor_product
from udfverify.twists import (
    PRINTED_ORDER,
    AbelianConfig,
    SlHeisConfig,
    abelian_twist,
    axb_twist,
    build_twist,
    cocycle_residual,
    counit_residual,
    parse_r,
    sl_twist,
    twist_from_json,
    twist_to_json,
    verify_axioms,
)


def gen(spec, label):
    return UEAElement.generator(spec, spec.index(label))


def test_abelian_components():
    cfg = AbelianConfig.from_triples(2, [(1, 0, 1)])
    spec = cfg.spec
    e1, e2 = gen(spec, "e1"), gen(spec, "e2")
    F = abelian_twist(cfg, 3)
    assert F[0] == TensorElement.one(spec)
    assert F[1] == tensor_product(e1, e2)
    assert F[2] == tensor_product(e1 * e1, e2 * e2)


def test_zero_r_gives_trivial_twist():
    F = abelian_twist(AbelianConfig.from_triples(2, []), 3)
    assert all(F[n].is_zero() for n in (1, 2, 3))


def test_parse_r():
    cfg = parse_r("1:1:2, 2:2:1", 2)
    assert cfg.n_terms == 2
    assert cfg.pairs[1][0].coords == (0, 2)
    with pytest.raises(ValueError):
        parse_r("1:1:3", 2)


def test_axb_components():
    spec = builtin_spec("axb")
    E, H = gen(spec, "E"), gen(spec, "H")
    F = axb_twist(2)
    assert F[1] == tensor_product(E, H) - tensor_product(H, E)
    h2 = H * H + H
    assert F[2] == tensor_product(E * E, h2) - tensor_product(E * H, E * H) * 2 + tensor_product(h2, E * E)
    assert counit_residual(F, 1, "left").is_zero()
    assert counit_residual(F, 2, "left").is_zero()


def test_sl_first_order_component():
    cfg = SlHeisConfig(3)
    spec = cfg.spec
    H = UEAElement.from_lie(spec, cfg.h_element())
    X = tensor_product(gen(spec, "E12"), gen(spec, "E23"))
    F = sl_twist(cfg, 1)
    assert F[1] == tensor_product(H, gen(spec, "E13")) + X


def test_sl_d2_closed_form():
    cfg = SlHeisConfig(2)
    spec = cfg.spec
    H = UEAElement.from_lie(spec, cfg.h_element())
    E12 = gen(spec, "E12")
    F = sl_twist(cfg, 4)
    for n in range(5):
        assert F[n] == tensor_product(pochhammer_rising(H, 0, n), E12**n)


def test_default_h_is_half_diagonal():
    cfg = SlHeisConfig(3)
    m = cfg.spec.matrix_of(cfg.h_element())
    assert [m[k][k] for k in range(3)] == [Fraction(1, 2), 0, Fraction(-1, 2)]


@pytest.mark.parametrize("family,d", [("abelian", 2), ("axb", 2), ("heis-sl", 2), ("heis-sl", 3), ("heis-sl", 4)])
def test_axioms_hold(family, d):
    F = build_twist(family, 4, d=d)
    assert cocycle_residual(F, 0).is_zero()
    report = verify_axioms(F)
    assert report.passed, report.to_json()


def test_nonsymmetric_abelian_twist():
    cfg = AbelianConfig.from_triples(2, [(1, 0, 1), (2, 1, 0)])
    assert verify_axioms(abelian_twist(cfg, 4)).passed


def test_sl_coefficients_are_constrained():
    # the cocycle pins down H only partly: (2, 0) is another valid choice, (1, 2) is not
    assert verify_axioms(build_twist("heis-sl", 3, d=3, c=(2, 0))).passed
    bad = verify_axioms(build_twist("heis-sl", 3, d=3, c=(1, 2)))
    assert bad.cocycle_zero[:2] == [True, True] and not bad.passed


def test_counit_residuals():
    F = build_twist("abelian", 3)
    assert counit_residual(F, 0, "left") == UEAElement.one(F.spec)
    for n in (1, 2, 3):
        assert counit_residual(F, n, "left").is_zero()
        assert counit_residual(F, n, "right").is_zero()


def test_corrupted_series_detected_at_order_two():
    F = axb_twist(3)
    spec = F.spec
    E, H = gen(spec, "E"), gen(spec, "H")
    bad = F.replace(1, tensor_product(E, H) + tensor_product(H, E))
    assert cocycle_residual(bad, 1).is_zero()  # order one only sees primitive parts
    assert not cocycle_residual(bad, 2).is_zero()
    assert not verify_axioms(bad).passed


def test_printed_order_fails_for_noncommutative_twist():
    # the twist satisfies the cocycle in the order that makes the star product associative
    F = axb_twist(3)
    assert all(cocycle_residual(F, n).is_zero() for n in range(4))
    assert not all(cocycle_residual(F, n, PRINTED_ORDER).is_zero() for n in range(4))


def test_json_round_trip():
    F = build_twist("heis-sl", 2, d=3)
    G = twist_from_json(twist_to_json(F), F.spec)
    assert all(F[n] == G[n] for n in range(3))


def test_degree_cap():
    spec = LieAlgebraSpec(["E", "H"], [(1, 0, 0, 1)], name="axb", degree_cap=3)
    with pytest.raises(DegreeCapExceeded):
        axb_twist(4, spec)


def test_extended_reuses_config():
    F = build_twist("heis-sl", 1, d=3)
    G = F.extended(3)
    assert G.order == 3 and G.config == F.config
    assert G[1] == F[1]
