import pytest
from hypothesis import given
from hypothesis import strategies as st

from udfverify import MalleabilityViolation
from udfverify.enveloping import TensorElement, UEAElement, builtin_spec, pochhammer_rising
from udfverify.repspaces import (
    OpTerm,
    Poly,
    Representation,
    act_generator,
    act_lie,
    act_uea,
    act_word,
    act_tensor,
    check_homomorphism,
    check_malleability,
    eigenvalue,
    monomials_up_to,
    mu_pointwise,
    parse_poly,
    representation_for,
    shuffle_rhs,
)
from udfverify.twists import axb_twist, build_twist

from oracles import pderiv, pmul

AXB = builtin_spec("axb")
RHO = representation_for(AXB)
z = Poly.var(0, 1)


def test_axb_generators():
    assert act_generator(RHO, AXB.index("H"), z**3) == z**3 * -3
    assert act_generator(RHO, AXB.index("E"), z**3) == z**2 * 3


def test_sl3_matrix_action():
    spec = builtin_spec("heis-sl:3")
    rho = representation_for(spec)
    z1, z3 = Poly.var(0, 3), Poly.var(2, 3)
    assert act_generator(rho, spec.index("E13"), z3) == z1
    assert act_generator(rho, spec.index("E13"), z1).is_zero()


def test_uea_action_composes_left_to_right():
    E, H = UEAElement.generator(AXB, 0), UEAElement.generator(AXB, 1)
    assert act_uea(RHO, E * H, z**3) == z**2 * -9
    assert act_uea(RHO, UEAElement.one(AXB), z**3) == z**3
    assert act_uea(RHO, pochhammer_rising(H, 0, 2), z).is_zero()


def test_act_tensor_examples():
    f = parse_poly("z^2 + 1")
    assert act_tensor(RHO, TensorElement.one(AXB), f, z) == [(f, z, 1)]
    got = sorted((str(a), str(b), c) for a, b, c in act_tensor(RHO, axb_twist(1)[1], z, z))
    assert got == sorted([("1", "-z", 1), ("-z", "1", -1)])
    F = build_twist("abelian", 1)
    rho = representation_for(F.spec)
    x, y = Poly.var(0, 2), Poly.var(1, 2)
    assert act_tensor(rho, F[1], x, y) == [(Poly.constant(2, 1), Poly.constant(2, 1), 1)]


def test_mu_pointwise():
    z1, z2 = Poly.var(0, 2), Poly.var(1, 2)
    assert mu_pointwise(z, Poly.constant(1, 1)) == z
    assert mu_pointwise(z, z) == z**2
    assert mu_pointwise(z1 + z2, z1 - z2) == z1**2 - z2**2


def test_eigenvalues():
    H = AXB.basis(AXB.index("H"))
    assert eigenvalue(RHO, H, z**4) == -4
    assert eigenvalue(RHO, H, z + z**2) is None


@pytest.mark.parametrize("name", ["axb", "abelian:3", "heis-sl:3", "heis-sl:4", "sl:3", "gl:2"])
def test_homomorphism_and_malleability(name):
    rho = representation_for(builtin_spec(name))
    assert check_homomorphism(rho, 3)
    report = check_malleability(rho, probe_degree=2, n_max=3, samples=3)
    assert report.leibniz_checks > 0 and report.shuffle_checks > 0


def test_multiplication_operator_is_not_malleable():
    spec = builtin_spec("abelian:1")
    rho = Representation(spec, 1, [[OpTerm(1, (1,), None)]])
    with pytest.raises(MalleabilityViolation):
        check_malleability(rho)


def test_degree_mismatch_rejected():
    with pytest.raises(ValueError):
        act_generator(RHO, 0, Poly.var(0, 2))


def test_abelian_action_matches_plain_derivatives():
    spec = builtin_spec("abelian:2")
    rho = representation_for(spec)
    f = parse_poly("x^3*y - 2*x*y^2 + 5", 2)
    got = act_word(rho, [spec.basis(0), spec.basis(1), spec.basis(1)], f)
    expect = pderiv(pderiv(pderiv(dict(f.terms), 1), 1), 0)
    assert got.terms == expect


polys2 = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-4, 4).filter(bool), max_size=4
)
words = st.lists(st.integers(0, 6), max_size=3)


@given(polys2, polys2, words)
def test_leibniz_subset_sum(fd, gd, word):
    # heis-sl:3 lives on three variables; pad the third exponent with zero
    spec = builtin_spec("heis-sl:3")
    rho = representation_for(spec)
    f = Poly(3, {e + (0,): c for e, c in fd.items()})
    g = Poly(3, {(0,) + e: c for e, c in gd.items()})
    xs = [spec.basis(i % spec.dim) for i in word]
    lhs = act_word(rho, xs, f * g)
    assert lhs == shuffle_rhs(rho, xs, f, g)
    assert (f * g).terms == pmul(dict(f.terms), dict(g.terms))


@given(st.lists(st.integers(0, 1), max_size=4), st.integers(0, 6))
def test_word_action_equals_uea_action(word, m):
    f = z**m
    xs = [AXB.basis(i) for i in word]
    assert act_word(RHO, xs, f) == act_uea(RHO, UEAElement.word(AXB, xs), f)


def test_monomials_up_to_counts():
    assert len(monomials_up_to(3, 3)) == 20
    assert len(monomials_up_to(1, 5)) == 6


def test_act_lie_linear():
    xi = AXB.element((2, -1))
    f = parse_poly("z^3 - z")
    assert act_lie(RHO, xi, f) == act_generator(RHO, 0, f) * 2 - act_generator(RHO, 1, f)
