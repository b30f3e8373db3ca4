from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from udfverify import AntisymmetryViolation, JacobiViolation
from udfverify.enveloping import (
    LieAlgebraSpec,
    TensorElement,
    UEAElement,
    bracket,
    builtin_spec,
    coproduct,
    counit,
    embedded_bracket,
    leibniz_shuffle_expand,
    pbw_product,
    pochhammer_rising,
    spec_from_json,
    spec_to_json,
    stirling_first,
    tensor_product,
)

from oracles import exps_to_word, free_product, reduce_words, word_to_exps

AXB = builtin_spec("axb")
E = UEAElement.generator(AXB, 0)
H = UEAElement.generator(AXB, 1)
ONE = UEAElement.one(AXB)


def mono(spec, a, b=None):
    return UEAElement.monomial(spec, a if b is None else (a, b))


def test_antisymmetry_violation():
    with pytest.raises(AntisymmetryViolation):
        LieAlgebraSpec(["a", "b"], [(0, 1, 0, 1), (1, 0, 0, 1)])


def test_jacobi_violation():
    # [a,b]=c, [b,c]=a, [c,a]=c breaks Jacobi
    with pytest.raises(JacobiViolation):
        LieAlgebraSpec(["a", "b", "c"], [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 2, 1)])


def test_builtin_specs_valid():
    assert builtin_spec("abelian:2").is_abelian
    for name in ("axb", "heis-sl:3", "heis-sl:4", "sl:3", "gl:2"):
        assert builtin_spec(name).dim > 0


def test_axb_bracket():
    assert bracket(AXB, AXB.basis(1), AXB.basis(0)) == AXB.basis(0)
    xi = AXB.element((Fraction(1, 2), 3))
    assert bracket(AXB, xi, xi).is_zero()


def test_sl_embedding_bracket():
    spec = builtin_spec("heis-sl:4")
    e12, e24, e14 = (spec.basis(spec.index(x)) for x in ("E12", "E24", "E14"))
    assert bracket(spec, e12, e24) == e14
    assert embedded_bracket(spec, e12, e24) == e14


def test_pbw_relation():
    assert H * E == E * H + E
    assert ONE * H == H
    assert (E * H) * (E * H) == mono(AXB, 2, 2) + mono(AXB, 2, 1)


def test_coproduct_examples():
    one2 = TensorElement.one(AXB)
    assert coproduct(E) == tensor_product(E, ONE) + tensor_product(ONE, E)
    assert coproduct(ONE) == one2
    expect = tensor_product(E * H, ONE) + tensor_product(E, H) + tensor_product(H, E) + tensor_product(ONE, E * H)
    assert coproduct(E * H) == expect


def test_counit_examples():
    assert counit(ONE) == 1
    assert counit(E * E * H) == 0
    assert counit(ONE * 3 + E * H * 2) == 3


def test_stirling_first():
    assert stirling_first(0, 0) == 1
    assert (stirling_first(2, 1), stirling_first(2, 2)) == (1, 1)
    assert [stirling_first(3, j) for j in (1, 2, 3)] == [2, 3, 1]


def test_pochhammer():
    assert pochhammer_rising(H, 0, 0) == ONE
    assert pochhammer_rising(H, 0, 2) == H * H + H
    assert pochhammer_rising(H, 5, 1) == H + 5


def test_pochhammer_matches_stirling():
    for k in range(6):
        p = pochhammer_rising(H, 0, k)
        for j in range(k + 1):
            assert p.coefficient((0, j)) == stirling_first(k, j)


def test_tensor_examples():
    one2 = TensorElement.one(AXB)
    a = tensor_product(E, H)
    assert one2 * a == a
    assert a.delta_id() == tensor_product(E, ONE, H) + tensor_product(ONE, E, H)
    assert tensor_product(E, H) * tensor_product(H, E) == tensor_product(E * H, E * H + E)


def test_shuffle_counts():
    assert leibniz_shuffle_expand([]) == {((), ()): 1}
    assert leibniz_shuffle_expand(["a"]) == {(("a",), ()): 1, ((), ("a",)): 1}
    two = leibniz_shuffle_expand(["a", "b"])
    assert set(two) == {(("a", "b"), ()), (("a",), ("b",)), (("b",), ("a",)), ((), ("a", "b"))}
    for n in range(7):
        assert sum(leibniz_shuffle_expand(list(range(n))).values()) == 2**n


def test_spec_json_round_trip():
    spec = builtin_spec("heis-sl:3")
    back = spec_from_json(spec_to_json(spec))
    assert back.labels == spec.labels and back.table == spec.table


# -- cross-check against a free-algebra rewriting oracle ----------------------

SPECS = [builtin_spec(n) for n in ("axb", "heis-sl:3", "abelian:2")]


@st.composite
def elements(draw, spec, max_terms=3, max_len=3):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        word = tuple(draw(st.lists(st.integers(0, spec.dim - 1), max_size=max_len)))
        terms[word] = terms.get(word, 0) + draw(st.integers(-3, 3))
    return {w: c for w, c in terms.items() if c}


def to_uea(spec, words):
    acc = UEAElement.zero(spec)
    for w, c in words.items():
        acc = acc + UEAElement.word(spec, [spec.basis(i) for i in w]) * c
    return acc


def from_reduced(spec, reduced):
    return UEAElement(spec, {word_to_exps(w, spec.dim): c for w, c in reduced.items()})


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
@given(data=st.data())
def test_product_matches_rewriting_oracle(spec, data):
    a = data.draw(elements(spec))
    b = data.draw(elements(spec))
    expect = from_reduced(spec, reduce_words(free_product(a, b), spec.table))
    assert pbw_product(to_uea(spec, a), to_uea(spec, b)) == expect


def test_word_round_trip():
    assert exps_to_word((2, 0, 1)) == (0, 0, 2)
    assert word_to_exps((0, 0, 2), 3) == (2, 0, 1)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
@given(data=st.data())
def test_associativity(spec, data):
    a, b, c = (to_uea(spec, data.draw(elements(spec, 2, 2))) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
@given(data=st.data())
def test_coproduct_is_multiplicative_and_counital(spec, data):
    a = to_uea(spec, data.draw(elements(spec, 2, 2)))
    b = to_uea(spec, data.draw(elements(spec, 2, 2)))
    assert coproduct(a * b) == coproduct(a) * coproduct(b)
    assert coproduct(a).counit_left() == a
    assert coproduct(a).counit_right() == a
    assert counit(a * b) == counit(a) * counit(b)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
@given(data=st.data())
def test_coassociativity(spec, data):
    a = to_uea(spec, data.draw(elements(spec, 2, 3)))
    d = coproduct(a)
    assert d.delta_id() == d.id_delta()
