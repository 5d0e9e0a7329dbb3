from fractions import Fraction
from typing import Sequence

import pytest
from hypothesis import given, settings, strategies as st

from confalg.errors import PolyParseError, VariableError
from confalg.exactpoly import (
    D1,
    D2,
    D3,
    LAMBDA,
    MU,
    PARTIAL,
    Poly,
    Var,
    determinant,
    divisible_by_slot_sum,
    parse_poly,
    poly_equal,
    serialize,
    slot_sum,
)

PARAM = Var.param("a")

def polys(variables: Sequence[Var]) -> st.SearchStrategy[Poly]:
    """
    Small random polynomials in the given variables with rational coefficients
    """
    term = st.tuples(
        st.integers(-6, 6),
        st.integers(1, 4),
        st.lists(st.sampled_from(list(variables)), max_size=3),
    )

    def build(terms: Sequence[tuple]) -> Poly:
        p = Poly.constant(0)
        for num, den, vs in terms:
            t = Poly.constant(Fraction(num, den))
            for v in vs:
                t = t * Poly.var(v)
            p = p + t
        return p

    return st.lists(term, max_size=4).map(build)

mixed = polys([PARTIAL, LAMBDA, MU, D1, PARAM])
slots = polys([D1, D2, D3, PARAM])

@given(mixed, mixed, mixed)
def test_ring_axioms(p: Poly, q: Poly, r: Poly):
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == 0
    assert (p + 0) == p and p * 1 == p

@given(mixed, mixed, mixed)
def test_substitution_is_a_homomorphism(p: Poly, q: Poly, r: Poly):
    sub = lambda x: x.substitute(LAMBDA, r)
    assert sub(p * q) == sub(p) * sub(q)
    assert sub(p + q) == sub(p) + sub(q)

@given(mixed)
def test_serialize_reads_back(p: Poly):
    text = serialize(p)
    assert parse_poly(text, ["a"]) == p
    assert serialize(parse_poly(text, ["a"])) == text

@settings(max_examples=50)
@given(slots)
def test_multiples_of_slot_sum_are_divisible(p: Poly):
    assert divisible_by_slot_sum(p * slot_sum(3))

def test_slot_sum_divisibility_examples():
    d1, d2, d3 = (Poly.var(v) for v in (D1, D2, D3))
    assert divisible_by_slot_sum(d1 ** 2 - (d2 + d3) ** 2)
    assert not divisible_by_slot_sum(d1 + d2)
    assert divisible_by_slot_sum(Poly.constant(0))

def test_slot_sum_divisibility_rejects_lambda():
    with pytest.raises(VariableError):
        divisible_by_slot_sum(Poly.var(LAMBDA) + Poly.var(D1))

@pytest.mark.parametrize("text,expected", [
    ("l + d", "d + l"),
    ("2*d*l + l^2 - 3/2", "2*d*l + l^2 - 3/2"),
    ("(d + l)*(d - l)", "d^2 - l^2"),
    ("-(1/2)*a + 0*d", "-1/2*a"),
    ("0", "0"),
])
def test_canonical_form(text: str, expected: str):
    assert serialize(parse_poly(text, ["a"])) == expected

@pytest.mark.parametrize("text,position", [
    ("1/0", 2),
    ("2*x", 2),
    ("d + ", 4),
    ("d $ l", 2),
    ("l^m", 2),
])
def test_parse_errors_carry_position(text: str, position: int):
    with pytest.raises(PolyParseError) as info:
        parse_poly(text)
    assert info.value.position == position
    assert info.value.text == text

@pytest.mark.parametrize("name", ["d", "l", "m", "n", "d1", "d2", "d3", "2x", ""])
def test_reserved_and_malformed_parameter_names(name: str):
    with pytest.raises(VariableError):
        Var.param(name)

def test_parameters_only_when_declared():
    with pytest.raises(PolyParseError):
        parse_poly("alpha*d")
    p = parse_poly("alpha*d", ["alpha"])
    assert p.params == ("alpha",)
    assert Var("alpha") in p.variables()

def test_parameters_leave_the_ring_when_they_cancel():
    alpha = Poly.var(Var.param("alpha"))
    p = alpha * Poly.var(LAMBDA) - alpha * Poly.var(LAMBDA) + 1
    assert p.params == ()
    assert p == 1

def test_degree_and_constants():
    p = parse_poly("3*d^2*l + l - 5")
    assert p.degree(PARTIAL) == 2
    assert p.degree(LAMBDA) == 1
    assert p.degree(MU) == 0
    assert Poly.constant(0).degree(LAMBDA) == -1
    assert parse_poly("7/3").constant_value() == Fraction(7, 3)
    with pytest.raises(VariableError):
        p.constant_value()

def test_compose_is_simultaneous():
    p = parse_poly("d1 - 2*d2")
    swapped = p.compose({D1: Poly.var(D2), D2: Poly.var(D1)})
    assert swapped == parse_poly("d2 - 2*d1")

def test_determinant():
    l = Poly.var(LAMBDA)
    assert determinant([[l, 1], [1, l]]) == l ** 2 - 1
    assert determinant([]) == 1
    alpha = Poly.var(Var.param("alpha"))
    assert determinant([[alpha, 0, 0], [5, 2, 0], [1, l, 3]]) == 6 * alpha
    with pytest.raises(ValueError):
        determinant([[1, 2]])

def test_poly_equal():
    l, d = Poly.var(LAMBDA), Poly.var(PARTIAL)
    assert poly_equal((l + d) ** 2, l ** 2 + 2 * l * d + d ** 2)
    assert poly_equal(Fraction(1, 2) * (2 * l), l)
    assert not poly_equal(l, d)
    assert poly_equal(0, l - l)
