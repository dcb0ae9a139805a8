import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from youngconv.exponents import (
    Exponent,
    ExponentError,
    YoungExponents,
    holder_conjugate,
    young_p,
)


def test_parsing_forms():
    assert Exponent(2).value == Fraction(2)
    assert Exponent("4/3").inv == Fraction(3, 4)
    assert Exponent("inf").is_inf
    assert Exponent(math.inf).is_inf
    assert Exponent(Fraction(5, 4)).inv == Fraction(4, 5)
    assert float(Exponent("inf")) == math.inf
    assert Exponent(1.5).inv == Fraction(2, 3)


@pytest.mark.parametrize("bad", [0.5, 0, -2, "junk", float("nan"), "1/0"])
def test_parsing_rejects(bad):
    with pytest.raises(ExponentError):
        Exponent(bad)


def test_conjugate_endpoints_exact():
    assert holder_conjugate(1).is_inf
    assert holder_conjugate("inf").is_one
    assert holder_conjugate(2) == Exponent(2)
    assert holder_conjugate("4/3") == Exponent(4)


@given(
    st.fractions(
        min_value=Fraction(1), max_value=Fraction(100), max_denominator=1000
    )
)
def test_conjugate_involution(q):
    e = Exponent(q)
    assert e.conjugate().conjugate() == e  # exact, rational arithmetic


def test_young_p_examples():
    assert young_p("4/3", "4/3").p == Exponent(2)
    for q in ("1", "3/2", "7/2", "inf"):
        assert young_p(1, q).p == Exponent(q)
    assert young_p(2, 2).p.is_inf


def test_young_p_rejects_inadmissible():
    with pytest.raises(ExponentError):
        young_p(3, 3)
    with pytest.raises(ExponentError):
        young_p("inf", 2)


def test_triple_validation():
    YoungExponents("4/3", "4/3", 2)
    with pytest.raises(ExponentError):
        YoungExponents("4/3", "4/3", "5/2")


def test_boundary_flags():
    assert young_p(1, "3/2").boundary
    assert young_p("3/2", 1).boundary
    assert young_p(2, 2).boundary
    assert not young_p("4/3", "4/3").boundary
    assert young_p("4/3", "4/3").interior


def test_swapped():
    ex = young_p("4/3", "3/2")
    sw = ex.swapped()
    assert sw.p1 == ex.p2 and sw.p2 == ex.p1 and sw.p == ex.p
