from fractions import Fraction

from hypothesis import given, strategies as st

from twentyv.polys import RefinedPoly

coeffs = st.lists(st.integers(-50, 50), min_size=1, max_size=8)


@given(coeffs, coeffs, st.fractions(-3, 3, max_denominator=5))
def test_product_evaluates_pointwise(a, b, t):
    pa, pb = RefinedPoly.from_coeffs(a), RefinedPoly.from_coeffs(b)
    assert (pa * pb)(t) == pa(t) * pb(t)
    assert (pa + pb)(t) == pa(t) + pb(t)


@given(coeffs)
def test_reversal_is_an_involution(c):
    p = RefinedPoly.from_coeffs(c)
    m = len(c) + 1
    assert p.reversed(m).reversed(m).refined(m) == p.refined(m)


def test_reversal_matches_definition():
    p = RefinedPoly.from_coeffs([2, 3, 1])
    t = Fraction(3, 7)
    assert p.reversed(3)(t) == t ** 2 * p(1 / t)


def test_printing_and_json():
    p = RefinedPoly.from_coeffs([1, 0, Fraction(3, 1)]).exact()
    assert str(p) == "1 + 3*tau^2"
    assert p.to_json() == ["1", "0", "3"]
