import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from reference import TOTALS
from twentyv.errors import InvalidSize, SizeCapExceeded
from twentyv.exact6v import (BigSeries2D, bareiss_det, brute_6v_dwbc, combinatorial_six_v,
                             counts_from_6v, refined_from_6v, series_kernel, z6v_det)


def fraction_det(rows):
    a = [[Fraction(v) for v in r] for r in rows]
    n, det = len(a), Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] / a[k][k]
            for c in range(k, n):
                a[r][c] -= f * a[k][c]
    return det


@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_rational_elimination(rows):
    assert bareiss_det(rows) == fraction_det(rows)


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda ij: ij != (0, 0)),
                       st.integers(-4, 4), max_size=6))
def test_series_reciprocal(terms):
    f = BigSeries2D.from_terms(4, 4, {(0, 0): 1, **terms})
    prod = f * f.reciprocal()
    assert prod.to_list() == BigSeries2D.one(4, 4).to_list()


def test_refined_kernel_reduces_at_tau_one():
    assert series_kernel(4, True, 1).to_list() == series_kernel(4).to_list()


@pytest.mark.parametrize("n", range(1, 5))
def test_determinant_against_square_brute_force(n):
    a, b, c = combinatorial_six_v()
    assert brute_6v_dwbc(n, a, b, c) == pytest.approx(z6v_det(n), rel=1e-12)


def test_square_brute_force_counts_asms():
    assert [brute_6v_dwbc(n, 1, 1, 1) for n in range(1, 6)] == [1, 2, 7, 42, 429]


@pytest.mark.parametrize("m", range(1, 11))
def test_counts_and_refined_totals(m):
    assert counts_from_6v(m) == TOTALS[m - 1]
    assert refined_from_6v(m)(1) == TOTALS[m - 1]
    assert refined_from_6v(m, "DWBC2").refined(m) == refined_from_6v(m).refined(m)[::-1]


def test_errors(monkeypatch):
    with pytest.raises(InvalidSize):
        z6v_det(0)
    with pytest.raises(InvalidSize):
        refined_from_6v(3, "DWBC9")
    monkeypatch.setenv("TWENTYV_CAP_DET", "2")
    with pytest.raises(SizeCapExceeded):
        z6v_det(3)


def test_combinatorial_six_v_weights():
    assert combinatorial_six_v() == (1.0, math.sqrt(2.0), 1.0)
