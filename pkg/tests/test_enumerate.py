import random

import pytest
from hypothesis import given, settings, strategies as st

from reference import REFINED_DWBC3, TOTALS
from twentyv import _kernels
from twentyv.enumerate import (ExactSampler, count_brute, count_transfer, first_column_marginal,
                               one_point, partition_function, refined_poly, sample_exact,
                               sample_k_histogram)
from twentyv.errors import IndexOutOfRange, SizeCapExceeded
from twentyv.lattice import BC_NAMES, build_domain
from twentyv.weights import TwentyVWeights


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("bc", BC_NAMES)
def test_brute_equals_transfer(m, bc):
    dom = build_domain(m, bc)
    assert count_brute(dom) == count_transfer(dom)


@pytest.mark.parametrize("m", range(1, 6))
def test_interpreted_kernel_agrees(m):
    dom = build_domain(m)
    assert count_brute(dom, _kernels.python_dfs()) == count_brute(dom)


def test_backend_reported():
    assert _kernels.backend() in ("numba", "python")


@settings(max_examples=25)
@given(st.integers(1, 4), st.lists(st.integers(1, 5), min_size=7, max_size=7))
def test_weighted_transfer_matches_brute(m, omega):
    dom = build_domain(m)
    w = TwentyVWeights(tuple(omega))
    assert partition_function(dom, w) == partition_function(dom, w, method="brute")


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_per_vertex_weights(seed):
    rng = random.Random(seed)
    dom = build_domain(3)
    table = {v: tuple(rng.randint(1, 4) for _ in range(7)) for v in dom.vertices}
    assert partition_function(dom, table) == partition_function(dom, table, method="brute")
    assert first_column_marginal(dom, table) == first_column_marginal(dom, table, "enumerate")


@pytest.mark.parametrize("m", range(1, 9))
def test_refined_poly_unit_weights(m):
    assert refined_poly(build_domain(m)).refined(m) == REFINED_DWBC3[m]
    assert count_transfer(build_domain(m)).total == TOTALS[m - 1]


def test_one_point_bounds():
    dom = build_domain(3)
    with pytest.raises(IndexOutOfRange):
        one_point(dom, TwentyVWeights.uniform(), 4)
    vals = [one_point(dom, TwentyVWeights.uniform(), k) for k in (1, 2, 3)]
    assert sum(vals) == 1


def test_sampler_is_deterministic_and_valid():
    dom = build_domain(6)
    a, b = sample_exact(dom, seed=11), sample_exact(dom, seed=11)
    assert a.occupied == b.occupied
    assert a.is_valid()


def test_sampler_covers_all_configurations():
    dom = build_domain(3)
    sampler = ExactSampler(dom)
    rng = random.Random(0)
    seen = {tuple(sampler.draw_codes(rng)) for _ in range(400)}
    assert len(seen) == 6


def test_histogram_has_one_bin_per_k():
    h = sample_k_histogram(build_domain(4), 500, seed=2)
    assert len(h) == 4 and sum(h) == 500


def test_caps_follow_environment(monkeypatch):
    monkeypatch.setenv("TWENTYV_CAP_BRUTE", "3")
    with pytest.raises(SizeCapExceeded):
        count_brute(build_domain(4))
    monkeypatch.setenv("TWENTYV_CAP_TRANSFER", "2")
    with pytest.raises(SizeCapExceeded):
        ExactSampler(build_domain(3))


def test_disable_flag_selects_python_path():
    import os
    import subprocess
    import sys

    code = ("from twentyv import _kernels; from twentyv.enumerate import count_brute; "
            "from twentyv.lattice import build_domain; "
            "print(_kernels.backend(), count_brute(build_domain(5)).total)")
    env = {**os.environ, "TWENTYV_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "184"]
