import math

import numpy as np
import pytest
from hypothesis import given, settings

from strategies import disorder_params
from twentyv import arctic
from twentyv.errors import NotALimitCase, PhaseViolation
from twentyv.weights import WeightParams


@settings(max_examples=8)
@given(disorder_params(margin=0.05))
def test_branches_are_tangent_and_inside(p):
    for which in arctic.BRANCHES:
        b = arctic.branch(p, which, 21)
        assert b.max_tangency_residual() <= arctic.TANGENCY_TOL
        assert not b.domain_violations()


@settings(max_examples=8)
@given(disorder_params(margin=0.05))
def test_exit_intercept_range(p):
    lo, hi = arctic.branch_range(p, "NE")
    for xi in np.linspace(lo, hi, 23)[1:-1]:
        assert 0.0 <= arctic.kappa_of_xi(p, float(xi)) <= 2.0


@settings(max_examples=8)
@given(disorder_params(margin=0.05))
def test_branches_join(p):
    for j in arctic.junctions(p):
        assert j["position_gap"] <= 1e-6 and j["direction_gap"] <= 1e-6


@settings(max_examples=5)
@given(disorder_params(margin=0.05))
def test_saddle_reproduces_slope(p):
    lo, hi = arctic.branch_range(p, "NE")
    xi = 0.5 * (lo + hi)
    st = arctic.saddle_solve(p, xi)
    assert st.s * arctic.slope_A(p, xi) == pytest.approx(1.0, rel=1e-8)


def test_out_of_phase_branch_request():
    with pytest.raises(PhaseViolation):
        arctic.branch(WeightParams(0.3, 0.2, 0.0), "NE")


def test_adaptive_points_bound_chords():
    p = WeightParams.combinatorial()
    pts = arctic.adaptive_points(p, "NE", 2e-2)
    gaps = [math.dist(a, b) for a, b in zip(pts, pts[1:])]
    assert max(gaps) <= 2e-2


def test_conic_fit_tells_ellipse_from_hyperbola():
    t = np.linspace(0, 2 * np.pi, 50)
    coef, dist = arctic.conic_fit(np.c_[1 + 2 * np.cos(t), -1 + np.sin(t)])
    assert dist < 1e-10 and arctic.is_ellipse(coef)
    s = np.linspace(-2, 2, 50)
    coef, dist = arctic.conic_fit(np.c_[np.cosh(s), np.sinh(s)])
    assert dist < 1e-10 and not arctic.is_ellipse(coef)


def test_hausdorff():
    a = [(0.0, 0.0), (1.0, 0.0)]
    assert arctic.hausdorff(a, a) == 0.0
    assert arctic.hausdorff(a, [(0.0, 0.0)]) == 1.0


def test_limit_cases():
    lo = arctic.free_fermion_limits("lambda->-pi/4")
    assert lo.segments[0].start == (0.0, 2.0) and lo.segments[0].end == (-1.0, 1.0)
    hi = arctic.free_fermion_limits("lambda->+pi/4", 50)
    assert hi.arcs[1][0] == pytest.approx((-5 / 3, 2.0))
    with pytest.raises(NotALimitCase):
        arctic.free_fermion_limits("eta->0")
    with pytest.raises(ValueError):
        arctic.mu_limit(0)


@pytest.mark.parametrize("sign", [1, -1])
def test_mu_limit_shape(sign):
    lim = arctic.mu_limit(sign, max_gap=5e-2)
    coef, dist = arctic.conic_fit([q for arc in lim.arcs for q in arc])
    assert arctic.is_ellipse(coef) and dist < 1e-9
    for seg, n in zip(lim.segments, lim.contact_normals):
        d = np.subtract(seg.end, seg.start)
        assert abs(d @ np.asarray(n)) / np.linalg.norm(d) < 1e-6
    # the collapsing branch leaves a corner of the triangle
    corner = lim.segments[0].start
    assert min(math.dist(corner, c) for c in ((0.0, 0.0), (-2.0, 2.0))) < 1e-9


def test_uniform_branch_on_degree_ten_curve():
    ne = arctic.branch(WeightParams.combinatorial(), "NE", 31)
    assert max(arctic.degree10_residual(x, y) for _, x, y, *_ in ne.points) < 1e-6


def test_free_fermion_closes_up():
    p = WeightParams(math.pi / 4, math.pi / 8, 0.0)
    for which, (x, y) in arctic.diagonal_ends(p).items():
        assert abs(x + y) < 1e-9


@settings(max_examples=6)
@given(disorder_params(margin=0.05))
def test_two_envelope_routes_agree(p):
    for which in arctic.BRANCHES:
        lo, hi = arctic.branch_range(p, which)
        for t in (0.3, 0.6):
            xi = lo + t * (hi - lo)
            a = arctic.envelope_point(p, which, xi)
            b = arctic.branch_formula_point(p, which, xi)
            assert math.dist(a, b) < 1e-8
