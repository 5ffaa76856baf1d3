import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from strategies import disorder_params, positive_fracs
from twentyv.errors import PhaseViolation
from twentyv.weights import (PI, PI_BAR, TwentyVWeights, WeightParams, bar_params, compose,
                             gamma_xi, hat_params, path_alphas, sigma_xi, six_vertex_weights,
                             star_params, tau_xi, twenty_v_weights)


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol * max(1.0, abs(y)) for x, y in zip(a, b))


def test_combinatorial_point_has_unit_weights():
    w = twenty_v_weights(WeightParams.combinatorial())
    assert close(w.omega, (1.0,) * 7)


def test_permutations_are_the_stated_cycles():
    assert PI == (1, 0, 4, 3, 2, 5, 6)
    assert PI_BAR == (0, 6, 5, 3, 4, 2, 1)
    for perm in (PI, PI_BAR):
        assert compose(perm, perm) == tuple(range(7))


@given(disorder_params())
def test_weights_positive_in_disorder_phase(p):
    assert p.in_disorder_phase
    assert all(w > 0 for w in twenty_v_weights(p).omega)
    for sub in (1, 2, 3):
        assert all(x > 0 for x in six_vertex_weights(p, sub))


@given(disorder_params())
def test_hat_bar_star_permute_weights(p):
    w = twenty_v_weights(p)
    assert close(twenty_v_weights(hat_params(p)).omega, w.permuted(PI).omega)
    assert close(twenty_v_weights(bar_params(p)).omega, w.permuted(compose(PI_BAR, PI)).omega)
    # mu -> -mu is an exact relabelling
    assert twenty_v_weights(star_params(p)).omega == w.permuted(PI_BAR).omega


@given(disorder_params())
def test_refined_ratios_are_one_at_zero_shift(p):
    assert tau_xi(p, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert sigma_xi(p, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert gamma_xi(p, 0.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("xi", [-0.6, -0.2, 0.1, 0.5, 0.7])
def test_combinatorial_tau_closed_form(xi):
    p = WeightParams.combinatorial()
    tau = tau_xi(p, xi)
    assert tau == pytest.approx(math.tan(xi + math.pi / 4), rel=1e-12)
    assert sigma_xi(p, xi) == pytest.approx((tau + 1) / 2, rel=1e-12)


@given(st.lists(positive_fracs, min_size=7, max_size=7), positive_fracs)
def test_path_alphas_scale_free(omega, c):
    w = TwentyVWeights(tuple(omega))
    assert path_alphas(w).alpha == path_alphas(w.scaled(c)).alpha


def test_phase_violation_names_the_inequality():
    with pytest.raises(PhaseViolation) as err:
        WeightParams(math.pi / 6, math.pi / 8, 0.0).require_curve_regime()
    assert "eta < lambda" in err.value.violated


def test_free_fermion_line_is_accepted_outside_disorder():
    p = WeightParams(math.pi / 4, math.pi / 8, 0.0)
    assert not p.in_disorder_phase
    p.require_curve_regime()


def test_exact_weights_stay_exact():
    w = TwentyVWeights((Fraction(1, 2),) * 7)
    assert w.scaled(2).omega == (1,) * 7
