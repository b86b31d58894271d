import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_means import bounds
from bergman_means.bounds import (
    BoundReport,
    C2Params,
    c1_constant,
    c1_integral,
    c2_constant,
    c2_special,
    c3_closing_chain,
    c3_constant,
    check_bpn_bound,
    check_c1_bound,
    check_c2_lemma,
    check_lemma1_identity,
    check_lemma1_sharpness,
    check_prn_bound,
    check_sobolev_corollary,
    check_weighted_norm,
    extremal_density,
    fit_growth_exponent,
    gamma_ratio,
    lemma1_closed_form,
    lemma1_sharp_constant,
    lipschitz_growth_probe,
    power_model,
)
from bergman_means.disc_fn import (
    AnalyticFunction,
    CircleFunction,
    PiecewiseConstantProfile,
    PolynomialProfile,
    RadialFourierFunction,
    SampledProfile,
    monomial,
)
from bergman_means.errors import ConstraintError, FitError

RADII = [0.1 + 0.05 * i for i in range(18)]


# ---------------------------------------------------------------- reports


def test_report_relations():
    assert BoundReport("t", {}, 1.0, 1.0).passed
    assert BoundReport("t", {}, 1.0 + 5e-8, 1.0).passed
    assert not BoundReport("t", {}, 1.0 + 2e-7, 1.0).passed
    assert BoundReport("t", {}, 1.0, 1.0 + 1e-9, relation="eq", eps=1e-8).passed
    assert not BoundReport("t", {}, 0.0, 1.0, side_conditions={"x": False}).passed
    rec = BoundReport("t", {"p": math.inf}, 0.0, math.inf).to_record()
    assert rec["rhs"] == "inf" and rec["params"]["p"] == "inf"
    json.dumps(rec, allow_nan=False)


# ---------------------------------------------------------------- Lemma 1


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0, 6.0])
@pytest.mark.parametrize("r", RADII)
def test_lemma1_identity(p, r):
    assert check_lemma1_identity(p, r).passed


@pytest.mark.parametrize("r", RADII)
def test_lemma1_p2(r):
    assert lemma1_closed_form(2.0, r) == pytest.approx(1 / (1 - r * r), rel=1e-12)


@pytest.mark.parametrize("p,const", [(4.0, 2.0), (3.0, 4 / math.pi), (2.0, 1.0)])
def test_lemma1_constant(p, const):
    assert lemma1_sharp_constant(p) == pytest.approx(const, rel=1e-14)
    rep = check_lemma1_sharpness(p, RADII)
    assert rep.passed and all(rep.side_conditions.values())


# ---------------------------------------------------------------- C1


def test_c1_pi():
    assert abs(c1_constant(0.5, 1.0, 1.0) - math.pi) <= 1e-12


@pytest.mark.parametrize("smk", [(0.5, 1.0, 1.0), (-0.5, 2.0, 0.3), (0.5, 3.0, 0.0), (0.2, 1.5, 2.5)])
def test_c1_grid_agrees_with_closed_form(smk):
    assert c1_constant(*smk, method="grid") == pytest.approx(c1_constant(*smk), rel=1e-9)


def test_c1_flat_branch_value():
    # 2 + k - s - m <= 0: the maximum is the value at x = 0, Gamma(1)Gamma(1/2)/Gamma(3/2) = 2
    assert bounds.c1_branch(0.5, 3.0, 0.0) == "closed-form-x0"
    assert c1_constant(0.5, 3.0, 0.0) == pytest.approx(2.0, rel=1e-14)
    assert c1_integral(0.5, 3.0, 0.0, 0.0)[0] == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("smk,name", [((1.0, 1.0, 1.0), "s < 1"), ((0.5, 0.4, 1.0), "m + s > 1"),
                                      ((0.5, 1.0, -1.0), "k > -1")])
def test_c1_constraints(smk, name):
    with pytest.raises(ConstraintError) as exc:
        c1_constant(*smk)
    assert exc.value.constraint == name


@settings(max_examples=8)
@given(st.floats(-1.5, 0.95), st.floats(0.05, 2.5), st.floats(-0.9, 3.0))
def test_c1_bound_property(s, gap, k):
    xs = 1.0 - np.geomspace(1.0, 1e-5, 20)
    assert check_c1_bound(s, 1.0 - s + gap, k, xs).passed


def test_c1_sharp_near_one():
    rep = check_c1_bound(0.5, 1.0, 1.0, 1.0 - np.geomspace(1.0, 1e-8, 30))
    assert rep.notes["sharpness_ratio"] > 0.999


# ---------------------------------------------------------------- C2 and C3


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_c2_special(p):
    rep = bounds.check_c2_special(p)
    assert rep.passed
    assert rep.notes["grid_over_special"] <= 1.0 + 1e-6


def test_c2_infeasible_fixed_point():
    P = C2Params(2.0, 1.0, 1.0, 1.0, 0.0)
    with pytest.raises(ConstraintError):
        c2_constant(P, "fixed", a=0.9, b=0.5)
    with pytest.raises(ConstraintError):
        C2Params(2.0, 1.0, 1.0, 1.0, -2.0)


@settings(max_examples=10)
@given(st.floats(1.2, 4.0), st.floats(0.3, 2.5), st.floats(-0.5, 2.0), st.floats(-0.5, 2.0),
       st.floats(0.05, 0.95), st.lists(st.floats(-2, 2), min_size=3, max_size=6))
def test_c2_lemma_property(p, m, k, j, t, values):
    lo = max(1.0 - m * p, -3.0)
    u = lo + (0.95 - lo) * t
    P = C2Params(p, m, k, j, u)
    end = 0.9 if P.w >= 1 else 1.0
    prof = SampledProfile(np.linspace(0.0, end, len(values)), values)
    assert check_c2_lemma(P, prof).passed


def test_c2_grid_never_above_recipe():
    P = C2Params(2.5, 1.7, 0.4, 1.2, 0.1)
    assert c2_constant(P).value <= c2_constant(P, "recipe").value * (1 + 1e-12)


def test_c3_values():
    assert gamma_ratio(0) == 1.0
    assert c3_constant(2.0, 0, 1.0, 0.0) == pytest.approx(2 * math.pi, rel=1e-9)
    assert c3_constant(2.0, 0, 1.0, 0.0) <= 2 * c2_special(2.0) * (1 + 1e-9)


@pytest.mark.parametrize("p,n", [(1.5, 1), (2.0, 1), (3.0, 2), (4.0, 0)])
def test_closing_chain_is_recipe_value(p, n):
    P = C2Params(p, n + 1.0, n + 1.0, 1.0, 0.0)
    recipe = 2 * gamma_ratio(n) * c2_constant(P, "recipe").value
    assert c3_closing_chain(p, n) == pytest.approx(recipe, rel=1e-12)
    assert c3_constant(p, n, 1.0, 0.0) <= c3_closing_chain(p, n) * (1 + 1e-12)


# ---------------------------------------------------------------- theorem checks, k = 0


def test_zero_function_passes_everywhere():
    zero = RadialFourierFunction({})
    assert check_prn_bound(CircleFunction.from_modes({0: 0.0}), 2.0, 1, 0, 0.5).passed
    assert check_bpn_bound(zero, 2.0, 1, 0, 0.5).passed
    assert check_weighted_norm(zero, 2.0, 2.0, 1, 0, 1.0, 0.0).passed


@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
@pytest.mark.parametrize("n", [0, 1, 3])
def test_prn_single_mode_k0(p, n):
    assert check_prn_bound(CircleFunction.from_modes({n: 1.0}), p, n, 0, 0.8).passed


@pytest.mark.parametrize("m", [1, 2, 5])
def test_bpn_monomial(m):
    rep = check_bpn_bound(monomial(m), 2.0, 1, 0, 0.7)
    assert rep.lhs == pytest.approx(m * 0.7 ** (m - 1), rel=1e-12)
    assert rep.passed


coeffs = st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                  min_size=1, max_size=17).filter(lambda c: len(c) % 2 == 1)


@given(coeffs, st.sampled_from([1.0, 1.5, 2.0, 4.0, math.inf]), st.integers(0, 3),
       st.sampled_from([0.3, 0.7, 0.95]))
def test_prn_k0_property(c, p, n, r):
    assert check_prn_bound(CircleFunction(coeffs=np.array(c)), p, n, 0, r).passed


radial = st.dictionaries(
    st.integers(-3, 6),
    st.one_of(st.lists(st.floats(-2, 2), min_size=1, max_size=4).map(PolynomialProfile),
              st.tuples(st.floats(0.05, 0.5), st.floats(0.55, 0.95), st.floats(-2, 2)).map(
                  lambda t: PiecewiseConstantProfile([t[0], t[1]], [t[2]]))),
    min_size=1, max_size=4).map(RadialFourierFunction)


@settings(max_examples=25)
@given(radial, st.sampled_from([1.0, 2.0, 3.0, math.inf]), st.integers(0, 3), st.floats(0.1, 0.95))
def test_bpn_k0_property(f, p, n, r):
    assert check_bpn_bound(f, p, n, 0, r).passed


@settings(max_examples=15)
@given(radial, st.sampled_from([1.5, 2.0, 3.0]), st.integers(0, 2), st.floats(1.2, 4.0), st.floats(0.05, 0.9),
       st.floats(-0.5, 2.0))
def test_weighted_k0_property(f, p, n, s, t, j):
    lo = max(1.0 - (n + 1) * s, -2.0)
    u = lo + (1.0 - lo) * t
    assert check_weighted_norm(f, p, s, n, 0, j, u).passed


def test_weighted_constraints():
    f = monomial(1)
    with pytest.raises(ConstraintError):
        check_weighted_norm(f, 2.0, 2.0, 1, 0, -1.5, 0.0)
    with pytest.raises(ConstraintError):
        check_weighted_norm(f, 2.0, 2.0, 1, 0, 1.0, 1.2)
    with pytest.raises(ConstraintError):
        check_prn_bound(CircleFunction.from_modes({1: 1.0}), 2.0, 1, 2, 0.5)


def test_sobolev_n0():
    f = RadialFourierFunction({0: PiecewiseConstantProfile([0.5, 1.0], [1.0]), 3: PolynomialProfile([0, 1])})
    for p in (1.5, 2.0, 3.0):
        assert check_sobolev_corollary(f, p, 0).passed


# ---------------------------------------------------------------- derivative orders k >= 1


def test_prn_fails_for_single_mode_k2():
    """e^{5 i theta}, n = k = 2, r = 0.7: LHS = (6!/3!) r^5, RHS = 9 / (1 - r^2)."""
    rep = check_prn_bound(CircleFunction.from_modes({5: 1.0}), 2.0, 2, 2, 0.7)
    assert rep.lhs == pytest.approx(720 / 6 * 0.7**5, rel=1e-12)
    assert rep.rhs == pytest.approx(9 / 0.51, rel=1e-12)
    assert not rep.passed
    # the same input with k = 0 is fine
    assert check_prn_bound(CircleFunction.from_modes({5: 1.0}), 2.0, 2, 0, 0.7).passed


def test_mode_n_is_invisible_to_the_right_side():
    """A pure mode n twists to mode 0, whose theta-derivative vanishes."""
    g = RadialFourierFunction({2: PiecewiseConstantProfile([0.3, 0.8], [1.0])})
    assert check_bpn_bound(g, 2.0, 2, 0, 0.6).passed
    for k in (1, 2):
        rep = check_bpn_bound(g, 2.0, 2, k, 0.6)
        assert rep.rhs == 0.0 and rep.lhs > 1.0
    rep = check_sobolev_corollary(g, 2.0, 2)
    assert rep.rhs == 0.0 and rep.lhs > 0.5


# ---------------------------------------------------------------- growth probe


@pytest.mark.parametrize("p,alpha,beta", [(math.inf, 0.25, 0.75), (2.0, 0.1, 0.4), (4.0, 0.25, 0.5)])
def test_growth_probe_recovers_model_exponent(p, alpha, beta):
    rep = lipschitz_growth_probe(power_model(alpha), p, 1, alpha)
    assert abs(rep.beta - beta) <= 0.1
    assert rep.predicted_ceiling == pytest.approx(1 - alpha)


def test_growth_probe_constant():
    assert abs(lipschitz_growth_probe(monomial(0), 2.0, 0, 0.5).beta) < 1e-6


def test_fit_error():
    with pytest.raises(FitError):
        fit_growth_exponent([0.9, 0.99], [1.0, 0.0])


def test_extremal_density_exact():
    F = np.array([1.0, 0.5 - 0.2j, 0.3j])
    g = extremal_density(F, 4)
    z = np.array([0.3 + 0.1j, -0.5j, 0.7])
    Fz = AnalyticFunction(F).evaluate(z)
    np.testing.assert_allclose(g.evaluate(z), np.abs(Fz) ** 2 * Fz, rtol=1e-12)
