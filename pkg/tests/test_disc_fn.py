import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.special import beta

from bergman_means.disc_fn import (
    AnalyticFunction,
    BumpProfile,
    CircleFunction,
    PiecewiseConstantProfile,
    PolynomialProfile,
    RadialFourierFunction,
    SampledProfile,
    WeightedRadialMeasure,
    circle_means,
    coefficients_to_samples,
    fourier_coefficients,
    integral_mean,
    monomial,
    radial_integrate,
    sup_modulus,
    theta_derivative,
    twist,
    twisted_derivative_coeffs,
)
from bergman_means.errors import AliasingError, DomainError
from bergman_means.quadrature import gauss_legendre_interval

floats = st.floats(-3, 3)


def coeff_vectors(max_band=6):
    return st.integers(0, max_band).flatmap(
        lambda N: st.tuples(arrays(float, 2 * N + 1, elements=floats), arrays(float, 2 * N + 1, elements=floats))
    ).map(lambda t: t[0] + 1j * t[1])


@given(coeff_vectors())
def test_fft_round_trip(c):
    N = (c.size - 1) // 2
    f = CircleFunction(samples=coefficients_to_samples(c, 64))
    back = fourier_coefficients(f, N)
    np.testing.assert_allclose(back.coeffs, c, atol=1e-12)


@given(coeff_vectors())
def test_parseval(c):
    f = CircleFunction(coeffs=c)
    assert integral_mean(f, 2.0) == pytest.approx(np.sqrt(np.sum(np.abs(c) ** 2)), rel=1e-12, abs=1e-12)


@given(coeff_vectors(), st.sampled_from([1.0, 1.5, 3.0]))
def test_means_ordered_in_p(c, p):
    f = CircleFunction(coeffs=c)
    assert integral_mean(f, p) <= integral_mean(f, 2 * p) * (1 + 1e-12) + 1e-14
    assert integral_mean(f, 2 * p) <= sup_modulus(c)[0] * (1 + 1e-12) + 1e-14


def test_sup_modulus_off_grid():
    # peak of |1 + e^{i(theta - t0)}| sits between grid points
    t0 = 0.0123
    c = np.array([0, 1, np.exp(-1j * t0)])
    assert sup_modulus(c, M=16)[0] == pytest.approx(2.0, rel=1e-12)
    assert circle_means(c, np.inf, M=16)[0] == pytest.approx(2.0, rel=1e-12)


def test_aliasing():
    f = CircleFunction(samples=np.ones(8))
    with pytest.raises(AliasingError):
        fourier_coefficients(f, 4)
    with pytest.raises(AliasingError):
        coefficients_to_samples(np.ones(9), 8)


def test_derivatives_and_twist():
    f = CircleFunction.from_modes({2: 1.0, -1: 2.0})
    d = theta_derivative(f, 2)
    assert d.coeff(2) == pytest.approx(-4.0)
    assert d.coeff(-1) == pytest.approx(-2.0)
    t = twist(f, 2)
    assert t.coeff(0) == 1.0 and t.coeff(-3) == 2.0
    row = twisted_derivative_coeffs(f.coeffs, 2, 1)
    N = (row.size - 1) // 2
    assert row[N] == 0  # the twisted mode n lands on 0 and is killed by d/dtheta
    assert row[N - 3] == pytest.approx(1j * -3 * 2.0)


PROFILES = [
    PolynomialProfile([1.0, -2.0, 0.5j]),
    PiecewiseConstantProfile([0.1, 0.4, 0.9], [1.0, -2.0]),
    PiecewiseConstantProfile([0.5, 0.75], [3.0], complements=[0.5, 0.25]),
    BumpProfile(0.2, 0.8, 0.7, 2.0),
    SampledProfile([0.0, 0.3, 0.6], [1.0, 0.0, 2.0]),
]


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: type(p).__name__)
@pytest.mark.parametrize("k", [0.0, 1.0, 3.5])
def test_profile_moments(prof, k):
    edges = [0.0, *prof.breakpoints, 1.0]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        r, w = gauss_legendre_interval(200, lo, hi)
        total += np.sum(w * prof(r) * r**k)
    assert prof.moment(k) == pytest.approx(total, rel=1e-10, abs=1e-13)


def test_profile_validation():
    with pytest.raises(DomainError):
        PiecewiseConstantProfile([0.5, 0.2], [1.0])
    with pytest.raises(DomainError):
        BumpProfile(0.5, 0.4)
    with pytest.raises(DomainError):
        SampledProfile([0.0], [1.0])


def test_radial_fourier_evaluate():
    f = RadialFourierFunction({1: PolynomialProfile([0.0, 1.0])}) + monomial(2, 3.0)
    z = 0.3 + 0.4j
    assert f.evaluate(z) == pytest.approx(z + 3 * z**2)
    assert f.band == 2
    assert f.circle(0.5).coeff(1) == pytest.approx(0.5)


@given(st.lists(st.complex_numbers(max_magnitude=3), min_size=1, max_size=8), st.sampled_from([1.0, 2.0, 4.0]))
def test_means_nondecreasing_in_r(coeffs, p):
    F = AnalyticFunction(coeffs)
    radii = np.linspace(0.05, 0.99, 25)
    m = F.integral_means(radii, p)
    assert np.all(np.diff(m) >= -1e-12 * (1 + m[1:]))


def test_analytic_derivative_and_m2():
    F = AnalyticFunction([1, 2, 3])
    np.testing.assert_allclose(F.derivative().coeffs, [2, 6])
    assert F.derivative(5).coeffs.tolist() == [0]
    assert F.m2(0.5)[()] == pytest.approx(np.sqrt(1 + 4 * 0.25 + 9 * 0.0625))


@pytest.mark.parametrize("j,u", [(0.0, 0.0), (1.5, 0.5), (-0.5, -2.0), (2.0, 0.9)])
def test_weighted_measure_beta(j, u):
    m = WeightedRadialMeasure(j, u, (0.3, 0.6))
    assert radial_integrate(lambda r: np.ones_like(r), m) == pytest.approx(beta(j + 1, 1 - u), rel=1e-11)


def test_weighted_measure_domain():
    with pytest.raises(DomainError):
        WeightedRadialMeasure(0.0, 1.0)
    # fine once the support stops short of 1
    m = WeightedRadialMeasure(0.0, 1.5, (), 0.5)
    exact = 2 * (2**0.5 - 1)  # int_0^{1/2} (1-r)^{-3/2} dr
    assert radial_integrate(lambda r: np.ones_like(r), m) == pytest.approx(exact, rel=1e-12)
