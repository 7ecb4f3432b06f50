import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whlab import (GridError, KernelSamples, Lebesgue, Lorentzian, NonFiniteResultError,
                   Power, SingularKernelError, SpectralMeasure, Table, Window,
                   eta_profile, fit_exponential_polynomial, kernel_profile,
                   lag1_identity_residual, ode_residual, rb_pipeline, regularized_kernel,
                   sigma_tail_norm, synthesize_kernel, weight_measure)
from whlab.measure import SumDensity

ATOM0 = SpectralMeasure(atoms=((0.0, 2 * np.pi),))
LEB = SpectralMeasure(Lebesgue())


def power_kernel(a, x):
    """(1/2pi) int_0^inf e^{-i x lam} (2pi/Gamma(a)) lam^(a-1) dlam = (i x)^-a, x > 0."""
    return np.exp(-0.5j * np.pi * a) * np.abs(x) ** -a


def samples(x, values):
    x = np.asarray(x, float)
    return KernelSamples(x, np.asarray(values, complex), np.full(x.shape, "converged", dtype=object))


# -- synthesize_kernel --------------------------------------------------------

def test_atom_kernel_is_exact():
    x = np.array([-3.0, 0.0, 0.5, 7.0])
    np.testing.assert_allclose(synthesize_kernel(ATOM0, x), 1.0, atol=1e-15)
    m = SpectralMeasure(atoms=((1.5, 3.0),))
    np.testing.assert_allclose(synthesize_kernel(m, x), 3 * np.exp(-1.5j * x) / (2 * np.pi), atol=1e-15)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 4.0])
def test_power_kernel_matches_gamma_integral(a, x):
    val, info = synthesize_kernel(SpectralMeasure(Power(a)), x, full_output=True)
    assert abs(val - power_kernel(a, x)) < 1e-6
    assert info["status"] == "converged"


def test_power_half_frozen_values():
    assert abs(synthesize_kernel(SpectralMeasure(Power(0.5)), 1.0) - np.sqrt(2) / 2 * (1 - 1j)) < 1e-6
    assert abs(synthesize_kernel(SpectralMeasure(Power(0.5)), 4.0) - 0.35355339 * (1 - 1j)) < 1e-6


def test_growing_density_diverges_at_zero():
    val, info = synthesize_kernel(LEB, np.array([0.0, 1.0]), full_output=True)
    assert np.isnan(val[0]) and info["status"][0] == "divergent"
    assert abs(val[1]) < 1e-6  # Lebesgue kernel is delta, zero away from 0


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 5.0, -2.0])
def test_lorentzian_kernel(x):
    m = SpectralMeasure(Lorentzian(3.0, 2.0))
    ref = 0.5 * 3.0 * 2.0 * np.exp(-2.0 * abs(x))
    assert abs(synthesize_kernel(m, x) - ref) < 1e-9


@pytest.mark.parametrize("x", [0.2, 1.0, 6.0, -3.0])
def test_table_kernel_against_weighted_quad(x):
    lam = np.array([-2.0, 0.0, 1.0, 3.0])
    phi = np.array([0.0, 2.0, 1.0, 0.0])
    m = SpectralMeasure(Table(lam, phi))
    f = lambda l: float(np.interp(float(l), lam, phi))
    ref = complex(mpmath.quad(lambda l: f(l) * mpmath.exp(-1j * x * l), list(lam))) / (2 * np.pi)
    assert abs(synthesize_kernel(m, x) - ref) < 1e-9


@settings(max_examples=15, deadline=None)
@given(st.floats(0.1, 8.0))
def test_hermitian_symmetry(x):
    m = SpectralMeasure(SumDensity([Power(0.5), Window(1.0, -1.0, 2.0)]), ((0.7, 1.0),))
    v = synthesize_kernel(m, np.array([x, -x]))
    assert abs(v[1] - np.conj(v[0])) < 1e-6


@settings(max_examples=10, deadline=None)
@given(st.floats(0.2, 6.0))
def test_linearity(x):
    m1 = SpectralMeasure(Power(0.5))
    m2 = SpectralMeasure(Lorentzian(2.0, 0.5), ((1.0, 1.0),))
    both = m1 + m2
    assert abs(synthesize_kernel(both, x) - synthesize_kernel(m1, x) - synthesize_kernel(m2, x)) < 1e-6


# -- regularized_kernel -----------------------------------------------------------

def test_regularized_lebesgue():
    v = regularized_kernel(LEB, 1, np.array([1.0, 3.0, -3.0]))
    assert abs(v[0] - np.exp(-1) / 2) < 1e-5
    assert abs(v[1] - np.exp(-3) / 2) < 1e-5
    assert abs(v[1] - v[2]) < 1e-12


def test_regularized_atom():
    np.testing.assert_allclose(regularized_kernel(ATOM0, 1, np.array([-2.0, 0.0, 4.0])), 1.0, atol=1e-15)


def test_regularized_refuses_small_q():
    with pytest.raises(NonFiniteResultError):
        regularized_kernel(LEB, 0, 1.0)


def test_regularized_decays_without_atoms():
    v = regularized_kernel(SpectralMeasure(Power(0.5)), 1, np.array([1.0, 10.0, 40.0]))
    assert np.all(np.isfinite(v))
    assert abs(v[2]) < abs(v[1]) < abs(v[0])


@pytest.mark.parametrize("measure, q", [
    (LEB, 1), (LEB, 2), (SpectralMeasure(Power(0.5)), 1),
    (SpectralMeasure(Lebesgue(), ((0.5, 1.0),)), 1),
])
def test_regularized_consistent_with_synthesis(measure, q):
    x = np.array([0.4, 1.0, 2.5, -1.7])
    a = regularized_kernel(measure, q, x)
    b = synthesize_kernel(weight_measure(measure, q), x)
    np.testing.assert_allclose(a, b, atol=1e-5)


# -- eta and the ODE --------------------------------------------------------------

def test_eta_examples():
    s = eta_profile(LEB, 1, np.array([0.5, 1.0, 2.0]))
    np.testing.assert_allclose(s.values, np.exp(-s.x) / 2, atol=1e-9)
    assert abs(s.values[1] - 0.1839397) < 1e-7
    np.testing.assert_allclose(eta_profile(ATOM0, 1, np.array([0.3, 3.0])).values, 1.0)


def test_fit_c0_for_lebesgue():
    x = np.arange(0.5, 3.0 + 1e-9, 1e-2)
    c, res = fit_exponential_polynomial(eta_profile(LEB, 1, x), 1, (0.5, 3.0))
    assert abs(c[0] - 0.5) < 1e-8 and res < 1e-8


def test_ode_residual_examples():
    h = 1e-3
    x = np.arange(0.5, 5.5, h)
    # 3-point stencil error h^2/12 * eta'''' ~ 4e-8 e^-x drops below 1e-8 from x = 2
    assert ode_residual(samples(x, np.exp(-x) / 2), 1, (2.0, 5.0)) <= 1e-8
    assert ode_residual(samples(x, np.exp(-x) / 2), 1, (1.0, 5.0)) <= 1e-6 / 12
    x = np.arange(3.5, 8.5, 1e-2)
    assert ode_residual(samples(x, x * np.exp(-x)), 2, (4.0, 8.0)) <= 1e-6
    x = np.arange(0.3, 2.2, h)
    assert ode_residual(samples(x, np.exp(-x * x)), 1, (0.5, 2.0)) >= 0.5


def test_ode_residual_grid_errors():
    x = np.linspace(0.1, 5, 20)
    with pytest.raises(GridError):
        ode_residual(samples(x, np.exp(-x)), 1, (1.0, 4.0))
    x = np.sort(np.random.default_rng(0).uniform(0.1, 5, 400))
    with pytest.raises(GridError):
        ode_residual(samples(x, np.exp(-x)), 1, (1.0, 4.0))


# -- pipeline ---------------------------------------------------------------------

@pytest.mark.parametrize("measure, p", [
    (SpectralMeasure(Window(1.0, -2.0, 3.0)), 1),
    (SpectralMeasure(Lorentzian(2.0, 0.5)), 1),
    (SpectralMeasure(Power(0.5)), 1),
    (LEB, 2),
])
def test_lag1_identity_holds_generally(measure, p):
    for n in (1, 3, 8):
        assert lag1_identity_residual(measure, p, n) < 1e-6


def test_rb_pipeline_positive_and_negative():
    pos = rb_pipeline(LEB, 1)
    assert pos["ode_residual"] < 1e-8
    assert abs(pos["fit_coefficients"][0] - 0.5) < 1e-6
    assert pos["constancy_residual"] < 1e-5
    assert pos["verdict"] == "coefficients constant for n>=p: no atoms"
    neg = rb_pipeline(SpectralMeasure(Lebesgue(), ((1.5, 2.0),)), 1)
    assert abs(neg["oscillation"] - neg["atom_weighted_mass"]) < 1e-5
    assert neg["verdict"] == "coefficients oscillate for n>=p: atoms present"


# -- tail norm ---------------------------------------------------------------------

def test_sigma_tail_norm_examples():
    m = SpectralMeasure(Lorentzian())
    val, info = sigma_tail_norm(m, 0.1, 20.0, full_output=True)
    assert abs(val - (np.exp(-0.2) - np.exp(-40)) / 8) < 1e-6
    assert info["status"] == "approximate"
    assert sigma_tail_norm(SpectralMeasure(), 0.1, 20.0) == 0.0
    assert abs(sigma_tail_norm(SpectralMeasure(Power(0.5)), 1.0, 50.0) - np.log(50)) < 1e-4


# -- closed-form profiles ---------------------------------------------------------

def test_kernel_profile_closed_forms():
    u = np.array([0.3, 1.0, 2.0])
    prof = kernel_profile(SpectralMeasure(SumDensity([Power(0.5), Lorentzian()]), ((0.0, 2 * np.pi),)))
    np.testing.assert_allclose(prof(u), power_kernel(0.5, u) + np.exp(-u) / 2 + 1, atol=1e-12)
    assert prof.singular_exponent == 0.5
    assert kernel_profile(LEB).delta == 1.0
    with pytest.raises(SingularKernelError):
        kernel_profile(SpectralMeasure(Power(1.5)))
