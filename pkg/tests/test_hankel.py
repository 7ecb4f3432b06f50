import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from whlab import (Bump, GridError, HankelProfile, Lebesgue, Lorentzian, Power,
                   RepresentationDomainError, SampledFunction, SingularKernelError,
                   SpectralMeasure, Table, Window, bernstein_profile,
                   complete_monotonicity_residual, hankel_closability_flag,
                   hankel_form_spectral, hankel_form_time)
from whlab.measure import SumDensity

ATOM0 = SpectralMeasure(atoms=((0.0, 2 * np.pi),))
CLOSABLE = "closable (sufficient condition met)"
NOT_MET = "criterion not met"


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.5])
def test_power_profile_is_inverse_power(a):
    t = np.array([0.5, 1.0, 3.0, 10.0])
    np.testing.assert_allclose(bernstein_profile(SpectralMeasure(Power(a)), t), t ** -a, rtol=1e-9)


def test_profile_examples():
    assert abs(bernstein_profile(SpectralMeasure(Power(1.0)), 2.0) - 0.5) < 1e-12
    assert abs(bernstein_profile(SpectralMeasure(Power(0.5)), 4.0) - 0.5) < 1e-12
    assert abs(bernstein_profile(ATOM0, 7.0) - 1.0) < 1e-15


def test_profile_table_against_quad():
    lam = np.array([0.0, 1.0, 4.0])
    phi = np.array([1.0, 3.0, 0.0])
    m = SpectralMeasure(Table(lam, phi))
    for t in (0.2, 1.0, 5.0):
        ref, _ = integrate.quad(lambda l: np.exp(-t * l) * np.interp(l, lam, phi), 0, 4, points=[1.0])
        assert abs(bernstein_profile(m, t) - ref / (2 * np.pi)) < 1e-12


def test_profile_refuses_full_line_density():
    with pytest.raises(RepresentationDomainError):
        bernstein_profile(SpectralMeasure(Lebesgue()), 1.0)
    with pytest.raises(RepresentationDomainError):
        HankelProfile.from_measure(SpectralMeasure(Lorentzian()))


def test_negative_atom_lower_bound():
    m = SpectralMeasure(Window(1.0, 0.0, 2.0), ((-1.0, 2.0), (0.0, 1.0)))
    t = np.logspace(-1, 2, 12)
    assert np.all(bernstein_profile(m, t) >= 3.0 / (2 * np.pi))


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.1, 5.0))
def test_profile_monotone_and_convex(a, t0):
    m = SpectralMeasure(SumDensity([Power(a), Window(2.0, 1.0, 3.0)]), ((0.5, 1.0),))
    t = t0 * np.array([1.0, 1.1, 1.2])
    h = bernstein_profile(m, t)
    assert h[1] <= h[0] and h[2] <= h[1]
    assert h[0] - 2 * h[1] + h[2] >= -1e-12 * h[0]


# -- forms ---------------------------------------------------------------------

def test_time_form_trivial():
    f = Bump(scale=1.5, shift=0.3)
    assert abs(hankel_form_time(HankelProfile.constant(1.0), f) - 1.0) < 1e-10
    assert hankel_form_time(HankelProfile.constant(0.0), f) == 0.0


def test_time_form_exponential_profile_is_laplace_square():
    f = Bump(scale=2.0, shift=0.5)
    lf, _ = integrate.quad(lambda x: np.real(f(x)) * np.exp(-x), 0.5, 2.5, epsabs=1e-14)
    assert abs(hankel_form_time(HankelProfile(lambda t: np.exp(-t)), f) - lf ** 2) < 1e-10


def test_spectral_form_examples():
    assert abs(hankel_form_spectral(ATOM0, Bump(scale=0.8)) - 1.0) < 1e-12
    assert hankel_form_spectral(SpectralMeasure(), Bump()) == 0.0


@pytest.mark.parametrize("f", [Bump(), Bump(scale=2.0, shift=0.4), Bump(scale=0.5, shift=1.0)])
def test_time_vs_spectral_power_half(f):
    t = hankel_form_time(HankelProfile.power(0.5), f)
    s = hankel_form_spectral(SpectralMeasure(Power(0.5)), f)
    assert abs(t - s) < 1e-8


def test_time_vs_spectral_power_one_sampled():
    x = np.linspace(0.0, 1.0, 401)
    f = SampledFunction(x, np.exp(-x))
    t = hankel_form_time(HankelProfile.power(1.0), f)
    s = hankel_form_spectral(SpectralMeasure(Power(1.0)), f)
    assert abs(t - s) < 1e-4


def test_time_form_refuses_strong_singularity():
    x = np.linspace(0.0, 1.0, 11)
    f = SampledFunction(x, np.ones_like(x) * (x < 1))
    with pytest.raises(SingularKernelError):
        hankel_form_time(HankelProfile.power(2.0), f)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 2.5), st.floats(0.3, 3.0), st.floats(0.0, 2.0), st.floats(-2, 2))
def test_spectral_form_non_negative(a, scale, shift, mod):
    m = SpectralMeasure(SumDensity([Power(a), Window(1.0, 0.0, 5.0)]), ((1.0, 0.5),))
    assert hankel_form_spectral(m, Bump(scale=scale, shift=shift, modulation=mod)) >= 0.0


# -- complete monotonicity -----------------------------------------------------

def test_cm_examples():
    t = np.linspace(0.5, 5.0, 30)
    assert complete_monotonicity_residual(HankelProfile.power(1.0), 4, t) >= -1e-6
    assert complete_monotonicity_residual(HankelProfile(lambda s: np.exp(-s)), 4, t) >= -1e-8
    assert complete_monotonicity_residual(HankelProfile(np.cos), 4, t) <= -0.4


def test_cm_grid_errors():
    with pytest.raises(GridError):
        complete_monotonicity_residual(HankelProfile.power(1.0), 2, [0.0, 1.0])
    with pytest.raises(GridError):
        complete_monotonicity_residual(HankelProfile.power(1.0), 7, [1.0])


# -- closability -----------------------------------------------------------------

def test_closability_examples():
    assert hankel_closability_flag(SpectralMeasure(Power(0.5)))[0] == CLOSABLE
    assert hankel_closability_flag(ATOM0)[0] == NOT_MET
    verdict, info = hankel_closability_flag(SpectralMeasure(Power(1.0)), np.logspace(0, 3, 7))
    assert verdict == CLOSABLE
    assert abs(info["h"][-1] - 1e-3) < 1e-12


def test_closability_needs_halfline_support():
    m = SpectralMeasure(Power(1.0), ((-0.5, 1e-6),))
    assert hankel_closability_flag(m)[0] == NOT_MET
