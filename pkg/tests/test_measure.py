import json

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from whlab import (FiniteMeasure, InvalidMeasureError, Lebesgue, Lorentzian,
                   NonFiniteResultError, Power, SpectralMeasure, Table, Window,
                   cayley_coeff, certify_growth, ess_inf_density, load_measure,
                   weight_measure, wiener_atom_statistic)
from whlab.measure import SumDensity, Weighted, cayley_point


def direct_cayley(density, n, lo=-np.inf, hi=np.inf):
    """Straight mpmath quadrature of omega(lam)^-n phi(lam) on the line."""
    def f(lam):
        lam = float(lam)
        return complex(((lam - 1j) / (lam + 1j)) ** (-n) * density(np.array([lam]))[0])
    pts = [p for p in (lo, -10, -1, 0, 1, 10, hi) if lo <= p <= hi]
    pts = sorted(set(pts))
    return complex(mpmath.quad(lambda t: mpmath.mpc(f(t)), pts))


# -- data model -------------------------------------------------------------

def test_atoms_are_sorted_and_validated():
    m = SpectralMeasure(atoms=((2.0, 1.0), (-1.0, 3.0)))
    assert m.atoms == ((-1.0, 3.0), (2.0, 1.0))
    with pytest.raises(InvalidMeasureError):
        SpectralMeasure(atoms=((0.0, 0.0),))
    with pytest.raises(InvalidMeasureError):
        SpectralMeasure(atoms=((1.0, 1.0), (1.0, 2.0)))
    with pytest.raises(InvalidMeasureError):
        SpectralMeasure(atoms=((0.0, np.inf),))


def test_growth_exponent_defaults_and_floor():
    assert SpectralMeasure(Lebesgue()).growth_p == 1
    assert SpectralMeasure(Power(0.5)).growth_p == 1
    assert SpectralMeasure(Power(2.0)).growth_p == 2
    assert SpectralMeasure(Lorentzian()).growth_p == 0
    with pytest.raises(InvalidMeasureError, match="growth_p"):
        SpectralMeasure(Lebesgue(), growth_p=0)


def test_gamma_hint_checked_against_density():
    SpectralMeasure(Lebesgue(2.0), gamma_hint=1.5)
    with pytest.raises(InvalidMeasureError, match="gamma_hint"):
        SpectralMeasure(Lorentzian(), gamma_hint=0.5)
    with pytest.raises(InvalidMeasureError, match="negative mass"):
        SpectralMeasure(Lebesgue(), ((0.0, -1.0),), gamma_hint=0.0)


def test_spec_round_trip(tmp_path):
    m = SpectralMeasure(SumDensity([Lebesgue(0.5), Power(0.5), Window(2.0, -1, 1)]),
                        ((0.0, 2 * np.pi), (3.0, 1.0)), 2)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_spec()))
    back = load_measure(path)
    assert back.to_spec() == m.to_spec()
    lam = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(back.density(lam), m.density(lam))


@pytest.mark.parametrize("spec, field", [
    ({"density": {"kind": "power"}}, "density.a"),
    ({"density": {"kind": "nope"}}, "density.kind"),
    ({"density": {"kind": "lebesgue", "levle": 1}}, "density.levle"),
    ({"density": {"kind": "table", "lambda": [], "phi": []}}, "table"),
    ({"atoms": [{"lambda": 0}]}, "atoms[0]"),
    ({"growth_p": 1.5}, "growth_p"),
    ({"extra": 1}, "extra"),
])
def test_schema_errors_name_the_field(spec, field):
    with pytest.raises(InvalidMeasureError) as exc:
        SpectralMeasure.from_spec(spec)
    assert field in str(exc.value)


def test_malformed_json_is_invalid_measure(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InvalidMeasureError):
        load_measure(p)


# -- ess_inf_density ----------------------------------------------------------

def test_ess_inf_examples():
    assert ess_inf_density(SpectralMeasure(Lebesgue()), np.linspace(-5, 5, 11)) == 1.0
    m = SpectralMeasure(SumDensity([Lebesgue(), Lorentzian()]))
    assert abs(ess_inf_density(m, np.linspace(-100, 100, 2001)) - (1 + 1 / 10001)) < 1e-12
    assert ess_inf_density(SpectralMeasure(Power(0.5)), np.linspace(-10, 10, 101)) == 0.0


def test_ess_inf_empty_grid_refused():
    with pytest.raises(InvalidMeasureError):
        ess_inf_density(SpectralMeasure(Lebesgue()), [])


def test_empty_table_refused():
    with pytest.raises(InvalidMeasureError):
        Table([], [])


# -- weight_measure -----------------------------------------------------------

def test_weight_lebesgue_total_mass_pi():
    w = weight_measure(SpectralMeasure(Lebesgue()), 1)
    assert isinstance(w, FiniteMeasure)
    ref, _ = integrate.quad(lambda l: 1 / (1 + l * l), -np.inf, np.inf)
    assert abs(w.total_mass() - ref) < 1e-9


def test_weight_atoms():
    assert weight_measure(SpectralMeasure(atoms=((0.0, 2 * np.pi),)), 1).atoms == ((0.0, 2 * np.pi),)
    assert weight_measure(SpectralMeasure(atoms=((1.0, 2.0),)), 2).atoms == ((1.0, 0.5),)


def test_weight_below_growth_refused():
    with pytest.raises(NonFiniteResultError):
        weight_measure(SpectralMeasure(Power(2.0)), 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3),
       st.lists(st.floats(-50, 50), min_size=1, max_size=10))
def test_weight_composition(p, q, lams):
    m = SpectralMeasure(Lebesgue(), ((0.5, 2.0),))
    lam = np.array(lams)
    once = weight_measure(m, p + q)
    twice_density = Weighted(Weighted(m.density, p), q)
    np.testing.assert_allclose(twice_density(lam), once.density(lam), rtol=1e-13)
    np.testing.assert_allclose(once.masses, weight_measure(weight_measure(m, p), q).masses, rtol=1e-14)


# -- certify_growth -------------------------------------------------------------

def test_certify_growth_accepts_declared_exponents():
    assert certify_growth(SpectralMeasure(Lebesgue()))[0]
    assert certify_growth(SpectralMeasure(Power(0.5)))[0]
    ok, val = certify_growth(SpectralMeasure(Lorentzian()))
    assert ok and abs(val - np.pi) < 1e-6


def test_certify_growth_rejects_too_small_exponent():
    ok, _ = certify_growth(SpectralMeasure(Lebesgue()), p=0, lambda_max=2.0 ** 20)
    assert not ok


# -- cayley_coeff ---------------------------------------------------------------

def test_cayley_point_maps_line_to_circle():
    lam = np.linspace(-30, 30, 61)
    np.testing.assert_allclose(np.abs(cayley_point(lam)), 1.0, atol=1e-15)
    assert cayley_point(0.0) == -1


def test_cayley_lorentzian_n0_is_pi():
    w = weight_measure(SpectralMeasure(Lebesgue()), 1)
    assert abs(cayley_coeff(w, 0) - np.pi) < 1e-9


@pytest.mark.parametrize("n", [1, 2, 5, 17, 30])
def test_cayley_lorentzian_vanishes_for_positive_n(n):
    # residue oracle: the integrand is analytic in the half-plane it closes in
    w = weight_measure(SpectralMeasure(Lebesgue()), 1)
    assert abs(cayley_coeff(w, n)) < 1e-6


def test_cayley_atom_at_zero():
    m = weight_measure(SpectralMeasure(atoms=((0.0, 2 * np.pi),)), 1)
    assert abs(cayley_coeff(m, 1) + 2 * np.pi) < 1e-14


@pytest.mark.parametrize("density, lo, hi", [
    (Window(1.0, -2.0, 3.0), -2.0, 3.0),
    (Lorentzian(2.0, 0.5), -np.inf, np.inf),
    (Weighted(Lebesgue(), 2), -np.inf, np.inf),
])
@pytest.mark.parametrize("n", [-3, 1, 4])
def test_cayley_against_direct_quadrature(density, lo, hi, n):
    m = FiniteMeasure(density)
    ref = direct_cayley(density, n, lo, hi)
    assert abs(cayley_coeff(m, n) - ref) < 1e-8 * max(1, abs(ref))


def test_cayley_power_density_endpoint_singularity():
    m = weight_measure(SpectralMeasure(Power(0.5)), 1)
    c = 2 * np.pi / np.sqrt(np.pi)
    for n in (0, 1, 3):
        ref = complex(mpmath.quad(
            lambda t: c * t ** -0.5 / (1 + t * t) * ((t - 1j) / (t + 1j)) ** (-n),
            [0, 1, 10, mpmath.inf]))
        assert abs(cayley_coeff(m, n) - ref) < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.integers(-12, 12), st.floats(0.2, 3.0), st.floats(-3, 3))
def test_cayley_hermitian_symmetry(n, width, loc):
    m = FiniteMeasure(Lorentzian(1.0, width), ((loc, 1.5),))
    assert abs(cayley_coeff(m, -n) - np.conj(cayley_coeff(m, n))) < 1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(-8, 8))
def test_cayley_linearity(n):
    m1 = FiniteMeasure(Lorentzian(1.0, 2.0), ((1.0, 2.0),))
    m2 = FiniteMeasure(Window(3.0, -1.0, 2.0), ((-2.0, 0.5),))
    both = FiniteMeasure(SumDensity([m1.density, m2.density]), m1.atoms + m2.atoms)
    assert abs(cayley_coeff(both, n) - cayley_coeff(m1, n) - cayley_coeff(m2, n)) < 1e-8


# -- Wiener statistic -----------------------------------------------------------

def test_wiener_atom_only_is_constant():
    m = weight_measure(SpectralMeasure(atoms=((0.0, 2 * np.pi),)), 1)
    for N in (1, 5, 13):
        assert abs(wiener_atom_statistic(m, N) - 4 * np.pi ** 2) < 1e-10


def test_wiener_lorentzian_decreases():
    m = weight_measure(SpectralMeasure(Lebesgue()), 1)
    vals = [wiener_atom_statistic(m, N) for N in (5, 10, 30)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] <= np.pi ** 2 / 61 + 1e-8


def test_wiener_empty_measure():
    assert wiener_atom_statistic(FiniteMeasure(), 7) == 0.0


def test_wiener_two_atoms_limit():
    # distinct circle points: cross terms average out, squares remain
    m = FiniteMeasure(atoms=((0.0, 1.0), (1.0, 2.0)))
    assert abs(wiener_atom_statistic(m, 400) - 5.0) < 0.05
