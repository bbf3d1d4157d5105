import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy import special as sc

from krein_spectra import models as m
from krein_spectra import specfn as f
from krein_spectra import spectrum as sp
from krein_spectra.errors import DivergenceError, ExtensionError, ParameterError

INF = math.inf


# ------------------------------------------------------------------ heat

def test_heat_trace_geometric_series():
    t = 1.0
    expected = math.exp(-4 * 0.35 * t) / (1 - math.exp(-4 * t))
    got = f.heat_trace(m.OscillatorHalfLine(0.3), 0.0, t)
    assert got.value == pytest.approx(expected, rel=1e-13)


def test_heat_trace_against_oversummation():
    model, theta, t = m.InverseSquareInterval(0.25), 1.0, 0.01
    sample = f.heat_trace(model, theta, t, tol=1e-9)
    assert sample.bound <= 1e-9
    expected_terms = np.count_nonzero(sp.first_eigenvalues(model, theta, 40).values
                                      <= -math.log(1e-12) / t)
    assert abs(sample.terms - expected_terms) <= 2
    doubled = sp.first_eigenvalues(model, theta, 2 * sample.terms).values
    assert sample.value == pytest.approx(math.fsum(np.exp(-t * doubled)), abs=1e-9)


def test_heat_trace_signed_models_use_squares():
    model = m.AharonovBohmL0(0.25)
    t = 0.3
    # beta = 0 spectrum is +-2 sqrt(n + kappa)
    n = np.arange(0, 400)
    expected = 2 * math.fsum(np.exp(-t * 4 * (n + 0.25)))
    assert f.heat_trace(model, 0.0, t, tol=1e-14).value == pytest.approx(expected, rel=1e-12)


def test_heat_difference_identical_extensions():
    sample = f.heat_trace_diff(m.InverseSquareInterval(0.3), 0.7, 0.7, 0.1)
    assert sample.value == 0.0 and sample.bound == 0.0


def test_heat_difference_small_time_constant():
    sample = f.heat_trace_diff(m.InverseSquareInterval(0.3), 0.0, INF, 1e-5)
    assert sample.value == pytest.approx(0.3, abs=1e-9)


def test_oscillator_heat_difference_and_laplace_transform():
    a, b = 0.35, 0.65
    model = m.OscillatorHalfLine(0.3)

    def exact(t):  # sum_n [e^{-4t(n+a)} - e^{-4t(n+b)}]
        return (math.exp(-4 * t * a) - math.exp(-4 * t * b)) / -math.expm1(-4 * t)

    assert f.heat_trace_diff(model, 0.0, INF, 0.7, tol=1e-14).value == pytest.approx(exact(0.7),
                                                                         rel=1e-12)
    # its Laplace transform is the digamma difference of the resolvent traces
    for z in (0.5, 2.0, 7.0):
        integral, _ = integrate.quad(lambda t: math.exp(-z * t) * exact(t), 0, INF,
                                     epsabs=1e-13, epsrel=1e-12)
        expected = 0.25 * (sc.psi(z / 4 + b) - sc.psi(z / 4 + a))
        assert integral == pytest.approx(expected, rel=1e-10)
        assert m.resolvent_trace_diff_closed(model, 0.0, INF, z) == pytest.approx(expected,
                                                                                  rel=1e-13)


def test_flux_tube_graded_sum():
    for kappa, t in [(0.25, 0.5), (0.1, 0.05), (0.4, 2.0)]:
        sample = f.ab_graded_heat_sum(kappa, t)
        assert sample.value == pytest.approx(m.graded_heat_closed_ab(kappa, t), abs=1e-10)


def test_heat_rejects_bad_arguments():
    with pytest.raises(ParameterError):
        f.heat_trace(m.OscillatorHalfLine(0.3), 0.0, 0.0)
    with pytest.raises(ParameterError):
        f.heat_trace(m.OscillatorHalfLine(0.3), 0.0, 1.0, tol=-1.0)


def test_laplace_transform_of_heat_difference_gives_resolvent():
    model, theta, z = m.InverseSquareInterval(0.3), 1.0, -2.0

    def integrand(t):
        return math.exp(z * t) * f.heat_trace_diff(model, theta, INF, t, tol=1e-10).value

    start = 1e-3
    total = 0.3 * start  # the difference tends to nu as t -> 0
    for lo, hi in [(start, 1e-2), (1e-2, 1.0), (1.0, 60.0)]:
        total += integrate.quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-10, limit=200)[0]
    expected = (f.resolvent_trace_sum(model, theta, z).value
                - f.resolvent_trace_sum(model, INF, z).value)
    # the neglected head is of order start**(1 + nu)
    assert total == pytest.approx(expected, abs=1e-4)


# ------------------------------------------------------------------ zeta

def test_zeta_sum_closed_cases():
    got = f.zeta_sum(m.OscillatorHalfLine(0.3), 0.0, 2.0).value
    assert got == pytest.approx(4.0 ** -2 * float(mp.zeta(2, 0.35)), rel=1e-10)
    got = f.zeta_sum(m.AharonovBohmL0(0.25), 0.0, 3.0).value
    assert got == pytest.approx(2.0 ** -3 * 10.213055360466600739, rel=1e-10)


def test_zeta_sum_requires_convergence():
    with pytest.raises(DivergenceError):
        f.zeta_sum(m.OscillatorHalfLine(0.3), 0.0, 0.9)


@given(st.floats(1.2, 6.0), st.floats(0.05, 0.95))
@settings(max_examples=25)
def test_zeta_sum_matches_hurwitz(s, nu):
    got = f.zeta_sum(m.OscillatorHalfLine(nu), INF, s).value
    expected = 4.0 ** -s * float(mp.zeta(s, (1 + nu) / 2))
    assert got == pytest.approx(expected, rel=1e-9)


def test_zeta_sum_generic_extension_against_direct_sum():
    model, theta, s = m.InverseSquareInterval(0.3), 1.0, 2.0
    values = sp.first_eigenvalues(model, theta, 20000).values
    head = math.fsum(values ** -s)
    tail = 1 / (3 * math.pi ** 4 * 20000.0 ** 3)  # sum over n > N of (n pi)**-4
    assert f.zeta_sum(model, theta, s).value == pytest.approx(head + tail, rel=1e-12)


def test_negative_mode_goes_to_negative_part():
    sample = f.zeta_sum(m.InverseSquareInterval(0.75), -2.0, 1.5)
    assert len(sample.negative_part) == 1
    magnitude, phase = sample.negative_part[0]
    assert magnitude == pytest.approx(1.2122559332822582 ** -1.5, rel=1e-12)
    assert phase == pytest.approx(-1.5 * math.pi)


def test_continuation_matches_closed_form():
    s = -0.1
    got = f.zeta_continued(m.OscillatorHalfLine(0.3), 0.0, s).value
    assert got == pytest.approx(4.0 ** -s * float(mp.zeta(s, 0.35)), abs=1e-8)


def test_continuation_residue_at_minus_nu():
    nu, theta, h = 0.3, 1.0, 1e-5
    model = m.OscillatorHalfLine(nu)
    above = h * f.zeta_continued(model, theta, -nu + h).value
    below = -h * f.zeta_continued(model, theta, -nu - h).value
    expected = 4 ** nu * theta / math.gamma(-nu) ** 2
    assert 0.5 * (above + below) == pytest.approx(expected, rel=0.01)
    above = h * f.zeta_continued(model, INF, -nu + h).value
    below = -h * f.zeta_continued(model, INF, -nu - h).value
    assert abs(0.5 * (above + below)) <= 1e-8


def test_continuation_is_order_independent():
    model = m.OscillatorHalfLine(0.3)
    low = f.zeta_continued(model, 1.0, -0.15, order=4).value
    high = f.zeta_continued(model, 1.0, -0.15, order=6).value
    assert low == pytest.approx(high, abs=1e-8)


def test_continuation_agrees_with_sum_where_both_exist():
    model = m.AharonovBohmL0(0.3)
    assert f.zeta_continued(model, -1.0, 3.0).value == pytest.approx(
        f.zeta_sum(model, -1.0, 3.0).value, rel=1e-10)


# ------------------------------------------------------------------- eta

def test_eta_vanishes_for_symmetric_spectra():
    assert abs(f.eta(m.DiracInterval.from_nu(0.25), INF, 2.5).value) <= 1e-12
    assert abs(f.eta(m.DiracInterval.from_nu(0.25), 0.0, 2.5).value) <= 1e-12
    assert abs(f.eta(m.SusySupercharge(0.25), 0.0, 3.0).value) <= 1e-12


def test_eta_against_two_stream_sum():
    model, beta, s, count = m.SusySupercharge(0.25), 3.0, 4.0, 100000
    plus = sp.first_eigenvalues(model, beta, count, sign=1).values
    minus = sp.first_eigenvalues(model, beta, count, sign=-1).values
    direct = math.fsum(np.abs(plus) ** -s) - math.fsum(np.abs(minus) ** -s)
    got = f.eta(model, beta, s).value
    assert got == pytest.approx(direct, rel=1e-10)


def test_eta_requires_first_order_model():
    with pytest.raises(ExtensionError):
        f.eta(m.OscillatorHalfLine(0.3), 1.0, 3.0)


# -------------------------------------------------------------- resolvent

def test_interval_resolvent_sum_matches_closed_form():
    model, mu = m.InverseSquareInterval(0.3), 2.2
    got = f.resolvent_trace_sum(model, INF, mu * mu).value
    assert got == pytest.approx(m.resolvent_trace_closed(model, INF, mu * mu), abs=1e-8)


def test_dirac_squared_resolvent():
    nu, lam = 0.25, 0.8
    model = m.DiracInterval.from_nu(nu)
    with mp.workdps(30):
        expected = float(mp.diff(lambda x: mp.besselj(1 - nu, x) / mp.besselj(-nu, x), lam))
    assert f.resolvent_trace_sum(model, INF, lam).value == pytest.approx(expected, abs=1e-8)
    assert m.resolvent_trace_closed(model, INF, lam) == pytest.approx(expected, abs=1e-12)


def test_dirac_resolvent_on_imaginary_axis():
    model = m.DiracInterval.from_nu(0.25)
    got = f.resolvent_trace_sum(model, 1.5, 5j).value
    closed = m.resolvent_trace_closed(model, 1.5, 5.0, axis="imag")
    assert abs(complex(got) - complex(closed)) <= 1e-8


def test_resolvent_far_below_spectrum_is_positive():
    sample = f.resolvent_trace_sum(m.InverseSquareInterval(0.3), INF, -1e4, tol=1e-3)
    first = sp.nth_eigenvalue(m.InverseSquareInterval(0.3), INF, 1)
    assert 0 < sample.value
    assert sample.value < 1 / (first + 1e4) * 1e3


def test_resolvent_sum_rejects_other_models():
    with pytest.raises(DivergenceError):
        f.resolvent_trace_sum(m.OscillatorHalfLine(0.3), 0.0, 1.0)


@given(st.floats(0.05, 0.95), st.floats(-3.0, 3.0), st.floats(-20.0, -1.0))
@settings(max_examples=20)
def test_interval_resolvent_sum_equals_closed_form(nu, theta, z):
    model = m.InverseSquareInterval(nu)
    if theta < -1.0:
        return  # a negative mode may sit near z
    got = f.resolvent_trace_sum(model, theta, z).value
    assert got == pytest.approx(m.resolvent_trace_closed(model, theta, z), rel=1e-8, abs=1e-10)


# ------------------------------------------------------------- graded

def test_susy_norms_two_routes():
    for alpha, lam in [(0.25, 1.1), (-0.3, 2.7), (0.1, 0.4)]:
        total, _, _ = f.susy_norm_quadrature(alpha, lam)
        assert f.susy_norm_closed(alpha, lam) == pytest.approx(total, rel=1e-10)
    # mpmath quadrature at 30 digits, frozen
    assert f.susy_norm_closed(0.25, 1.1) == pytest.approx(0.975273281837281, rel=1e-12)


def test_graded_partition_distinguished_extensions():
    alpha = 0.25
    for t in (0.25, 0.5, 1.0, 2.0):
        top = f.graded_partition(alpha, m.susy_beta(alpha, 0.0), t)
        assert top.value == pytest.approx(1.0, abs=1e-8)
        mid = f.graded_partition(alpha, m.susy_beta(alpha, math.pi / 2), t)
        assert abs(mid.value) <= 1e-8


def test_graded_partition_depends_on_time_for_generic_extension():
    one = f.graded_partition(0.25, 2.0, 1.0).value
    two = f.graded_partition(0.25, 2.0, 2.0).value
    assert abs(one - two) > 1e-3
    assert abs(f.graded_partition(0.25, 2.0, 400.0).value) < 1e-9
    quad = f.graded_partition(0.25, 2.0, 2.0, norms="quadrature").value
    assert quad == pytest.approx(two, abs=1e-10)
