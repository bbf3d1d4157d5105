import itertools
import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from krein_spectra import asympt as a
from krein_spectra import models as m
from krein_spectra.errors import ExtensionError, InsufficientOrderError, ParameterError

INF = math.inf


def test_hankel_series_structure():
    p, q, t = a.hankel_pq(0.3, 8)
    assert p.coefficient(0) == 1.0
    assert t.coefficient(1) == 0.5
    p_neg, q_neg, _ = a.hankel_pq(-0.3, 8)
    for mine, other in ((p, p_neg), (q, q_neg)):
        np.testing.assert_allclose(mine.coefficients, other.coefficients, rtol=1e-14, atol=0)
    assert all(e % 2 == 0 for e in p.exponents)
    assert all(e % 2 == 1 for e in q.exponents)
    with pytest.raises(ParameterError):
        a.hankel_pq(0.3, 21)


def test_interval_large_argument_coefficients():
    nu = 0.3
    s = a.resolvent_asymptotic_coeffs(m.InverseSquareInterval(nu), nu, 6)
    h = nu * nu - 0.25
    assert s.coefficient(1) == pytest.approx(0.5) and s.is_imaginary(1)
    assert s.coefficient(2) == pytest.approx((nu + 0.5) / 2) and not s.is_imaginary(2)
    assert s.coefficient(3) == pytest.approx(-h / 4) and s.is_imaginary(3)
    assert s.coefficient(4) == pytest.approx(h / 4)


def test_dirac_large_argument_coefficients():
    nu = 0.3
    s = a.resolvent_asymptotic_coeffs(m.DiracInterval, nu, 6)
    h = nu * nu - 0.25
    assert s.coefficient(2) == pytest.approx(-(0.5 - nu))
    assert s.coefficient(3) == pytest.approx(h) and s.is_imaginary(3)
    assert s.coefficient(4) == pytest.approx(-1.5 * h)


def test_half_order_coefficients_vanish():
    s = a.resolvent_asymptotic_coeffs("interval", 0.5, 8)
    assert s.coefficient(3) == pytest.approx(0.0, abs=1e-16)
    assert s.coefficient(4) == pytest.approx(0.0, abs=1e-16)


def test_zero_order_series():
    s = a.resolvent_asymptotic_coeffs("interval", 0.0, 2)
    assert s.coefficient(1) == 0.5 and s.is_imaginary(1)
    assert s.coefficient(2) == 0.25


def test_unsupported_model():
    with pytest.raises(ExtensionError):
        a.resolvent_asymptotic_coeffs(m.OscillatorHalfLine(0.3), 0.3, 4)


@pytest.mark.parametrize("y", [50.0, 100.0])
def test_large_argument_series_against_closed_trace(y):
    nu = 0.3
    s = a.resolvent_asymptotic_coeffs("interval", nu, 6)
    mu = 1j * y
    series = sum(c * (1j if s.is_imaginary(k) else 1) * mu ** -k for k, c in s.terms)
    closed = m.resolvent_trace_closed(m.InverseSquareInterval(nu), INF, -y * y)
    assert abs(closed - series) <= 1.0 / y ** 7


def test_gamma_ratio_series_reproduces_ratio():
    nu, lam = 0.3, -200.0
    z = -lam
    coeffs = a.gamma_ratio_coeffs(nu, 10)
    log_series = -nu * math.log(z / 4) + sum(c * z ** (-2 * k) for k, c in enumerate(coeffs, 1))
    ratio = math.gamma(-nu / 2 + 0.5 - lam / 4) / math.gamma(nu / 2 + 0.5 - lam / 4)
    assert math.exp(log_series) == pytest.approx(ratio, rel=1e-10)


def test_gamma_ratio_coefficients_vanish_at_zero_order():
    assert all(c == 0 for c in a.gamma_ratio_coeffs(0, 8, exact=True))


def test_first_gamma_ratio_coefficient_half_order():
    # expand the log-gamma difference numerically at 60 digits
    with mp.workdps(60):
        nu = mp.mpf(1) / 2
        x = mp.mpf("1e-12")
        z = 1 / x
        f = (mp.loggamma((1 - nu) / 2 + z / 4) - mp.loggamma((1 + nu) / 2 + z / 4)
             + nu * mp.log(z / 4))
        expected = float(f / x ** 2)
    assert a.gamma_ratio_coeffs(0.5, 1)[0] == pytest.approx(expected, rel=1e-12)


def test_series_exp_constant_and_first_terms():
    out = a.series_exp(a.AsymptoticSeries("inv_lambda", ()), 4)
    assert out.terms == ((0, 1),)
    nu, big_n = Fraction(3, 10), 3
    coeffs = a.gamma_ratio_coeffs(nu, 4, exact=True)
    b = a._b_coeffs(nu, big_n, 4)
    assert b[0] == 1
    assert b[1] == big_n * coeffs[0]


def _partition_sum(f, n):
    """Coefficient of x**n in exp(sum f[m] x**m) by enumerating multiplicities."""
    total = Fraction(0)
    ranges = [range(n // k + 1) for k in range(1, n + 1)]
    for r in itertools.product(*ranges):
        if sum(k * rk for k, rk in enumerate(r, 1)) != n:
            continue
        term = Fraction(1)
        for k, rk in enumerate(r, 1):
            term *= f[k] ** rk / math.factorial(rk)
        total += term
    return total


@pytest.mark.parametrize("big_n", [1, 2, 5])
def test_exp_coefficients_match_partition_enumeration(big_n):
    nu = Fraction(1, 4)
    coeffs = a.gamma_ratio_coeffs(nu, 6, exact=True)
    f = {k: big_n * c for k, c in enumerate(coeffs, 1)}
    b = a._b_coeffs(nu, big_n, 6)
    assert b[2] == big_n * coeffs[1] + big_n ** 2 * coeffs[0] ** 2 / 2
    for n in range(1, 7):
        assert b[n] == _partition_sum(f, n)


def test_oscillator_residue_at_minus_nu():
    nu, theta = 0.3, 1.0
    _, poles = a.heat_exp_coeffs(m.OscillatorHalfLine(nu), theta, 3, 2)
    assert poles.residue(1.0) == 0.25
    assert poles.residue(-nu) == pytest.approx(4 ** nu * theta / math.gamma(-nu) ** 2, rel=1e-13)


def test_oscillator_residues_vanish_at_zero_theta():
    _, poles = a.heat_exp_coeffs(m.OscillatorHalfLine(0.3), 0.0, 4, 3)
    assert all(e.residue == 0.0 for e in poles if e.s < 0)


def test_oscillator_half_order_merged_residues():
    # lattice expansion of the eigenvalues agrees with these signs
    theta = 1.7
    _, poles = a.heat_exp_coeffs(m.OscillatorHalfLine(0.5), theta, 6, 2)
    assert poles.residue(-0.5) == pytest.approx(theta / (2 * math.pi), rel=1e-13)
    assert poles.residue(-1.5) == pytest.approx(-theta ** 3 / (2 * math.pi), rel=1e-13)
    lattice = a.oscillator_lattice(m.OscillatorHalfLine(0.5), theta).poles(3.0, -1.6)
    assert lattice.residue(-0.5) == pytest.approx(theta / (2 * math.pi), rel=1e-12)
    assert lattice.residue(-1.5) == pytest.approx(-theta ** 3 / (2 * math.pi), rel=1e-12)


@given(st.floats(0.05, 0.95), st.floats(-3.0, 3.0))
def test_oscillator_residues_two_routes(nu, theta):
    model = m.OscillatorHalfLine(nu)
    table = a.pole_table(model, theta, -1.0)
    lattice = a.oscillator_lattice(model, theta).poles(3.0, -1.0)
    for e in table:
        assert lattice.residue(e.s) == pytest.approx(e.residue, rel=1e-9, abs=1e-12)


def test_heat_coefficients_from_interval_table():
    nu, theta = 0.3, 1.0
    series = a.heat_coefficients(a.pole_table(m.InverseSquareInterval(nu), theta, -0.35))
    leading = series.coefficient(nu)
    assert leading == pytest.approx(4 ** nu * theta / math.gamma(-nu), rel=1e-13)
    assert series.coefficient(-0.5) == pytest.approx(math.gamma(0.5) / (2 * math.pi), rel=1e-14)


def test_interval_pole_tables():
    table = a.pole_table(m.InverseSquareInterval(0.3), INF, -2.0)
    first = table.entries[0]
    assert first.s == 0.5 and first.residue == pytest.approx(1 / (2 * math.pi))
    nu, theta = 0.3, 1.0
    model = m.InverseSquareInterval(nu)
    table = a.pole_table(model, theta, -0.5)
    expected = -(nu / math.pi) * model.coupling * theta * math.sin(math.pi * nu)
    assert table.residue(-nu) == pytest.approx(expected, rel=1e-14)
    zero = a.pole_table(m.InverseSquareInterval(0.0), 1.0, -3.0)
    assert [e.s for e in zero] == [0.5, -0.5, -1.5, -2.5]


def test_flux_tube_pole_tables():
    table = a.pole_table(m.AharonovBohmL0(0.25), 0.0, -5.0)
    assert [(e.s, e.residue) for e in table] == [(2.0, 0.5)]
    with pytest.raises(InsufficientOrderError):
        a.pole_table(m.AharonovBohmL0(0.25), 1.0, -20.0)


def test_pole_table_merging():
    table = a.PoleTable.build([(1.0, 0.5, 1, "x"), (1.0 + 1e-14, 0.25, 1, "y"), (0.0, 1.0, 1, "z")])
    assert len(table) == 2
    assert table.residue(1.0) == 0.75
    assert table.residue(3.0) == 0.0


def test_power_law_fit_exact():
    t = np.geomspace(1e-3, 1e-1, 20)
    fit = a.fit_power_law(np.column_stack([t, 3 * t ** 0.7]))
    assert fit.exponent == pytest.approx(0.7, abs=1e-12)
    assert fit.coefficient == pytest.approx(3.0, rel=1e-12)
    assert fit.stderr < 1e-12


def test_power_law_fit_with_correction():
    t = np.geomspace(1e-4, 1e-3, 20)
    y = 3 * t ** 0.7 * (1 + 0.1 * np.sqrt(t))
    assert abs(a.fit_power_law(np.column_stack([t, y])).exponent - 0.7) < 0.01


def test_power_law_fit_rejects_bad_samples():
    t = np.geomspace(1e-3, 1e-1, 20)
    with pytest.raises(ParameterError):
        a.fit_power_law(np.column_stack([t, np.sin(100 * t)]))
    with pytest.raises(ParameterError):
        a.fit_power_law(np.column_stack([t[:3], t[:3]]))
    short = np.linspace(1.0, 2.0, 10)
    with pytest.raises(ParameterError):
        a.fit_power_law(np.column_stack([short, short]))


def test_power_series_fit_recovers_exponent():
    t = np.geomspace(1e-3, 1e-2, 40)
    y = -0.7 * t ** 0.35 + 0.2 * t ** 0.7 + 0.05 * t ** 1.05
    fit = a.fit_power_series(np.column_stack([t, y]), n_terms=3)
    assert fit.exponent == pytest.approx(0.35, abs=1e-6)
    assert fit.coefficients[0] == pytest.approx(-0.7, rel=1e-5)
