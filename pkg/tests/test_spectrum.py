import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from krein_spectra import models as m
from krein_spectra import specfun as sf
from krein_spectra import spectrum as sp
from krein_spectra.errors import ParameterError

INF = math.inf


def test_closed_examples():
    assert sp.nth_eigenvalue(m.OscillatorHalfLine(0.5), INF, 3) == pytest.approx(15.0, rel=1e-15)
    assert sp.nth_eigenvalue(m.InverseSquareInterval(0.5), 0.0, 2) == pytest.approx(
        (1.5 * math.pi) ** 2, rel=1e-14)


def test_interval_generic_root():
    # 1e-12 bisection of the Bessel condition in mpmath, frozen
    value = sp.nth_eigenvalue(m.InverseSquareInterval(0.25), 1.0, 1)
    assert value == pytest.approx(5.3696833557887399731, rel=1e-12)
    assert 0 < value < sf.bessel_j_zero(0.25, 1) ** 2


def test_root_method_reproduces_closed_forms():
    for model, ext in [(m.OscillatorHalfLine(0.3), 0.0), (m.InverseSquareInterval(0.7), INF),
                       (m.DiracInterval(0.1), 0.0), (m.AharonovBohmL0(0.2), INF),
                       (m.SusySupercharge(-0.2), 0.0)]:
        closed = sp.first_eigenvalues(model, ext, 30)
        roots = sp.first_eigenvalues(model, ext, 30, method="roots")
        np.testing.assert_allclose(roots.values, closed.values, rtol=1e-11, atol=1e-14)


def test_cutoff_listing_oscillator():
    stream = sp.eigenvalues_up_to(m.OscillatorHalfLine(0.3), 0.0, 50.0)
    expected = [4 * (n + 0.35) for n in range(13)]
    np.testing.assert_allclose(stream.values, expected, rtol=1e-15)


def test_cutoff_listing_dirac():
    nu = 0.25
    zeros = [sf.bessel_j_zero(nu, k) for k in (1, 2, 3)]
    stream = sp.eigenvalues_up_to(m.DiracInterval.from_nu(nu), 0.0, zeros[-1] * (1 + 1e-12))
    expected = sorted([0.0] + zeros + [-z for z in zeros])
    np.testing.assert_allclose(stream.values, expected, rtol=1e-14, atol=1e-300)


def test_empty_stream():
    stream = sp.eigenvalues_up_to(m.InverseSquareInterval(0.3), INF, 1.0)
    assert len(stream) == 0
    assert list(stream) == []


def test_stream_records_are_aligned():
    stream = sp.first_eigenvalues(m.SusySupercharge(0.25), 3.0, 4, sign="both")
    assert np.all(np.diff(stream.values) > 0)
    for rec in stream:
        assert rec.bracket.lo <= rec.value <= rec.bracket.hi
        assert math.copysign(1, rec.value) == rec.sign or rec.value == 0
    assert len(stream.branch(-1)) == 4 and len(stream.branch(1)) == 4


def test_sign_rules():
    with pytest.raises(ParameterError):
        sp.eigenvalues(m.OscillatorHalfLine(0.3), 0.0, [0], sign=-1)
    with pytest.raises(ParameterError):
        sp.eigenvalues(m.InverseSquareInterval(0.3), INF, [0])
    with pytest.raises(ParameterError):
        sp.eigenvalues(m.InverseSquareInterval(0.3), INF, [1], method="guess")


def test_negative_modes():
    values = sp.negative_modes(m.InverseSquareInterval(0.75), -2.0)
    assert len(values) == 1
    # imaginary-axis bisection of the modified-Bessel condition, frozen
    assert values[0] == pytest.approx(-1.2122559332822582212, rel=1e-12)
    y = math.sqrt(-values[0])
    model = m.InverseSquareInterval(0.75)
    lhs = sf.bessel_entire(-0.75, -y * y) - model.coupling * -2.0 * sf.bessel_entire(0.75, -y * y)
    assert abs(lhs) < 1e-10
    assert sp.negative_modes(model, 0.0) == []
    assert sp.negative_modes(m.OscillatorHalfLine(0.3), 0.0) == []
    osc = sp.negative_modes(m.OscillatorHalfLine(0.5), -0.7)
    assert len(osc) == 1 and osc[0] < 0


def test_extension_limits_approach_distinguished():
    model = m.InverseSquareInterval(0.3)
    n = np.arange(1, 11)
    big = sp.eigenvalues(model, 1e8, n, method="roots").values
    small = sp.eigenvalues(model, 1e-8, n, method="roots").values
    np.testing.assert_allclose(big, sp.eigenvalues(model, INF, n).values, rtol=1e-7)
    np.testing.assert_allclose(small, sp.eigenvalues(model, 0.0, n).values, rtol=1e-7)


def test_large_index_follows_mcmahon_phase():
    nu, theta = 0.3, 1.0
    model = m.InverseSquareInterval(nu)
    n = np.array([200, 400, 800])
    mu = np.sqrt(sp.eigenvalues(model, theta, n).values)
    # finite extensions share the J_-nu phase at large index
    phase = (n - nu / 2 - 0.25) * math.pi
    assert np.all(np.abs(mu - phase) < 1.0 / n ** 0.5)


def test_counting_matches_sign_changes():
    model, theta = m.InverseSquareInterval(0.4), 0.8
    cutoff = 2000.0
    grid = np.linspace(1e-6, cutoff, 400001)
    r = m.spectral_residual(model, theta, grid)
    changes = np.count_nonzero(np.diff(np.sign(r)) != 0)
    assert len(sp.eigenvalues_up_to(model, theta, cutoff)) == changes


def test_thread_count_does_not_change_results():
    model = m.DiracInterval(0.15)
    one = sp.first_eigenvalues(model, 2.5, 3000, threads=1)
    four = sp.first_eigenvalues(model, 2.5, 3000, threads=4)
    assert np.array_equal(one.values, four.values)


@given(st.floats(0.05, 0.95), st.floats(-5.0, 5.0), st.integers(1, 200))
def test_interval_roots_interlace_distinguished(nu, theta, n):
    model = m.InverseSquareInterval(nu)
    value = sp.nth_eigenvalue(model, theta, n)
    assert abs(m.spectral_residual(model, theta, value)) < 1e-9
    if theta != 0.0 and n >= 2:
        assert sp.nth_eigenvalue(model, INF, n - 1) < value < sp.nth_eigenvalue(model, 0.0, n) \
            or sp.nth_eigenvalue(model, 0.0, n - 1) < value < sp.nth_eigenvalue(model, INF, n)


exts = st.one_of(st.floats(-50.0, 50.0), st.sampled_from([0.0, 1e-300, -1e-300, 1e12, -1e12]))


@given(st.sampled_from(["oscillator", "dirac", "ab", "susy"]), st.floats(0.05, 0.45), exts,
       st.integers(0, 60), st.sampled_from([1, -1]))
def test_every_model_solves_with_ordered_roots(kind, p, ext, start, sign):
    if kind == "oscillator":
        model, sign = m.OscillatorHalfLine(2 * p), 1
    elif kind == "dirac":
        model = m.DiracInterval(p - 0.25)
    elif kind == "ab":
        model = m.AharonovBohmL0(p)
    else:
        model = m.SusySupercharge(p - 0.25)
    first = m.first_index(model, ext, sign)
    n = np.arange(first + start, first + start + 6)
    stream = sp.eigenvalues(model, ext, n, sign)
    values = stream.values if sign > 0 else stream.values[::-1]
    assert np.all(np.diff(sign * values) > 0)
    assert np.all(np.abs(stream.residuals) <= 1e-8 * np.maximum(stream.scales, 1e-300))
