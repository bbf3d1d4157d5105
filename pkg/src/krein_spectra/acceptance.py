"""Acceptance suite: ten end-to-end checks with fixed tolerances.

Each ``criterion_N`` returns a :class:`Criterion` holding one or more
sub-checks with the measured discrepancy; :func:`run_suite` runs a
selection and :func:`report_line` formats the one-line verdict.
"""

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from . import asympt as A
from . import models as md
from . import specfn as F
from . import specfun as sf
from . import spectrum as sp


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    checks: tuple
    elapsed: float

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _within(name, err, tol):
    return Check(name, bool(err <= tol), f"{err:.3g} <= {tol:g}")


def _timed(name, elapsed, limit):
    return Check(name, elapsed < limit, f"{elapsed:.2f} s < {limit:g} s")


def _rel(a, b):
    return np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.abs(np.asarray(b)))


def criterion_1():
    """Root-found eigenvalues of the distinguished extensions vs closed forms."""
    start = time.perf_counter()
    worst = 0.0
    for nu in (0.25, 0.5, 0.75):
        osc = md.OscillatorHalfLine(nu)
        n = np.arange(0, 101)
        for theta, shift in ((0.0, osc.a), (math.inf, osc.b)):
            found = sp.eigenvalues(osc, theta, n, method="roots").values
            worst = max(worst, _rel(found, 4.0 * (n + shift)))
        box = md.InverseSquareInterval(nu)
        n = np.arange(1, 101)
        for theta, order in ((0.0, -nu), (math.inf, nu)):
            found = sp.eigenvalues(box, theta, n, method="roots").values
            worst = max(worst, _rel(found, sf.bessel_j_zeros(order, n) ** 2))
    elapsed = time.perf_counter() - start
    return Criterion(1, "closed spectra reproduced by root finding",
                     (_within("relative error", worst, 1e-9), _timed("runtime", elapsed, 2.0)),
                     elapsed)


def criterion_2():
    """Mittag-Leffler sum over squared Bessel zeros vs the closed resolvent trace."""
    start = time.perf_counter()
    box = md.InverseSquareInterval(0.3)
    worst = 0.0
    for mu in (1.3, 3.7, 7.2):
        z = mu * mu
        summed = F.resolvent_trace_sum(box, math.inf, z).value
        worst = max(worst, abs(summed - md.resolvent_trace_closed(box, math.inf, z)))
    elapsed = time.perf_counter() - start
    return Criterion(2, "resolvent trace as a sum over Bessel zeros",
                     (_within("absolute error", worst, 1e-8), _timed("runtime", elapsed, 5.0)),
                     elapsed)


def criterion_3():
    """Ratio of resolvent-trace differences equals tau(lambda)."""
    start = time.perf_counter()
    box = md.InverseSquareInterval(0.3)
    lam = -4.0
    trace = {th: F.resolvent_trace_sum(box, th, lam).value for th in (1.0, 0.0, math.inf)}
    ratio = (trace[1.0] - trace[math.inf]) / (trace[0.0] - trace[math.inf])
    tau = md.krein_factor(box, lam, 1.0)[1]
    elapsed = time.perf_counter() - start
    return Criterion(3, "Krein relation between extensions",
                     (_within("ratio vs tau", abs(ratio - tau), 1e-8),), elapsed)


def criterion_4():
    """Channel-summed graded heat trace vs its closed form."""
    start = time.perf_counter()
    worst = 0.0
    for kappa in (0.1, 0.25, 0.4):
        for t in (0.05, 0.5, 2.0):
            summed = F.ab_graded_heat_sum(kappa, t).value
            worst = max(worst, abs(summed - md.graded_heat_closed_ab(kappa, t)))
    elapsed = time.perf_counter() - start
    return Criterion(4, "graded heat trace of the flux tube",
                     (_within("absolute error", worst, 1e-10),), elapsed)


def heat_difference_fit(nu, theta=1.0):
    """Fit ``heat_trace_diff - nu`` for ``theta`` vs infinity on the default window."""
    box = md.InverseSquareInterval(nu)
    samples = [(t, F.heat_trace_diff(box, theta, math.inf, t).value - nu)
               for t in A.fit_nodes()]
    return A.fit_power_series(samples, n_terms=3, regular=True)


def criterion_5():
    """Small-time exponent and coefficient of the heat-trace difference."""
    start = time.perf_counter()
    exp_err, coef_err = 0.0, 0.0
    for nu in (0.25, 0.4):
        fit = heat_difference_fit(nu)
        expected = 1.0 / sc.gamma(nu)
        exp_err = max(exp_err, abs(fit.exponent - nu))
        coef_err = max(coef_err, abs(fit.coefficients[0] - expected) / abs(expected))
    elapsed = time.perf_counter() - start
    return Criterion(5, "anomalous power in the heat-trace difference",
                     (_within("exponent", exp_err, 0.01),
                      _within("coefficient vs theta/Gamma(nu)", coef_err, 0.05),
                      _timed("runtime", elapsed, 60.0)), elapsed)


def criterion_6():
    """Residue at ``s = -nu`` of the continued oscillator zeta function."""
    start = time.perf_counter()
    nu, theta = 0.3, 1.0
    osc = md.OscillatorHalfLine(nu)
    s0, h = -nu, 1e-3
    numeric = 0.5 * h * (F.zeta_continued(osc, theta, s0 + h).value
                         - F.zeta_continued(osc, theta, s0 - h).value)
    formula = 4.0**nu * theta / sc.gamma(-nu) ** 2
    table = A.pole_table(osc, theta, -3.0).residue(s0)
    elapsed = time.perf_counter() - start
    return Criterion(6, "nu-dependent pole of the oscillator zeta function",
                     (_within("numeric residue", abs(numeric - formula) / formula, 0.01),
                      _within("table residue", abs(table - formula) / formula, 1e-12)), elapsed)


def criterion_7():
    """Squared-resolvent trace and spectral asymmetry of the Dirac model."""
    start = time.perf_counter()
    dirac = md.DiracInterval.from_nu(0.25)
    real = F.resolvent_trace_sum(dirac, math.inf, 0.8).value
    err = abs(real - md.resolvent_trace_closed(dirac, math.inf, 0.8))
    imag = F.resolvent_trace_sum(dirac, math.inf, 5.0j).value
    err = max(err, abs(imag - md.resolvent_trace_closed(dirac, math.inf, 5.0, axis="imag")))
    asym = max(abs(F.eta(dirac, ext, s).value) for ext in (math.inf, 0.0) for s in (2.0, 3.5))
    elapsed = time.perf_counter() - start
    return Criterion(7, "Dirac resolvent trace and vanishing eta",
                     (_within("resolvent", err, 1e-8), _within("eta", asym, 1e-12)), elapsed)


def criterion_8():
    """Supercharge eigenvalue bounds, closed spectra and graded partition function."""
    start = time.perf_counter()
    alpha = 0.25
    model = md.SusySupercharge(alpha)
    inside = True
    for beta in (-3.0, 1.0, 4.0):
        for sign in (1, -1):
            stream = sp.first_eigenvalues(model, beta, 200, sign)
            n, lam = stream.indices, np.abs(stream.values)
            inside &= bool(np.all((np.sqrt(2.0 * n) < lam) & (lam < np.sqrt(2.0 * (n + 1)))))
    worst = 0.0
    for beta in (math.inf, 0.0):
        for sign in (1, -1):
            first = md.first_index(model, beta, sign)
            stream = sp.eigenvalues(model, beta, np.arange(first, 201), sign, method="roots")
            n, found = stream.indices, np.abs(stream.values)
            closed = np.sqrt(2.0 * n) if math.isinf(beta) else np.sqrt(2.0 * n + 1.0 - 2.0 * alpha)
            nonzero = closed > 0
            worst = max(worst, _rel(found[nonzero], closed[nonzero]),
                        float(np.max(found[~nonzero], initial=0.0)))
    graded = 0.0
    for gamma, target in ((0.0, 1.0), (0.5 * math.pi, 0.0)):
        beta = md.susy_beta(alpha, gamma)
        for t in (0.25, 1.0):
            graded = max(graded, abs(F.graded_partition(alpha, beta, t).value - target))
    elapsed = time.perf_counter() - start
    return Criterion(8, "supersymmetric oscillator",
                     (Check("eigenvalue bounds", inside, "all roots inside"),
                      _within("closed spectra", worst, 1e-9),
                      _within("graded partition", graded, 1e-8)), elapsed)


def criterion_9():
    """Flux-tube zeta value at the origin and the pole table of beta = 0."""
    start = time.perf_counter()
    worst = 0.0
    for kappa in (0.1, 0.25, 0.4):
        worst = max(worst, abs(sf.hurwitz_zeta(0.0, kappa) - (0.5 - kappa)))
    kappa = 0.25
    poles = A.pole_table(md.AharonovBohmL0(kappa), 0.0, -1.5)
    only = [(e.s, e.residue) for e in poles] == [(2.0, 0.5)]
    elapsed = time.perf_counter() - start
    return Criterion(9, "flux-tube zeta function",
                     (_within("zeta(0)", worst, 0.0),
                      Check("pole table", only, repr([(e.s, e.residue) for e in poles]))), elapsed)


def criterion_10(seed=0, cases=10_000):
    """Randomised special-function identities."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    share = cases // 10
    checks = []

    x = rng.uniform(0.0, 1.0, 2 * share)
    x = x[(x > 1e-6) & (x < 1 - 1e-6)]
    refl = max(abs(math.exp(sf.lgamma(v)[0] + sf.lgamma(1 - v)[0]) * sf.sinpi(v) / math.pi - 1)
               for v in x)
    checks.append(_within("gamma reflection", refl, 1e-12))

    nus, xs = rng.uniform(0.0, 1.0, 2 * share), rng.uniform(0.1, 100.0, 2 * share)
    rec, wr = 0.0, 0.0
    for nu, z in zip(nus, xs):
        jm, _ = sf.bessel("J", nu - 1.0, z)
        j0, dj = sf.bessel("J", nu, z)
        jp, _ = sf.bessel("J", nu + 1.0, z)
        rec = max(rec, abs(jm + jp - 2.0 * nu / z * j0) / max(abs(jm), abs(jp), abs(j0)))
        y0, dy = sf.bessel("Y", nu, z)
        wr = max(wr, abs((j0 * dy - dj * y0) * math.pi * z / 2.0 - 1.0))
    checks.append(_within("Bessel recurrence", rec, 1e-10))
    checks.append(_within("Bessel Wronskian", wr, 1e-10))

    n = np.arange(1, 51)
    order = True
    for nu in rng.uniform(0.0, 1.0, share // 10):
        a, b = sf.bessel_j_zeros(nu, n), sf.bessel_j_zeros(nu + 1.0, n)
        order &= bool(np.all(a < b) and np.all(b[:-1] < a[1:]))
    checks.append(Check("zero interlacing", order, f"{share // 10} orders"))

    hz = 0.0
    for s, q in zip(rng.uniform(-10.0, 30.0, share), rng.uniform(0.05, 5.0, share)):
        if abs(s - 1.0) < 1e-3:
            continue
        left, right = sf.hurwitz_zeta(s, q), sf.hurwitz_zeta(s, q + 1.0)
        scale = max(1.0, abs(left), abs(right))
        hz = max(hz, abs(left - right - q ** (-s)) / scale)
    checks.append(_within("Hurwitz recurrence", hz, 1e-10))

    kt = 0.0
    for _ in range(share):
        m, b, z = int(rng.integers(0, 6)), rng.uniform(0.1, 2.9), rng.uniform(0.01, 50.0)
        if abs(b - round(b)) < 1e-2:
            continue
        lhs = sf.kummer("U", 1.0 - m - b, 2.0 - b, z)
        rhs = z ** (b - 1.0) * sf.kummer("U", -m, b, z)
        kt = max(kt, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    checks.append(_within("Kummer transformation", kt, 1e-8))

    up = 0.0
    for _ in range(share):
        m, b, z = int(rng.integers(0, 8)), rng.uniform(0.1, 3.0), rng.uniform(0.01, 50.0)
        val = sf.kummer("U", -m, b, z)
        ref = (-1) ** m * math.factorial(m) * sc.eval_genlaguerre(m, b - 1.0, z)
        up = max(up, abs(val - ref) / max(abs(ref), 1e-300))
    checks.append(_within("Kummer polynomial reduction", up, 1e-8))

    hk = 0.0
    for nu, k in zip(rng.uniform(-5.0, 5.0, 2 * share), rng.integers(0, 12, 2 * share)):
        a, b = sf.hankel_symbol(nu, int(k)), sf.hankel_symbol(-nu, int(k))
        hk = max(hk, abs(a - b) / max(abs(a), 1.0))
    checks.append(_within("Hankel parity", hk, 1e-12))

    elapsed = time.perf_counter() - start
    checks.append(_timed("runtime", elapsed, 30.0))
    return Criterion(10, "special-function identities", tuple(checks), elapsed)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def run_suite(numbers=None, seed=0):
    """Run the selected criteria (all by default) and return their results."""
    out = []
    for i in sorted(numbers or CRITERIA):
        fn = CRITERIA[i]
        out.append(fn(seed=seed) if i == 10 else fn())
    return out


def report_line(result):
    verdict = "PASS" if result.passed else "FAIL"
    parts = "; ".join(f"{c.name}: {'ok' if c.passed else 'FAILED'} ({c.detail})"
                      for c in result.checks)
    return f"criterion {result.number}: {verdict}  {result.title}  [{parts}]"
