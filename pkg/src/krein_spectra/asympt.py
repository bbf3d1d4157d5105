"""Asymptotic series, pole tables and power-law fits.

Coefficient recurrences are evaluated in exact rational arithmetic where
the inputs allow it.  Complex phases are kept out of storage: a term whose
true coefficient is ``i*sigma*c`` is stored as ``c`` with its exponent
listed in :attr:`AsymptoticSeries.imaginary`.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy import optimize

from . import models as md
from . import specfun as sf
from .errors import ExtensionError, InsufficientOrderError, ParameterError

MERGE_TOL = 1e-9
DEFAULT_WINDOW = (1e-3, 1e-2)
DEFAULT_NODES = 12


# ------------------------------------------------------------ containers

@dataclass(frozen=True)
class AsymptoticSeries:
    """Finite sum ``sum c * x**e`` in the variable named by ``variable``.

    ``variable`` is ``"t"``, ``"inv_lambda"`` (``x = 1/lambda``) or
    ``"inv_n"``.  Exponents listed in ``imaginary`` carry an extra factor
    ``i*sigma``.
    """

    variable: str
    terms: tuple
    imaginary: tuple = ()

    def __post_init__(self):
        if self.variable not in ("t", "inv_lambda", "inv_n"):
            raise ParameterError(f"unknown expansion variable {self.variable!r}")
        exps = [e for e, _ in self.terms]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise ParameterError("exponents must be strictly increasing")
        if not all(math.isfinite(float(c)) for _, c in self.terms):
            raise ParameterError("coefficients must be finite")

    def __len__(self):
        return len(self.terms)

    @property
    def exponents(self):
        return [e for e, _ in self.terms]

    @property
    def coefficients(self):
        return [c for _, c in self.terms]

    def coefficient(self, exponent, default=0.0):
        for e, c in self.terms:
            if abs(e - exponent) < MERGE_TOL:
                return c
        return default

    def is_imaginary(self, exponent):
        return any(abs(e - exponent) < MERGE_TOL for e in self.imaginary)

    def evaluate(self, x, sigma=1):
        """Sum the series at ``x``; imaginary-tagged terms get ``i*sigma``."""
        total = 0.0
        for e, c in self.terms:
            term = float(c) * x**e
            total = total + (1j * sigma * term if self.is_imaginary(e) else term)
        return total


class PoleEntry(NamedTuple):
    s: float
    residue: float
    multiplicity: int
    source: str


@dataclass(frozen=True)
class PoleTable:
    """Simple poles of a spectral function, sorted by ``s`` descending."""

    entries: tuple

    @classmethod
    def build(cls, entries, tol=MERGE_TOL):
        """Sort and merge entries whose locations differ by less than ``tol``."""
        merged = []
        for e in sorted((PoleEntry(float(e[0]), float(e[1]), int(e[2]), str(e[3]))
                         for e in entries), key=lambda e: -e.s):
            if merged and abs(merged[-1].s - e.s) < tol:
                last = merged[-1]
                sources = last.source.split("+")
                source = last.source if e.source in sources else f"{last.source}+{e.source}"
                merged[-1] = PoleEntry(last.s, last.residue + e.residue,
                                       max(last.multiplicity, e.multiplicity), source)
            else:
                merged.append(e)
        return cls(tuple(merged))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def residue(self, s, tol=MERGE_TOL):
        """Residue at ``s`` (0 if ``s`` is not a listed pole)."""
        for e in self.entries:
            if abs(e.s - s) < tol:
                return e.residue
        return 0.0

    def above(self, s_min):
        return PoleTable(tuple(e for e in self.entries if e.s >= s_min - MERGE_TOL))


# ---------------------------------------------------------------- Hankel

def hankel_pq(nu, order):
    """Hankel series ``P``, ``Q`` and the derivative correction ``T``.

    All three are returned in the variable ``1/z``.  ``P`` and ``Q`` carry
    their alternating signs; ``T_+-`` is stored without its powers of
    ``+-i``: the coefficient at exponent ``k`` is ``(2k-1)<nu,k-1>/2**k``.
    """
    if not 0 <= order <= 20:
        raise ParameterError(f"hankel_pq: order must lie in [0, 20], got {order}")
    p_terms, q_terms, t_terms = [], [], []
    for k in range(order + 1):
        sym = sf.hankel_symbol(nu, k) / 2.0**k
        if k % 2 == 0:
            p_terms.append((k, (-1) ** (k // 2) * sym))
        else:
            q_terms.append((k, (-1) ** (k // 2) * sym))
        if k >= 1:
            t_terms.append((k, (2 * k - 1) * sf.hankel_symbol(nu, k - 1) / 2.0**k))
    return (AsymptoticSeries("inv_lambda", tuple(p_terms)),
            AsymptoticSeries("inv_lambda", tuple(q_terms)),
            AsymptoticSeries("inv_lambda", tuple(t_terms)))


def _series_div(num, den, n):
    """First ``n`` coefficients of ``num/den`` for power series (den[0] != 0)."""
    out = []
    for k in range(n):
        acc = num[k] if k < len(num) else 0.0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / den[0])
    return out


def _as_kind(model):
    if isinstance(model, str):
        return model
    if isinstance(model, type):
        return {md.InverseSquareInterval: "interval", md.DiracInterval: "dirac"}.get(model)
    return getattr(model, "kind", None)


def resolvent_asymptotic_coeffs(model, nu, order):
    """Large-``mu`` coefficients ``A_k`` of the Dirichlet-type resolvent trace.

    Interval: ``Tr (A - mu**2)^-1 ~ sum A_k mu**-k``.  Dirac: the squared
    trace ``Tr (D - lam)^-2 ~ sum A_k lam**-k``.  Both for the upper half
    plane; odd-``k`` coefficients are imaginary and tagged as such.
    """
    kind = _as_kind(model)
    if kind not in ("interval", "dirac"):
        raise ExtensionError(f"resolvent_asymptotic_coeffs: unsupported model {model!r}")
    if not 1 <= order <= 12:
        raise ParameterError(f"order must lie in [1, 12], got {order}")
    terms, imag = [], []
    if kind == "interval":
        pq = [sf.hankel_symbol(nu, k) for k in range(order + 1)]
        tt = [0.0] + [(2 * k - 1) * sf.hankel_symbol(nu, k - 1) for k in range(1, order + 1)]
        y = _series_div(tt, pq, order)
        y[0] = 1.0
        for k in range(order):
            value = 1j * (-1j) ** k * y[k] / 2.0 ** (k + 1)
            if k == 1:
                value += nu / 2.0
            terms.append((k + 1, value))
    else:
        num = [sf.hankel_symbol(1.0 - nu, k) for k in range(order + 1)]
        den = [sf.hankel_symbol(-nu, k) for k in range(order + 1)]
        r = _series_div(num, den, order)
        terms.append((1, 0.0))
        for k in range(1, order):
            terms.append((k + 1, -k * 1j * r[k] * (-0.5j) ** k))
    stored = []
    for k, value in terms:
        if k % 2:
            stored.append((k, value.imag if isinstance(value, complex) else 0.0))
            imag.append(k)
        else:
            stored.append((k, value.real if isinstance(value, complex) else value))
    return AsymptoticSeries("inv_lambda", tuple(stored), tuple(imag))


# --------------------------------------------- Gamma-ratio coefficients

def _as_fraction(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def gamma_ratio_coeffs(nu, m_max, exact=False):
    """Coefficients ``a_1 .. a_m_max`` of the log Gamma-ratio expansion.

    ``log[Gamma((1-nu)/2 + z/4) / Gamma((1+nu)/2 + z/4)]
    ~ -nu*log(z/4) + sum a_m z**(-2m)`` for ``z -> +infinity``.
    """
    if not 0 <= m_max <= 15:
        raise ParameterError(f"m_max must lie in [0, 15], got {m_max}")
    v = _as_fraction(nu)
    lo, hi = (1 - v) / 2, (1 + v) / 2
    out = []
    for m in range(1, m_max + 1):
        acc = (lo ** (2 * m) - hi ** (2 * m)) + v / (2 * m) * (lo ** (2 * m) + hi ** (2 * m))
        inner = Fraction(0)
        for p in range(1, m + 1):
            inner += (sf.bernoulli_number(2 * p) / (p * (2 * p - 1)) * math.comb(2 * m - 1, 2 * p - 2)
                      * (hi ** (2 * (m - p) + 1) - lo ** (2 * (m - p) + 1)))
        acc += (2 * m + 1) * inner
        out.append(Fraction(2) ** (4 * m - 1) / (2 * m + 1) * acc)
    return out if exact else [float(a) for a in out]


def series_exp(series, n_max):
    """Coefficients of ``exp(series)`` on the lattice of the input's step.

    The input must have no constant term and exponents that are positive
    integer multiples of the smallest one.  Coefficient arithmetic is
    generic, so :class:`~fractions.Fraction` inputs stay exact.
    """
    terms = list(series.terms) if isinstance(series, AsymptoticSeries) else list(series)
    variable = series.variable if isinstance(series, AsymptoticSeries) else "inv_lambda"
    if not terms:
        return AsymptoticSeries(variable, ((0, 1),))
    step = min(e for e, _ in terms)
    if not step > 0:
        raise ParameterError("series_exp needs strictly positive exponents")
    f = {}
    for e, c in terms:
        k = e / step
        if abs(k - round(k)) > 1e-12:
            raise ParameterError("exponents must be multiples of a common step")
        f[int(round(k))] = c
    b = [1]
    for n in range(1, n_max + 1):
        acc = 0
        for k in range(1, n + 1):
            if k in f:
                acc += k * f[k] * b[n - k]
        b.append(acc / n if not isinstance(acc, int) else Fraction(acc, n))
    return AsymptoticSeries(variable, tuple((j * step, b[j]) for j in range(n_max + 1)))


def _b_coeffs(nu, big_n, n_max):
    a = gamma_ratio_coeffs(nu, max(n_max, 1), exact=True)
    inp = AsymptoticSeries("inv_lambda", tuple((m, big_n * a[m - 1]) for m in range(1, n_max + 1)))
    return series_exp(inp, n_max).coefficients


def heat_exp_coeffs(model, theta, N_max, n_max):
    """Coefficients ``C_{N,n}`` of the oscillator resolvent expansion and the poles they imply.

    Returns ``(table, poles)`` where ``table[(N, n)]`` is ``C_{N,n}`` and
    ``poles`` lists ``s = 1`` (residue 1/4) and ``s = -N nu - 2n`` with
    residue ``C_{N,n} sin(pi N nu)/pi``; coinciding poles are merged.
    """
    if not isinstance(model, md.OscillatorHalfLine):
        raise ExtensionError("heat_exp_coeffs: oscillator model only")
    theta = md.check_extension(model, theta)
    if math.isinf(theta):
        raise ExtensionError("heat_exp_coeffs: theta must be finite")
    nu = model.nu
    base = 4.0**nu * model.g * theta
    table = {}
    entries = [(1.0, 0.25, 1, "regular")]
    for big_n in range(1, N_max + 1):
        b = _b_coeffs(nu, big_n, n_max)
        for n in range(n_max + 1):
            c = -(base**big_n) * (nu + 2.0 * n / big_n) * float(b[n])
            table[(big_n, n)] = c
            entries.append((-big_n * nu - 2 * n, c * sf.sinpi(big_n * nu) / math.pi, 1,
                            f"N={big_n},n={n}"))
    return table, PoleTable.build(entries)


def heat_coefficients(table):
    """Small-``t`` heat-trace series implied by a pole table.

    A simple pole at ``s`` with residue ``R`` gives ``Gamma(s) R t**-s``;
    poles with vanishing residue are skipped.
    """
    terms = {}
    for e in table:
        if e.residue == 0.0:
            continue
        if e.s <= 0 and abs(e.s - round(e.s)) < MERGE_TOL:
            raise ParameterError(f"pole at nonpositive integer s={e.s} implies a log term")
        sgn_log = sf.lgamma(e.s)
        terms[-e.s] = sgn_log[1] * math.exp(sgn_log[0]) * e.residue
    return AsymptoticSeries("t", tuple(sorted(terms.items())))


# --------------------------------------------------------- AB coefficients

def _poly_mul(p, q, n):
    out = [0.0] * n
    for i, a in enumerate(p[:n]):
        if a == 0:
            continue
        for j, b in enumerate(q[: n - i]):
            out[i + j] += a * b
    return out


def _poly_pow(p, power, n):
    out = [1.0] + [0.0] * (n - 1)
    for _ in range(power):
        out = _poly_mul(out, p, n)
    return out


def ab_ratio_coeffs(kappa, n_max):
    """``a_n(kappa)`` with ``Gamma(kappa + X)/Gamma(X) ~ X**kappa sum a_n (4X)**-n``.

    Here ``X = x**2/4``; the series variable is ``x**-2``.
    """
    n = n_max + 1
    y = 4.0 * kappa  # log(1 + y X') with X' = x**-2
    log1p = [0.0] + [(-1) ** (j + 1) * y**j / j for j in range(1, n + 1)]
    # (1/(4X') + kappa - 1/2) * log(1 + y X') - kappa
    expo = [0.0] * n
    for j in range(n):
        expo[j] += log1p[j + 1] / 4.0 + (kappa - 0.5) * log1p[j]
    expo[0] -= kappa
    for m in range(1, n):
        coef = 4.0 ** (2 * m - 1) * float(sf.bernoulli_number(2 * m)) / (2 * m * (2 * m - 1))
        # [(1 + y X')^(1-2m) - 1] X'^(2m-1)
        binom = [_gbinom(1 - 2 * m, j) * y**j for j in range(n)]
        binom[0] -= 1.0
        for j in range(n):
            k = j + 2 * m - 1
            if k < n:
                expo[k] += coef * binom[j]
    out = series_exp(AsymptoticSeries("inv_lambda", tuple((j, expo[j]) for j in range(1, n))),
                     n_max).coefficients
    if abs(expo[0]) > 1e-12:
        out = [c * math.exp(expo[0]) for c in out]
    return [float(c) for c in out]


def _gbinom(r, j):
    out = 1.0
    for i in range(j):
        out *= (r - i) / (i + 1)
    return out


def ab_pole_entries(kappa, beta, N_max, n_max):
    """Flux-dependent poles ``s = -N(1-2kappa) - 2n`` of the AB zeta function."""
    a = ab_ratio_coeffs(kappa, n_max)
    entries = []
    for big_n in range(1, N_max + 1):
        b = _poly_pow(a, big_n, n_max + 1)
        for n in range(n_max + 1):
            amp = (-1) ** big_n / big_n * 4.0 ** (-kappa * big_n) * b[n]
            s = -big_n * (1.0 - 2.0 * kappa) - 2 * n
            res = ((-1) ** n * (big_n * (1 - 2 * kappa) + 2 * n) / math.pi
                   * beta**big_n * amp * sf.sinpi(big_n * kappa))
            entries.append((s, res, 1, f"N={big_n},n={n}"))
    return entries


# ------------------------------------------------------------ bi-series

class BiSeries:
    """Truncated double series ``sum c[N,k] u**N v**k``.

    ``u = n**-delta`` and ``v = 1/n``; terms of weight
    ``N*delta + k`` above ``cap`` are dropped.
    """

    __slots__ = ("terms", "delta", "cap")

    def __init__(self, terms, delta, cap):
        self.delta = float(delta)
        self.cap = float(cap)
        self.terms = {key: c for key, c in terms.items()
                      if c != 0.0 and self.weight(key) <= self.cap + 1e-12}

    def weight(self, key):
        return key[0] * self.delta + key[1]

    def _new(self, terms):
        return BiSeries(terms, self.delta, self.cap)

    @classmethod
    def const(cls, c, delta, cap):
        return cls({(0, 0): c}, delta, cap)

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            other = self._new({(0, 0): float(other)})
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0.0) + c
        return self._new(out)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return self._new({k: c * other for k, c in self.terms.items()})
        out = {}
        for (n1, k1), c1 in self.terms.items():
            w1 = n1 * self.delta + k1
            for (n2, k2), c2 in other.terms.items():
                if w1 + n2 * self.delta + k2 > self.cap + 1e-12:
                    continue
                key = (n1 + n2, k1 + k2)
                out[key] = out.get(key, 0.0) + c1 * c2
        return self._new(out)

    __rmul__ = __mul__

    def min_weight(self):
        return min((self.weight(k) for k in self.terms), default=math.inf)

    def compose(self, coeffs):
        """``sum coeffs[j] * self**j``; ``self`` must have no constant term."""
        if (0, 0) in self.terms:
            raise ParameterError("compose needs a series without constant term")
        w = self.min_weight()
        top = len(coeffs) - 1 if w == math.inf else min(len(coeffs) - 1, int(self.cap / w) + 1)
        out = self._new({(0, 0): coeffs[top]})
        for j in range(top - 1, -1, -1):
            out = out * self + coeffs[j]
        return out

    def power_of_one_plus(self, r):
        """``(1 + self)**r``."""
        w = self.min_weight()
        top = 0 if w == math.inf else int(self.cap / w) + 1
        return self.compose([_gbinom(r, j) for j in range(top + 1)])

    def exp(self):
        w = self.min_weight()
        top = 0 if w == math.inf else int(self.cap / w) + 1
        return self.compose([1.0 / math.factorial(j) for j in range(top + 1)])

    def close_to(self, other, tol=0.0):
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0))
                   <= tol * max(1.0, abs(self.terms.get(k, 0.0))) for k in keys)


@dataclass(frozen=True)
class LatticeSpectrum:
    """Eigenvalues ``lam_m = scale * x_m**power`` near the lattice ``m + shift``.

    The shift ``eps`` of ``x_m = m + shift + eps`` solves
    ``pi*eps = sigma * sum_j Y**j sin(j*pi*omega)/j`` with
    ``Y = coef * x**extra * Gamma(x + p)/Gamma(x + q)``, which is the
    large-``m`` form of the Gamma-ratio spectral conditions.
    """

    shift: float
    coef: float
    p: float
    q: float
    extra: float
    omega: float
    sigma: float
    scale: float
    power: float

    @property
    def delta(self):
        return self.q - self.p - self.extra

    def log_ratio_coeffs(self, kmax):
        """``beta_k`` with ``log Gamma(x+p)/Gamma(x+q) = (p-q) log x + sum beta_k x**-k``."""
        return [(-1) ** (k + 1) * (sf.bernoulli_polynomial(k + 1, self.p)
                                   - sf.bernoulli_polynomial(k + 1, self.q)) / (k * (k + 1))
                for k in range(1, kmax + 1)]

    def epsilon(self, cap):
        """Shift ``eps`` as a :class:`BiSeries` up to weight ``cap``."""
        d = self.delta
        v = BiSeries({(0, 1): 1.0}, d, cap)
        u = BiSeries({(1, 0): 1.0}, d, cap)
        beta = self.log_ratio_coeffs(int(cap) + 1)
        eps = BiSeries({}, d, cap)
        jmax = int(cap / d) + 1
        sines = [0.0] + [self.sigma * sf.sinpi(j * self.omega) / (j * math.pi)
                         for j in range(1, jmax + 1)]
        for _ in range(int(cap / min(d, 1.0)) + 8):
            zx = (eps + self.shift) * v
            corr = BiSeries({}, d, cap)
            for k, bk in enumerate(beta, start=1):
                if bk != 0.0:
                    corr = corr + _vpow(v, k) * zx.power_of_one_plus(-k) * bk
            y = u * zx.power_of_one_plus(-d) * corr.exp() * self.coef
            new = y.compose(sines)
            if new.close_to(eps, 1e-15):
                return new
            eps = new
        return eps

    def power_coeffs(self, s, cap, eps=None):
        """``(1 + (shift + eps)/m)**(-power*s)`` as a :class:`BiSeries`."""
        d = self.delta
        eps = self.epsilon(cap) if eps is None else eps
        zx = (eps + self.shift) * BiSeries({(0, 1): 1.0}, d, cap)
        return zx.power_of_one_plus(-self.power * s)

    def poles(self, cap, s_min=-math.inf):
        """Poles ``s = (1 - N delta - k)/power`` and their residues."""
        eps = self.epsilon(cap)
        d = self.delta
        keys = {(0, 0)} | set(self.power_coeffs(0.5, cap, eps).terms)
        entries = []
        for big_n in range(int(cap / d) + 1):
            for k in range(int(cap) + 1):
                if big_n * d + k > cap + 1e-12:
                    continue
                s = (1.0 - big_n * d - k) / self.power
                if s < s_min - MERGE_TOL:
                    continue
                c = self.power_coeffs(s, cap, eps).terms.get((big_n, k), 0.0)
                res = self.scale ** (-s) * c / self.power
                if res != 0.0 or (big_n, k) in keys:
                    entries.append((s, res, 1, f"lattice N={big_n},k={k}"))
        return PoleTable.build(entries)


def _vpow(v, k):
    out = v
    for _ in range(k - 1):
        out = out * v
    return out


def oscillator_lattice(model, theta):
    theta = md.check_extension(model, theta)
    if math.isinf(theta):
        raise ExtensionError("oscillator_lattice: theta must be finite")
    return LatticeSpectrum(shift=model.a, coef=model.g * theta, p=model.a, q=model.b,
                           extra=0.0, omega=model.nu, sigma=-1.0, scale=4.0, power=1.0)


def ab_lattice(model, beta):
    beta = md.check_extension(model, beta)
    if math.isinf(beta):
        raise ExtensionError("ab_lattice: beta must be finite")
    k = model.kappa
    return LatticeSpectrum(shift=k, coef=-0.5 * beta, p=1.0, q=1.0 - k, extra=-0.5,
                           omega=k, sigma=1.0, scale=2.0, power=0.5)


def susy_lattice(model, beta):
    beta = md.check_extension(model, beta)
    if math.isinf(beta):
        raise ExtensionError("susy_lattice: beta must be finite")
    c = model.c
    return LatticeSpectrum(shift=c, coef=beta / math.sqrt(2.0), p=1.0, q=1.0 - c, extra=-0.5,
                           omega=c, sigma=1.0, scale=math.sqrt(2.0), power=0.5)


def exact_lattice(shift, scale, power):
    """Lattice with no shift correction: ``lam_m = scale * (m + shift)**power``."""
    return LatticeSpectrum(shift=shift, coef=0.0, p=1.0, q=2.0, extra=0.0, omega=0.0,
                           sigma=1.0, scale=scale, power=power)


# ------------------------------------------------------------ McMahon

def mcmahon_ratio_coeffs(order):
    """``D_1 .. D_4`` with ``j_{order,n} ~ b (1 + sum D_j b**-2j)``, ``b = (n + order/2 - 1/4) pi``."""
    m = 4.0 * order * order
    return [-(m - 1) / 8.0,
            -4.0 * (m - 1) * (7 * m - 31) / (3.0 * 8**3),
            -32.0 * (m - 1) * (83 * m * m - 982 * m + 3779) / (15.0 * 8**5),
            -64.0 * (m - 1) * (6949 * m**3 - 153855 * m**2 + 1585743 * m - 6277237)
            / (105.0 * 8**7)]


def mcmahon_power_coeffs(order, power_s, terms=4):
    """``e_j`` with ``(j/b)**(-power_s) ~ sum_j e_j b**-2j``."""
    d = mcmahon_ratio_coeffs(order)[:terms]
    poly = [0.0] + d
    n = terms + 1
    out = [0.0] * n
    acc = [1.0] + [0.0] * (n - 1)
    for j in range(n):
        coef = _gbinom(-power_s, j)
        for i in range(n):
            out[i] += coef * acc[i]
        acc = _poly_mul(acc, poly, n)
    return out


# ------------------------------------------------------------ pole tables

def pole_table(model, ext, s_min):
    """Formula-driven poles with ``s >= s_min`` of the model's zeta function.

    Oscillator and interval: ``sum lam**-s``.  Signed models: the
    positive-branch function ``sum_{lam>0} lam**-s``.
    """
    ext = md.check_extension(model, ext)
    s_min = float(s_min)
    kind = model.kind
    if kind == "oscillator":
        if ext in md.distinguished(model):
            return PoleTable.build([(1.0, 0.25, 1, "regular")]).above(s_min)
        big_n = int(math.floor((1.0 - s_min) / model.nu)) + 1
        n_max = max(0, int(math.floor(-s_min / 2.0)) + 1)
        return heat_exp_coeffs(model, ext, big_n, n_max)[1].above(s_min)
    if kind == "interval":
        return _interval_poles(model, ext, s_min)
    if kind == "dirac":
        return _dirac_poles(model, ext, s_min)
    if kind == "ab":
        entries = [(2.0, 0.5, 1, "regular")]
        if not (ext == 0.0 or math.isinf(ext)):
            delta = 1.0 - 2.0 * model.kappa
            big_n = int(math.floor(-s_min / delta + 1e-9))
            n_max = max(0, int(math.floor((-s_min - delta) / 2.0 + 1e-9)))
            if big_n > 3 or n_max > 3:
                raise InsufficientOrderError(
                    f"ab: s_min={s_min} needs flux-dependent poles beyond N, n <= 3")
            entries += ab_pole_entries(model.kappa, ext, big_n, n_max)
        return PoleTable.build(entries).above(s_min)
    if ext in md.distinguished(model):
        return PoleTable.build([(2.0, 1.0, 1, "regular")]).above(s_min)
    raise ExtensionError("susy: pole table defined for the distinguished extensions only")


def _interval_poles(model, theta, s_min):
    nu = model.nu
    n_top = int(math.floor(0.5 - s_min))
    order = 2 * n_top + 1
    if order > 12:
        raise InsufficientOrderError(f"interval: s_min={s_min} needs A_k beyond k=12")
    coeffs = resolvent_asymptotic_coeffs("interval", nu, max(order, 1))
    entries = []
    for n in range(n_top + 1):
        # -(1/pi) Re{i A_{2n+1}} with A_{2n+1} = i*c
        c = coeffs.coefficient(2 * n + 1)
        entries.append((0.5 - n, c / math.pi, 1, "regular"))
    if nu > 0 and not math.isinf(theta) and theta != 0.0:
        ct = model.coupling * theta
        k = 1
        while -nu * k >= s_min - MERGE_TOL:
            entries.append((-nu * k, -(nu / math.pi) * ct**k * sf.sinpi(nu * k), 1, f"k={k}"))
            k += 1
    return PoleTable.build(entries).above(s_min)


def _dirac_poles(model, beta, s_min):
    nu = model.nu
    kmax = int(math.floor(2.0 - s_min))
    if kmax > 12:
        raise InsufficientOrderError(f"dirac: s_min={s_min} needs A_k beyond k=12")
    coeffs = resolvent_asymptotic_coeffs("dirac", nu, max(kmax, 3))
    entries = [(1.0, 1.0 / math.pi, 1, "regular")]
    for k in range(3, kmax + 1, 2):
        # Re(-i A_k) with A_k = i*c
        entries.append((2.0 - k, coeffs.coefficient(k) / (math.pi * (1 - k)), 1, "regular"))
    if beta != 0.0 and not math.isinf(beta) and nu != 0.5:
        gap = abs(1.0 - 2.0 * nu)
        k = 1
        while -gap * k >= s_min - MERGE_TOL:
            if nu > 0.5:
                res = (2 * nu - 1) * sf.sinpi(nu * k) / (math.pi * beta**k)
            else:
                res = -(1 - 2 * nu) * beta**k * sf.sinpi(nu * k) / math.pi
            entries.append((-gap * k, res, 1, f"k={k}"))
            k += 1
    return PoleTable.build(entries).above(s_min)


def eta_pole_table(model, beta, s_min):
    """Poles of ``eta = zeta_+(beta) - zeta_+(-beta)`` for the Dirac model."""
    if not isinstance(model, md.DiracInterval):
        raise ExtensionError("eta_pole_table: Dirac model only")
    plus = pole_table(model, beta, s_min)
    minus = pole_table(model, -beta, s_min)
    entries = [(e.s, e.residue, 1, e.source) for e in plus]
    entries += [(e.s, -e.residue, 1, e.source) for e in minus]
    merged = PoleTable.build(entries)
    return PoleTable(tuple(e for e in merged if abs(e.residue) > 1e-15))


# ------------------------------------------------------------- fitting

class PowerFit(NamedTuple):
    exponent: float
    coefficient: float
    stderr: float


class SeriesFit(NamedTuple):
    exponent: float
    coefficients: tuple
    rms: float


def fit_nodes(window=DEFAULT_WINDOW, count=DEFAULT_NODES):
    return np.geomspace(window[0], window[1], count)


def _prepare(samples, window):
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParameterError("samples must be (t, y) pairs")
    if window is not None:
        keep = (arr[:, 0] >= window[0] * (1 - 1e-12)) & (arr[:, 0] <= window[1] * (1 + 1e-12))
        arr = arr[keep]
    if len(arr) < 5:
        raise ParameterError(f"need at least 5 samples, got {len(arr)}")
    t, y = arr[:, 0], arr[:, 1]
    if np.any(t <= 0):
        raise ParameterError("sample abscissae must be positive")
    if t.max() < 10.0 * t.min() * (1 - 1e-12):
        raise ParameterError("samples must span at least one decade")
    return t, y


def fit_power_law(samples, window=None):
    """Least-squares fit ``y = c * t**p`` on ``(log t, log|y|)``."""
    t, y = _prepare(samples, window)
    if not (np.all(y > 0) or np.all(y < 0)):
        raise ParameterError("fit_power_law: samples change sign")
    x, z = np.log(t), np.log(np.abs(y))
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, z, rcond=None)
    resid = z - design @ coef
    dof = max(len(x) - 2, 1)
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.inv(design.T @ design)
    sign = 1.0 if y[0] > 0 else -1.0
    return PowerFit(float(coef[1]), sign * math.exp(coef[0]), math.sqrt(cov[1, 1]))


def fit_power_series(samples, n_terms=3, bounds=(0.02, 0.98), window=None, regular=False):
    """Fit ``y = sum_{k=1}^{n_terms} c_k t**(k p)`` by variable projection.

    For each trial ``p`` the coefficients solve a relative least-squares
    problem; ``p`` minimises the remaining residual.  ``regular=True``
    adds fixed ``t`` and ``t log t`` columns, which absorb the logarithmic
    term that appears when a multiple of ``p`` hits an integer.  Only the
    power coefficients are returned.
    """
    t, y = _prepare(samples, window)
    w = 1.0 / np.abs(y)
    fixed = [t, t * np.log(t)] if regular else []

    def solve(p):
        cols = [t ** (k * p) for k in range(1, n_terms + 1)] + fixed
        design = np.column_stack(cols) * w[:, None]
        coef, *_ = np.linalg.lstsq(design, y * w, rcond=None)
        resid = design @ coef - y * w
        return coef[:n_terms], float(resid @ resid)

    # the cost has several narrow basins, so refine every local grid minimum
    grid = np.linspace(bounds[0], bounds[1], 481)
    costs = np.array([solve(p)[1] for p in grid])
    best = None
    for i in range(len(grid)):
        if costs[i] > costs[max(i - 1, 0)] or costs[i] > costs[min(i + 1, len(grid) - 1)]:
            continue
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        trial = optimize.minimize_scalar(lambda p: solve(p)[1], bounds=(lo, hi),
                                         method="bounded", options={"xatol": 1e-10})
        if best is None or trial.fun < best.fun:
            best = trial
    coef, cost = solve(best.x)
    return SeriesFit(float(best.x), tuple(float(c) for c in coef), math.sqrt(cost / len(t)))
