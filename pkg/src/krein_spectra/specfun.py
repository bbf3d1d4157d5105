"""Real-parameter special functions.

Gamma, digamma, Bessel and Kummer M are thin wrappers around
:mod:`scipy.special` with the domain checks this package relies on.
Bessel zeros, Kummer U, the Hurwitz zeta function, Hankel symbols and
Bernoulli numbers are implemented here.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy import special as sc

from .errors import ConvergenceError, ParameterError, PoleError
from .roots import solve_brackets

EULER_GAMMA = 0.57721566490153286061
BERNOULLI_MAX = 30


def _is_nonpositive_integer(x):
    return x <= 0 and float(x).is_integer()


def sinpi(x):
    """sin(pi x) with exact reduction of the argument modulo 2."""
    x = np.asarray(x, dtype=float)
    r = x - 2.0 * np.round(0.5 * x)
    out = np.where(r == np.round(r), 0.0, np.sin(np.pi * r))
    return out if out.ndim else float(out)


def cospi(x):
    """cos(pi x) with exact reduction of the argument modulo 2."""
    x = np.asarray(x, dtype=float)
    r = x - 2.0 * np.round(0.5 * x)
    out = np.where(r - 0.5 == np.round(r - 0.5), 0.0, np.cos(np.pi * r))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------- gamma

def lgamma(x):
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``."""
    x = float(x)
    if not math.isfinite(x):
        raise ParameterError(f"lgamma: argument must be finite, got {x}")
    if _is_nonpositive_integer(x):
        raise PoleError(f"lgamma: Gamma has a pole at x={x:g}")
    return float(sc.gammaln(x)), int(sc.gammasgn(x))


def gamma_ratio(x, y):
    """Gamma(x)/Gamma(y) through log-gamma differences.

    Poles of the denominator give zero; poles of the numerator raise.
    """
    if _is_nonpositive_integer(y):
        if _is_nonpositive_integer(x):
            raise PoleError("gamma_ratio: both arguments at Gamma poles")
        return 0.0
    if x > _SHIFT_FAR and y > _SHIFT_FAR and abs(x - y) <= 2.0:
        return math.exp(log_gamma_shift(y, x - y))
    lx, sx = lgamma(x)
    ly, sy = lgamma(y)
    return sx * sy * math.exp(lx - ly)


_SHIFT_FAR = 30.0
_SHIFT_TERMS = 12


def log_gamma_shift(u, d):
    """``log Gamma(u + d) - log Gamma(u)`` for ``u > 0`` and ``u + d > 0``.

    Large ``u`` uses the Bernoulli-polynomial expansion in ``1/u`` instead
    of a difference of two nearly equal log-gammas.
    """
    u = np.asarray(u, dtype=float)
    d = float(d)
    out = np.empty_like(u)
    far = (u > _SHIFT_FAR) & (abs(d) <= 2.0)
    near = ~far
    if near.any():
        out[near] = sc.gammaln(u[near] + d) - sc.gammaln(u[near])
    if far.any():
        uf = u[far]
        acc = np.zeros_like(uf)
        for k in range(_SHIFT_TERMS, 0, -1):
            c = (bernoulli_polynomial(k + 1, d) - float(bernoulli_number(k + 1))) / (k * (k + 1))
            acc = (acc + (-1) ** (k + 1) * c) / uf
        out[far] = d * np.log(uf) + acc
    return out if out.ndim else float(out)


def rgamma(x):
    """1/Gamma(x), entire; accepts arrays."""
    return sc.rgamma(x)


def rgamma_deriv(x):
    """Derivative of 1/Gamma at ``x``.

    For ``x < 1/2`` the reflection form ``Gamma(1-x) [cos(pi x) -
    psi(1-x) sin(pi x)/pi]`` stays finite at the zeros of 1/Gamma.
    """
    x = float(x)
    if x >= 0.5:
        return -float(sc.psi(x) * sc.rgamma(x))
    return float(sc.gamma(1.0 - x) * (cospi(x) - sc.psi(1.0 - x) * sinpi(x) / math.pi))


def digamma(x):
    """Logarithmic derivative of Gamma."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"digamma: pole at x={x:g}")
    return float(sc.psi(x))


# --------------------------------------------------------------- Bessel

_BESSEL = {
    "J": (sc.jv, sc.jvp),
    "Y": (sc.yv, sc.yvp),
    "I": (sc.iv, sc.ivp),
    "K": (sc.kv, sc.kvp),
}


def bessel(kind, nu, x):
    """Return ``(Z_nu(x), Z_nu'(x))`` for ``kind`` in J, Y, I, K."""
    try:
        value, deriv = _BESSEL[kind.upper()]
    except (KeyError, AttributeError):
        raise ParameterError(f"bessel: unknown kind {kind!r}") from None
    x = float(x)
    if not x > 0:
        raise ParameterError(f"bessel: argument must be positive, got {x}")
    if abs(nu) > 5:
        raise ParameterError(f"bessel: |nu| must not exceed 5, got {nu}")
    return float(value(nu, x)), float(deriv(nu, x))


_IVE_FAR = 1e8


def _ive_far(order, y):
    """``exp(-y) I_order(y)`` from three terms of the large-argument series."""
    m = 4.0 * order * order
    a1 = (m - 1.0) / 8.0
    a2 = a1 * (m - 9.0) / 16.0
    a3 = a2 * (m - 25.0) / 24.0
    return (1.0 - a1 / y + a2 / y**2 - a3 / y**3) / np.sqrt(2.0 * np.pi * y)


def bessel_entire(order, w, scaled=True):
    """Entire Bessel function of ``w = mu**2``.

    Equals ``mu**(-order) * J_order(mu)`` for ``w > 0`` and
    ``y**(-order) * I_order(y)`` for ``w = -y**2 < 0``.  With ``scaled`` the
    negative branch is multiplied by ``exp(-y)``, which cancels in ratios
    taken at a common ``w``.  Its derivative in ``w`` is
    ``-bessel_entire(order + 1, w) / 2``.
    """
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    small = np.abs(w) < 1e-2
    pos = (w > 0) & ~small
    neg = (w < 0) & ~small
    if pos.any():
        mu = np.sqrt(w[pos])
        out[pos] = mu ** (-order) * sc.jv(order, mu)
    if neg.any():
        y = np.sqrt(-w[neg])
        if scaled:
            far = y > _IVE_FAR
            val = np.empty_like(y)
            val[~far] = sc.ive(order, y[~far])
            val[far] = _ive_far(order, y[far])
        else:
            val = sc.iv(order, y)
        out[neg] = y ** (-order) * val
    if small.any():
        ws = w[small]
        term = np.full_like(ws, 2.0 ** (-order))
        acc = term * sc.rgamma(order + 1.0)
        for k in range(1, 10):
            term = term * (-ws / 4.0) / k
            acc = acc + term * sc.rgamma(order + k + 1.0)
        if scaled:
            acc = acc * np.exp(-np.sqrt(np.maximum(-ws, 0.0)))
        out[small] = acc
    return out if out.ndim else float(out)


def _mcmahon(nu, n):
    m = 4.0 * nu * nu
    b = (np.asarray(n, dtype=float) + 0.5 * nu - 0.25) * np.pi
    e = 1.0 / (8.0 * b)
    return (b - (m - 1.0) * e - 4.0 * (m - 1.0) * (7.0 * m - 31.0) / 3.0 * e**3
            - 32.0 * (m - 1.0) * (83.0 * m * m - 982.0 * m + 3779.0) / 15.0 * e**5)


def bessel_j_zeros(nu, n):
    """Positive zeros ``j_{nu,n}`` for an array of indices ``n >= 1``.

    Large zeros start from McMahon's expansion and are polished by a
    safeguarded Newton iteration.  The first few zeros, where the expansion
    is unreliable, are isolated by a sign-change scan of ``J_nu``.
    """
    nu = float(nu)
    if not nu > -1.0:
        raise ParameterError(f"bessel_j_zero: order must exceed -1, got {nu}")
    if abs(nu) > 5:
        raise ParameterError(f"bessel_j_zero: |nu| must not exceed 5, got {nu}")
    n = np.atleast_1d(np.asarray(n))
    if n.size and (n.min() < 1 or not np.issubdtype(n.dtype, np.integer)):
        raise ParameterError("bessel_j_zero: indices must be positive integers")
    out = np.empty(n.shape, dtype=float)
    n_scan = int(np.ceil(3.0 + 0.5 * abs(nu)))
    low = n <= n_scan
    if low.any():
        out[low] = _scan_zeros(nu, n_scan)[n[low] - 1]
    high = ~low
    if high.any():
        seed = _mcmahon(nu, n[high])
        roots, _ = solve_brackets(
            lambda x: sc.jv(nu, x), seed - 0.4, seed + 0.4,
            deriv=lambda x: sc.jvp(nu, x), bisect_width=1e-2)
        out[high] = roots
    return out


@lru_cache(maxsize=64)
def _scan_zeros(nu, count):
    top = float(_mcmahon(nu, count)) + 2.0
    grid = np.concatenate([np.geomspace(1e-8, 1.0, 200)[:-1],
                           np.arange(1.0, top, 0.02)])
    vals = sc.jv(nu, grid)
    idx = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
    if idx.size < count:
        raise ConvergenceError(f"bessel_j_zero: scan found {idx.size} zeros, need {count}")
    idx = idx[:count]
    roots, _ = solve_brackets(
        lambda x: sc.jv(nu, x), grid[idx], grid[idx + 1],
        deriv=lambda x: sc.jvp(nu, x), bisect_width=0.0)
    roots.setflags(write=False)
    return roots


def bessel_j_zero(nu, n):
    """The ``n``-th positive zero of ``J_nu``."""
    if int(n) != n or n < 1:
        raise ParameterError(f"bessel_j_zero: index must be a positive integer, got {n}")
    return float(bessel_j_zeros(nu, np.array([int(n)]))[0])


# --------------------------------------------------------------- Kummer

def kummer(kind, a, b, z):
    """Confluent hypergeometric ``M(a,b,z)`` or ``U(a,b,z)`` for ``z > 0``."""
    a, b, z = float(a), float(b), float(z)
    if not z > 0:
        raise ParameterError(f"kummer: argument must be positive, got {z}")
    kind = str(kind).upper()
    if kind == "M":
        if _is_nonpositive_integer(b):
            raise ParameterError(f"kummer: M undefined for b={b:g}")
        return float(sc.hyp1f1(a, b, z))
    if kind == "U":
        return _kummer_u(a, b, z)
    raise ParameterError(f"kummer: unknown kind {kind!r}")


def _kummer_u_integral(a, b, z):
    # Laplace integral, valid for a > 0; the t**(a-1) endpoint is handled by
    # an algebraic quadrature weight.
    head = integrate.quad(lambda t: math.exp(-z * t) * (1.0 + t) ** (b - a - 1.0),
                          0.0, 1.0, weight="alg", wvar=(a - 1.0, 0.0),
                          epsabs=0.0, epsrel=1e-13, limit=200, full_output=1)[0]
    tail = integrate.quad(lambda t: math.exp(-z * t) * t ** (a - 1.0) * (1.0 + t) ** (b - a - 1.0),
                          1.0, np.inf, epsabs=0.0, epsrel=1e-13, limit=200, full_output=1)[0]
    return (head + tail) * math.exp(-sc.gammaln(a))


def _kummer_u_small(a, b, z):
    # connection formula through M; fine for z <= 1 and b away from integers
    first = sc.gamma(1.0 - b) * rgamma(a - b + 1.0) * sc.hyp1f1(a, b, z)
    second = (sc.gamma(b - 1.0) * rgamma(a) * z ** (1.0 - b)
              * sc.hyp1f1(a - b + 1.0, 2.0 - b, z))
    return float(first + second)


def _kummer_u(a, b, z):
    if z <= 1.0 and abs(b - round(b)) > 1e-3:
        return _kummer_u_small(a, b, z)
    if a > 0:
        return _kummer_u_integral(a, b, z)
    # U is the dominant solution of its three-term recurrence when a
    # decreases, so recurring downward from a positive start is stable.
    steps = math.ceil(-a) + 1
    c = a + steps
    u0 = _kummer_u_integral(c, b, z)
    u1 = _kummer_u_integral(c + 1.0, b, z)
    for _ in range(steps):
        u0, u1 = -(b - 2.0 * c - z) * u0 - c * (c - b + 1.0) * u1, u0
        c -= 1.0
    return u0


# -------------------------------------------------------- Hurwitz zeta

def hurwitz_zeta(s, q):
    """Hurwitz zeta function continued to all real ``s != 1``.

    Euler-Maclaurin summation with Bernoulli corrections up to ``B_30``.
    Large negative ``s`` with small ``q`` would cancel catastrophically in
    that form, so there Hermite's integral representation is used.
    """
    s, q = float(s), float(q)
    if s == 1.0:
        raise PoleError("hurwitz_zeta: pole at s=1")
    if not q > 0:
        raise ParameterError(f"hurwitz_zeta: q must be positive, got {q}")
    if s <= 0 and s.is_integer():
        m = int(-s)
        return float(-bernoulli_polynomial(m + 1, q) / (m + 1))
    base = 12.0 + 0.5 * abs(s)
    if q >= base or s >= -2.0:
        return _hurwitz_em(s, q, base)
    return _hurwitz_hermite(s, q)


def _hurwitz_em(s, q, base):
    shift = max(0, math.ceil(base - q))
    head = math.fsum((q + k) ** (-s) for k in range(shift))
    x = q + shift
    total = x ** (1.0 - s) / (s - 1.0) + 0.5 * x ** (-s)
    rising = s
    power = x ** (-s - 1.0)
    for j in range(1, BERNOULLI_MAX // 2 + 1):
        term = float(bernoulli_number(2 * j)) / math.factorial(2 * j) * rising * power
        total += term
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= x * x
    return head + total


def _hurwitz_hermite(s, q):
    def integrand(t):
        damp = math.exp(-2 * math.pi * t)
        return math.sin(s * math.atan2(t, q)) * (q * q + t * t) ** (-0.5 * s) * damp / -math.expm1(-2 * math.pi * t)

    val = integrate.quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-13,
                         limit=400, full_output=1)[0]
    return 0.5 * q ** (-s) + q ** (1.0 - s) / (s - 1.0) + 2.0 * val


# --------------------------------------------------- Hankel, Bernoulli

def hankel_symbol(nu, k):
    """Hankel symbol ``Gamma(1/2+nu+k) / (k! Gamma(1/2+nu-k))`` in product form."""
    if int(k) != k or k < 0:
        raise ParameterError(f"hankel_symbol: k must be a nonnegative integer, got {k}")
    m = 4.0 * nu * nu
    out = 1.0
    for j in range(1, int(k) + 1):
        out *= (m - (2 * j - 1) ** 2) / (4.0 * j)
    return out


@lru_cache(maxsize=1)
def _bernoulli_table():
    table = [Fraction(1)]
    for m in range(1, BERNOULLI_MAX + 1):
        acc = sum(math.comb(m + 1, j) * table[j] for j in range(m))
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli_number(n):
    """Exact Bernoulli number ``B_n`` (``B_1 = -1/2``) for ``n <= 30``."""
    if int(n) != n or not 0 <= n <= BERNOULLI_MAX:
        raise ParameterError(f"bernoulli_number: index must be in 0..{BERNOULLI_MAX}, got {n}")
    return _bernoulli_table()[int(n)]


def bernoulli_polynomial(n, x):
    """``B_n(x)``; exact when ``x`` is a Fraction or an int."""
    coeffs = [math.comb(n, k) * bernoulli_number(k) for k in range(n + 1)]
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        return sum(c * x ** (n - k) for k, c in enumerate(coeffs))
    acc = 0.0
    for c in coeffs:  # Horner in descending powers of x
        acc = acc * x + float(c)
    return acc
