"""Spectral functions: heat traces, zeta and eta functions, resolvent sums.

Every sum is split into an explicit head over enumerated eigenvalues and a
tail.  Heat-type tails are bounded by integral majorants of a growth law
``|lam_n| >= c (n - h)**p``.  Zeta-type tails are replaced by the zeta
images of an asymptotic description of the eigenvalues (Hurwitz images
of a lattice expansion, of McMahon's expansion of Bessel zeros, or of a
reference spectrum plus fitted power corrections); the reported bound is
the size of the first neglected order.  All reductions use
:func:`math.fsum`, so results do not depend on the thread count.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy import special as sc

from . import asympt as asy
from . import models as md
from . import specfun as sf
from . import spectrum as sp
from .errors import (DivergenceError, EigenvalueProximityError, ExtensionError,
                     InfeasibleToleranceError, InsufficientOrderError, NumericalError,
                     ParameterError)

EPS = np.finfo(float).eps
MAX_TERMS = sp.MAX_INDEX

# abscissa of convergence of sum |lam|**-s (positive branch for signed models)
ABSCISSA = {"oscillator": 1.0, "interval": 0.5, "dirac": 1.0, "ab": 2.0, "susy": 2.0}


@dataclass(frozen=True)
class SpectralSample:
    """Value of a spectral function at one argument.

    ``negative_part`` lists ``(magnitude, phase)`` pairs for eigenvalues
    that cannot enter a real power sum; each contributes
    ``magnitude * exp(1j * phase)`` and is never folded into ``value``.
    """

    argument: object
    value: object
    truncation_error_bound: float
    terms_used: int
    negative_part: tuple = ()

    @property
    def bound(self):
        return self.truncation_error_bound

    @property
    def terms(self):
        return self.terms_used


# ------------------------------------------------------------ enumeration

def _branch_values(model, ext, sign, count, start=None):
    """Eigenvalues of one branch ordered by index, from ``start`` on."""
    first = md.first_index(model, ext, sign)
    start = first if start is None else max(start, first)
    idx = np.arange(start, start + int(count))
    stream = sp.eigenvalues(model, ext, idx, sign)
    order = np.argsort(stream.indices, kind="stable")
    return stream.indices[order], stream.values[order]


def _branches(model):
    return (1, -1) if isinstance(model, md.SIGNED_MODELS) else (1,)


def _growth(model):
    """``(c, h, p)`` with ``|lam_n| >= c (n - h)**p`` for every index ``n > h``."""
    kind = model.kind
    if kind == "oscillator":
        return 4.0, 1.0 - model.b, 1.0
    if kind == "interval":
        return math.pi**2, 2.0, 2.0
    if kind == "dirac":
        return math.pi, 2.0, 1.0
    if kind == "ab":
        return 2.0, 1.0, 0.5
    return math.sqrt(2.0), 1.0, 0.5


def _exp_majorant(rate, c, h, p, n):
    """``sum_{m >= n} exp(-rate * (c (m - h)**p))`` bounded by first term plus integral."""
    if n <= h:
        return math.inf
    y = rate * c * (n - h) ** p
    head = math.exp(-y)
    # integral_{n}^{inf} exp(-rate c (u-h)^p) du via the upper incomplete gamma
    k = 1.0 / p
    integral = sc.gammaincc(k, y) * sc.gamma(k) / (p * (rate * c) ** k) if y < 700 else 0.0
    return head + integral


def _heat_cutoff(model, t, tol, power):
    c, h, p = _growth(model)
    rate_c, rate_p = (c**power, p * power)
    branches = len(_branches(model))
    n = max(int(math.ceil(h)) + 1, 2)
    while _exp_majorant(t, rate_c, h, rate_p, n) * branches > tol:
        n *= 2
        if n > MAX_TERMS:
            raise InfeasibleToleranceError(
                f"heat tolerance {tol:g} at t={t:g} needs more than {MAX_TERMS} eigenvalues")
    lo = n // 2
    while n - lo > 1:
        mid = (lo + n) // 2
        if _exp_majorant(t, rate_c, h, rate_p, mid) * branches > tol:
            lo = mid
        else:
            n = mid
    return n, _exp_majorant(t, rate_c, h, rate_p, n) * branches


def _check_t(t):
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise ParameterError(f"t must be positive and finite, got {t}")
    return t


def _check_tol(tol):
    tol = float(tol)
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    return tol


def _heat_power(model):
    # Schrodinger models: exp(-t lam); first-order models: exp(-t lam**2)
    return 2.0 if isinstance(model, md.SIGNED_MODELS) else 1.0


def heat_trace(model, ext, t, tol=1e-10):
    """``sum exp(-t lam_n)``; for the signed models ``sum exp(-t lam_n**2)``.

    Negative modes and zero modes are included.
    """
    ext = md.check_extension(model, ext)
    t, tol = _check_t(t), _check_tol(tol)
    power = _heat_power(model)
    cutoff, bound = _heat_cutoff(model, t, tol, power)
    terms = []
    used = 0
    for sign in _branches(model):
        first = md.first_index(model, ext, sign)
        if cutoff <= first:
            continue
        _, vals = _branch_values(model, ext, sign, cutoff - first)
        terms.append(np.exp(-t * np.abs(vals) ** power if power == 2.0 else -t * vals))
        used += vals.size
    value = math.fsum(np.concatenate(terms)) if terms else 0.0
    return SpectralSample(t, value, bound + 4 * EPS * used * max(abs(value), 1.0), used)


def heat_trace_diff(model, ext_a, ext_b, t, tol=1e-10):
    """``Tr exp(-t A_a) - Tr exp(-t A_b)`` summed over index-matched pairs."""
    ext_a = md.check_extension(model, ext_a)
    ext_b = md.check_extension(model, ext_b)
    t, tol = _check_t(t), _check_tol(tol)
    if ext_a == ext_b:
        return SpectralSample(t, 0.0, 0.0, 0)
    power = _heat_power(model)
    cutoff, bound = _heat_cutoff(model, t, tol / 2.0, power)
    diffs = []
    used = 0
    for sign in _branches(model):
        fa, fb = md.first_index(model, ext_a, sign), md.first_index(model, ext_b, sign)
        count = max(cutoff - min(fa, fb), 0)
        _, va = _branch_values(model, ext_a, sign, count)
        _, vb = _branch_values(model, ext_b, sign, count)
        k = min(va.size, vb.size)
        ea = np.exp(-t * (np.abs(va) ** 2 if power == 2.0 else va))
        eb = np.exp(-t * (np.abs(vb) ** 2 if power == 2.0 else vb))
        diffs.append(ea[:k] - eb[:k])
        diffs.append(ea[k:])
        diffs.append(-eb[k:])
        used += va.size + vb.size
    value = math.fsum(np.concatenate(diffs))
    return SpectralSample(t, value, 2.0 * bound + 4 * EPS * used, used)


def ab_graded_heat_sum(kappa, t, tol=1e-12):
    """Channel sum ``2 sum_{l<0} sum_n [exp(-4t(n+|l|+kappa)) - exp(-4t(n+|l|))]``.

    This is the flux-dependent part of ``Tr[exp(-t D**2) - exp(-t D0**2)]``
    from the channels ``l < 0``; channels ``l > 0`` do not depend on the flux.
    """
    md.AharonovBohmL0(kappa)
    t, tol = _check_t(t), _check_tol(tol)
    q = math.exp(-4.0 * t)
    factor = -math.expm1(-4.0 * t * kappa)

    def tail(m):  # 2 (1 - e^{-4 t kappa}) sum_{j > m} j q**j
        return 2.0 * factor * q ** (m + 1) * ((m + 1) - m * q) / (1.0 - q) ** 2

    m = 1
    while tail(m) > tol:
        m *= 2
        if m > 10**7:
            raise InfeasibleToleranceError(f"AB channel sum at t={t:g} needs too many levels")
    terms = []
    for l in range(1, m + 1):
        n = np.arange(0, m - l + 1)
        lam_k = np.array([md.ab_channel_eigenvalue(kappa, -l, int(j)) for j in n]) ** 2
        lam_0 = 4.0 * (n + l)
        terms.append(2.0 * (np.exp(-t * lam_k) - np.exp(-t * lam_0)))
    flat = np.concatenate(terms)
    return SpectralSample(t, math.fsum(flat), tail(m) + 4 * EPS * flat.size, int(flat.size))


# ------------------------------------------------------------------ tails

def _hz(q, a):
    return sf.hurwitz_zeta(q, a)


class _LatticeTail:
    """``lam_n = scale * x_m**power`` with ``m = n - offset`` and a lattice expansion of ``x_m``."""

    def __init__(self, lattice, offset, cap):
        self.lat = lattice
        self.offset = offset
        self.cap = float(cap)
        self.exact = lattice.coef == 0.0

    def _eps(self):
        return _lattice_eps(self.lat, self.cap)

    def images(self, s, n0):
        lat = self.lat
        m0 = n0 - self.offset
        if self.exact:
            return lat.scale ** (-s) * _hz(lat.power * s, m0 + lat.shift)
        coeffs = lat.power_coeffs(s, self.cap, self._eps())
        d = lat.delta
        parts = [c * _hz(lat.power * s + big_n * d + k, m0)
                 for (big_n, k), c in coeffs.terms.items()]
        return lat.scale ** (-s) * math.fsum(parts)

    def point(self, s, n):
        lat = self.lat
        m = n - self.offset
        if self.exact:
            return lat.scale ** (-s) * (m + lat.shift) ** (-lat.power * s)
        coeffs = lat.power_coeffs(s, self.cap, self._eps())
        d = lat.delta
        return lat.scale ** (-s) * math.fsum(
            c * m ** (-(lat.power * s + big_n * d + k)) for (big_n, k), c in coeffs.terms.items())

    def next_exponent(self, s):
        if self.exact:
            return math.inf
        d = self.lat.delta
        weights = [big_n * d + k for big_n in range(int(self.cap / d) + 3)
                   for k in range(int(self.cap) + 3)]
        nxt = min(w for w in weights if w > self.cap + 1e-12)
        return self.lat.power * s + nxt


@lru_cache(maxsize=64)
def _lattice_eps(lattice, cap):
    return lattice.epsilon(cap)


class _BesselTail:
    """``|lam_n| = j_{order, n - offset}**p`` continued through McMahon's expansion."""

    def __init__(self, order, p, offset, terms=4):
        self.order = order
        self.p = p
        self.offset = offset
        self.terms = terms
        self.h = order / 2.0 - 0.25

    def images(self, s, n0):
        ps = self.p * s
        e = asy.mcmahon_power_coeffs(self.order, ps, self.terms)
        k0 = n0 - self.offset
        return math.fsum(e[j] * math.pi ** (-ps - 2 * j) * _hz(ps + 2 * j, k0 + self.h)
                         for j in range(self.terms + 1))

    def point(self, s, n):
        ps = self.p * s
        e = asy.mcmahon_power_coeffs(self.order, ps, self.terms)
        b = (n - self.offset + self.h) * math.pi
        return math.fsum(e[j] * b ** (-ps - 2 * j) for j in range(self.terms + 1))

    def exact_points(self, s, n):
        return self._zeros(np.asarray(n) - self.offset) ** (-self.p * s)

    def _zeros(self, k):
        key = (int(k[0]), int(k[-1]))
        if getattr(self, "_zkey", None) != key:
            self._zkey, self._zval = key, sf.bessel_j_zeros(self.order, k)
        return self._zval

    def next_exponent(self, s):
        return self.p * s + 2 * (self.terms + 1)


class _CorrectedTail:
    """Reference Bessel spectrum plus power corrections fitted on a window of eigenvalues.

    ``|lam_n|**-s - ref_n**-s ~ sum_i c_i (n + h)**-q_i`` with exponents
    ``q_i = p s + 1 + w_i`` fixed by the anomalous pole spacing; the
    coefficients are fitted for each ``s`` by linear least squares.
    """

    def __init__(self, model, ext, sign, reference, weights):
        self.model, self.ext, self.sign = model, ext, sign
        self.ref = reference
        self.weights = weights
        self._cache = {}
        self._fits = {}

    def _window(self, n0):
        if n0 not in self._cache:
            idx, vals = _branch_values(self.model, self.ext, self.sign, 7 * n0, start=n0)
            self._cache[n0] = (idx, np.abs(vals))
        return self._cache[n0]

    def _fit(self, s, n0):
        key = (s, n0)
        if key not in self._fits:
            self._fits[key] = self._solve(s, n0)
        return self._fits[key]

    def _solve(self, s, n0):
        idx, vals = self._window(n0)
        ref = self.ref.exact_points(s, idx)
        d = vals ** (-s) - ref
        base = idx + self.ref.h
        if not self.weights:
            return [], d, base, np.zeros(0)
        expo = [self.ref.p * s + 1.0 + w for w in self.weights]
        design = np.column_stack([base ** (-q) for q in expo])
        scale = np.abs(design[:, 0])
        coef, *_ = np.linalg.lstsq(design / scale[:, None], d / scale, rcond=None)
        resid = (design @ coef - d) / scale
        return expo, coef, base, resid

    def images(self, s, n0):
        value = self.ref.images(s, n0)
        expo, coef, _, _ = self._fit(s, n0)
        if not expo:
            return value
        h = self.ref.h
        return value + math.fsum(c * _hz(q, n0 + h) for c, q in zip(coef, expo))

    def bound(self, s, n0):
        expo, coef, base, resid = self._fit(s, n0)
        h = self.ref.h
        if not expo:
            d0 = abs(coef[0])
            q = self.ref.p * s + 1.0
            return d0 * (1.0 + (n0 + h) / max(q - 1.0, 1e-3)) * 2.0
        last = abs(coef[-1] * _hz(expo[-1], n0 + h))
        spread = float(np.max(np.abs(resid))) * abs(_hz(expo[0], n0 + h)) if resid.size else 0.0
        return last + spread

    def next_exponent(self, s):
        return self.ref.p * s + 1.0 + (self.weights[-1] if self.weights else 0.0)


def _correction_weights(gap, count=5, span=2.0):
    if gap <= 0:
        return [float(j) for j in range(count)]
    ws = sorted({round(gap * (k - 1) + j, 12) for k in range(1, count + 2)
                 for j in range(count) if gap * (k - 1) + j <= span})
    return ws[:count]


def _bessel_reference(model, ext, sign, order, p, n0):
    """Bessel tail whose zero index best matches eigenvalue ``n0``."""
    _, vals = _branch_values(model, ext, sign, 1, start=n0)
    target = abs(float(vals[0])) ** (1.0 / p)
    best = min((-1, 0, 1), key=lambda o: abs(sf.bessel_j_zero(order, max(n0 - o, 1)) - target))
    return _BesselTail(order, p, best)


def _tail(model, ext, sign, cap, n0):
    """Asymptotic description of ``|lam_n|`` on one branch for ``n >= n0``."""
    kind = model.kind
    branch_ext = -ext if (sign < 0 and kind in ("dirac", "ab", "susy")) else ext
    if kind == "oscillator":
        if ext == 0.0:
            return _LatticeTail(asy.exact_lattice(model.a, 4.0, 1.0), 0, cap)
        if math.isinf(ext):
            return _LatticeTail(asy.exact_lattice(model.b, 4.0, 1.0), 0, cap)
        return _LatticeTail(asy.oscillator_lattice(model, ext), 0, cap)
    if kind == "ab":
        if branch_ext == 0.0:
            return _LatticeTail(asy.exact_lattice(model.kappa, 2.0, 0.5), 0, cap)
        if math.isinf(branch_ext):
            return _LatticeTail(asy.exact_lattice(0.0, 2.0, 0.5), 0, cap)
        return _LatticeTail(asy.ab_lattice(model, branch_ext), 0 if branch_ext > 0 else 1, cap)
    if kind == "susy":
        if branch_ext == 0.0:
            return _LatticeTail(asy.exact_lattice(model.c, math.sqrt(2.0), 0.5), 0, cap)
        if math.isinf(branch_ext):
            return _LatticeTail(asy.exact_lattice(0.0, math.sqrt(2.0), 0.5), 0, cap)
        return _LatticeTail(asy.susy_lattice(model, branch_ext), 0, cap)
    terms = max(1, min(4, int(cap // 2)))
    if kind == "interval":
        nu = model.nu
        if ext in md.distinguished(model):
            return _BesselTail(nu if math.isinf(ext) else -nu, 2.0, 0, terms)
        if nu == 0.0:
            ref = _bessel_reference(model, ext, sign, 0.0, 2.0, n0)
            return _CorrectedTail(model, ext, sign, _BesselTail(0.0, 2.0, ref.offset, terms), [])
        ref = _bessel_reference(model, ext, sign, -nu, 2.0, n0)
        return _CorrectedTail(model, ext, sign, _BesselTail(-nu, 2.0, ref.offset, terms),
                              _correction_weights(2.0 * nu))
    nu = model.nu
    if math.isinf(branch_ext):
        return _BesselTail(-nu, 1.0, 0, terms)
    if branch_ext == 0.0:
        return _BesselTail(nu, 1.0, 0, terms)
    order = nu if nu < 0.5 else -nu
    ref = _bessel_reference(model, ext, sign, order, 1.0, n0)
    return _CorrectedTail(model, ext, sign, _BesselTail(order, 1.0, ref.offset, terms),
                          _correction_weights(abs(1.0 - 2.0 * nu)))


def _tail_bound(tail, s, n0, actual):
    """Size of the neglected orders in ``sum_{n >= n0} |lam_n|**-s``."""
    if isinstance(tail, _CorrectedTail):
        return tail.bound(s, n0)
    if isinstance(tail, _LatticeTail) and tail.exact:
        return 0.0
    expo = tail.next_exponent(s)
    if isinstance(tail, _BesselTail):
        # measured against the exact zero; in units of n the decay is n**-expo
        r0 = abs(actual ** (-s) - tail.point(s, n0))
        base = n0 - tail.offset + tail.h
    else:
        r0 = abs(actual ** (-s) - tail.point(s, n0))
        base = n0 - tail.offset
    return 2.0 * r0 * (1.0 + base / (expo - 1.0))


def _check_order(tail, s):
    expo = tail.next_exponent(s)
    if not expo > 1.0 + 1e-9:
        raise InsufficientOrderError(
            f"s={s:g} lies outside the strip reached by the asymptotic series (needs more orders)")


def _head(model, ext, sign, n0):
    first = md.first_index(model, ext, sign)
    count = max(n0 - first, 0)
    if count == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    return _branch_values(model, ext, sign, count)


def _branch_zeta(model, ext, sign, s, n0, cap, continued):
    """``(head, negatives, tail, bound, terms)`` for ``sum_{lam>0} |lam|**-s`` on one branch."""
    tail = _tail(model, ext, sign, cap, n0)
    if continued:
        _check_order(tail, s)
    _, vals = _head(model, ext, sign, n0)
    mags = np.abs(vals)
    signed = isinstance(model, md.SIGNED_MODELS)
    if np.any(mags[~(vals == 0.0)] < 1e-300):
        raise EigenvalueProximityError("eigenvalue at the origin")
    if not signed and np.any(vals == 0.0):
        raise EigenvalueProximityError("zero eigenvalue: lam**-s is singular")
    pos = vals > 0 if not signed else (vals != 0.0)
    neg = vals < 0 if not signed else np.zeros(vals.shape, dtype=bool)
    head_terms = mags[pos] ** (-s)
    head = math.fsum(head_terms)
    negatives = tuple((float(m ** (-s)), float(-math.pi * s)) for m in mags[neg])
    _, nxt = _branch_values(model, ext, sign, 1, start=n0)
    tail_value = tail.images(s, n0)
    bound = _tail_bound(tail, s, n0, abs(float(nxt[0])))
    rounding = 8 * EPS * (math.fsum(np.abs(head_terms)) + 4 * abs(tail_value))
    return head, negatives, tail_value, bound + rounding, int(vals.size)


def _check_s(model, s, abscissa=None):
    s = float(s)
    if not math.isfinite(s):
        raise ParameterError(f"s must be finite, got {s}")
    s0 = ABSCISSA[model.kind] if abscissa is None else abscissa
    if not s > s0:
        raise DivergenceError(f"{model.kind}: sum converges only for s > {s0:g}, got s={s:g}")
    return s


def zeta_sum(model, ext, s, tol=1e-10, n0=None):
    """``sum_{lam_n > 0} lam_n**-s`` in the convergent half line ``s > s0``.

    Negative eigenvalues are reported in ``negative_part`` with phase
    ``-pi*s``.  For the signed models this is the positive-branch function.
    """
    ext = md.check_extension(model, ext)
    s, tol = _check_s(model, s), _check_tol(tol)
    sizes = (n0,) if n0 else (64, 256, 1024, 4096)
    best = None
    for size in sizes:
        head, negatives, tail, bound, used = _branch_zeta(model, ext, 1, s, size, 6.0, False)
        sample = SpectralSample(s, head + tail, bound, used, negatives)
        if bound <= tol:
            return sample
        best = sample
    if n0:
        return best
    raise InfeasibleToleranceError(f"zeta_sum: bound {best.bound:.3g} above tol {tol:g}")


def zeta_continued(model, ext, s, order=4, n0=64):
    """Analytic continuation of :func:`zeta_sum` by asymptotic subtraction.

    The tail from index ``n0`` is replaced by zeta images of the eigenvalue
    expansion truncated at weight ``order`` (powers of ``1/n``); the
    result is valid while the first neglected order still decays faster
    than ``1/n``, which bounds how far ``s`` may go.
    """
    ext = md.check_extension(model, ext)
    s = float(s)
    if not math.isfinite(s):
        raise ParameterError(f"s must be finite, got {s}")
    if not order > 0:
        raise ParameterError(f"order must be positive, got {order}")
    head, negatives, tail, bound, used = _branch_zeta(model, ext, 1, s, int(n0), float(order), True)
    return SpectralSample(s, head + tail, bound, used, negatives)


def eta(model, ext, s, tol=1e-10, n0=None):
    """Spectral asymmetry ``sum sign(lam) |lam|**-s`` for the first-order models.

    Computed as the positive branch of ``ext`` minus that of ``-ext``;
    terms are subtracted pairwise by rank before the tails are added.
    """
    if not isinstance(model, (md.DiracInterval, md.SusySupercharge)):
        raise ExtensionError(f"{model.kind}: eta is defined for the first-order models only")
    ext = md.check_extension(model, ext)
    s, tol = _check_s(model, s), _check_tol(tol)
    sizes = (n0,) if n0 else (64, 256, 1024, 4096)
    best = None
    for size in sizes:
        parts = []
        total_bound = 0.0
        used = 0
        heads = []
        for sign in (1, -1):
            first = md.first_index(model, ext, sign)
            idx, vals = _head(model, ext, sign, first + size)
            heads.append(np.abs(vals[vals != 0.0]) ** (-s))
            tail = _tail(model, ext, sign, 6.0, first + size)
            _, nxt = _branch_values(model, ext, sign, 1, start=first + size)
            parts.append(tail.images(s, first + size) * sign)
            total_bound += _tail_bound(tail, s, first + size, abs(float(nxt[0])))
            used += vals.size
        k = min(heads[0].size, heads[1].size)
        pair = heads[0][:k] - heads[1][:k]
        value = math.fsum(np.concatenate([pair, heads[0][k:], -heads[1][k:], parts]))
        total_bound += 8 * EPS * (math.fsum(heads[0]) + math.fsum(heads[1]))
        best = SpectralSample(s, value, total_bound, used)
        if total_bound <= tol:
            return best
    if n0:
        return best
    raise InfeasibleToleranceError(f"eta: bound {best.bound:.3g} above tol {tol:g}")


# -------------------------------------------------------------- resolvent

def resolvent_trace_sum(model, ext, z, tol=1e-10, n0=None):
    """Resolvent trace by summation over the spectrum.

    Interval model: ``sum 1/(lam_n - z)`` (negative modes included).
    Dirac model: ``sum 1/(lam_n - z)**2`` over both branches; ``z`` may be
    complex.  The tail is expanded geometrically in ``z/lam_n`` and each
    coefficient is a zeta tail.
    """
    ext = md.check_extension(model, ext)
    tol = _check_tol(tol)
    kind = model.kind
    if kind not in ("interval", "dirac"):
        raise DivergenceError(f"{kind}: resolvent sums over the spectrum do not converge")
    z = complex(z)
    if kind == "interval" and z.imag != 0.0:
        raise ParameterError("interval resolvent sums take a real spectral argument")
    power = 1 if kind == "interval" else 2
    size = n0 or 64
    while True:
        c, h, p = _growth(model)
        if c * max(size - h, 0.0) ** p > 2.0 * abs(z) + 1.0:
            break
        size *= 2
        if size > MAX_TERMS:
            raise InfeasibleToleranceError(f"resolvent sum at z={z} needs too many eigenvalues")
    total = []
    bound = 0.0
    used = 0
    for sign in _branches(model):
        first = md.first_index(model, ext, sign)
        idx, vals = _head(model, ext, sign, first + size)
        gap = np.min(np.abs(vals - z)) if vals.size else math.inf
        if gap < 1e-6:
            raise EigenvalueProximityError(f"z={z} is within {gap:.2e} of an eigenvalue")
        total.append((1.0 / (vals - z) ** power).astype(complex))
        used += vals.size
        start = first + size
        tail = _tail(model, ext, sign, 6.0, start)
        _, nxt = _branch_values(model, ext, sign, 1, start=start)
        lam_next = abs(float(nxt[0]))
        ratio = abs(z) / lam_next
        # sum_{n>=start} (lam - z)^-power, lam = sign*|lam|
        #  = sum_k binom(power+k-1, k) (sign*z)^k sign^power |lam|^-(power+k)
        k = 0
        terms = []
        while True:
            coef = math.comb(power + k - 1, k) * (sign * z) ** k * sign**power
            img = tail.images(power + k, start)
            terms.append(coef * img)
            bound += abs(coef) * _tail_bound(tail, power + k, start, lam_next)
            remainder = (math.comb(power + k, k + 1) * abs(z) ** (k + 1)
                         * abs(tail.images(power + k + 1, start)) / (1.0 - ratio) ** (power + 1))
            k += 1
            if remainder < tol / 4 or k > 200:
                bound += remainder
                break
        total.append(np.array(terms, dtype=complex))
    flat = np.concatenate(total)
    value = complex(math.fsum(flat.real), math.fsum(flat.imag))
    bound += 8 * EPS * float(np.sum(np.abs(flat)))
    if abs(value.imag) <= 1e-15 * max(1.0, abs(value.real)):
        value = value.real
    arg = z.real if z.imag == 0.0 else z
    return SpectralSample(arg, value, bound, used)


# ------------------------------------------------------ graded partition

def _susy_boundary(alpha, lam):
    """``(A, B)`` with ``phi_1 ~ A x**alpha`` and ``phi_2 ~ B x**-alpha`` at the origin, and derivatives."""
    u = 0.5 * (1.0 - lam * lam) - alpha
    v = 1.0 - 0.5 * lam * lam
    ga, gb = sf.gamma_ratio(0.5 - alpha, 1.0), sf.gamma_ratio(0.5 + alpha, 1.0)
    a = ga * sf.rgamma(u)
    da = ga * sf.rgamma_deriv(u) * (-lam)
    b = -lam / math.sqrt(2.0) * gb * sf.rgamma(v)
    db = -gb / math.sqrt(2.0) * (sf.rgamma(v) - lam * lam * sf.rgamma_deriv(v))
    return a, da, b, db


def susy_norm_closed(alpha, lam):
    """``||Phi_lam||**2`` from the boundary form of the supercharge.

    Both components decay at infinity for every ``lam``, so
    ``(lam - mu)(Phi_lam, Phi_mu)`` reduces to the boundary term at the
    origin, ``(A_lam B_mu - B_lam A_mu)/sqrt(2)``; dividing by
    ``lam - mu`` and letting ``mu -> lam`` gives ``(A'B - AB')/sqrt(2)``.
    """
    a, da, b, db = _susy_boundary(alpha, lam)
    return (da * b - a * db) / math.sqrt(2.0)


def susy_norm_quadrature(alpha, lam, rtol=1e-10):
    """``||Phi_lam||**2`` by adaptive quadrature of the Kummer-form components.

    With ``z = x**2`` the squared components are
    ``z**(b-1) U(a,b,z)**2 e**-z / 2`` and
    ``lam**2 z**b U(a+1,b+1,z)**2 e**-z / 4``, ``a = -lam**2/2``,
    ``b = alpha + 1/2``.
    """
    a, b = -0.5 * lam * lam, alpha + 0.5

    def f1(z):
        return 0.5 * z ** (b - 1.0) * math.exp(-z) * sf.kummer("U", a, b, z) ** 2

    def f2(z):
        return 0.25 * lam * lam * z**b * math.exp(-z) * sf.kummer("U", a + 1.0, b + 1.0, z) ** 2

    # on (0, 1) substitute z = w**(1/p) to absorb the z**(p-1) endpoint singularity
    def head(f, p):
        return integrate.quad(lambda w: f(w ** (1.0 / p)) * w ** (1.0 / p - 1.0) / p,
                              0.0, 1.0, **opts)[0]

    opts = dict(epsabs=0.0, epsrel=rtol, limit=400, full_output=1)
    # both integrands are bounded by z**k e**-z; stop once that is e**60 below its peak
    k = 2.0 * abs(a) + b + 1.0
    turn = max(4.0, k + 3.0)
    end = 2.0 * turn + 40.0
    while k * math.log(end) - end > k * math.log(k) - k - 60.0:
        end *= 1.5
    edges = [1.0, turn, 2.0 * turn + 40.0, end]
    parts = []
    for f, p in ((f1, b), (f2, 1.0 - b)):
        pieces = [head(f, p)]
        pieces += [integrate.quad(f, lo, hi, **opts)[0] for lo, hi in zip(edges, edges[1:])]
        parts.append(math.fsum(pieces))
    return parts[0] + parts[1], parts[0], parts[1]


def susy_grading(alpha, lam):
    """``(Phi, (-1)**F Phi)`` from the boundary value ``-[phi_1 phi_2](0+)/(sqrt(2) lam)``."""
    g = (0.5 * sf.gamma_ratio(0.5 + alpha, 1.0) * sf.gamma_ratio(0.5 - alpha, 1.0)
         * sf.rgamma(1.0 - 0.5 * lam * lam) * sf.rgamma(0.5 * (1.0 - lam * lam) - alpha))
    return g


def graded_partition(alpha, beta, t, tol=1e-10, norms="closed"):
    """Graded partition function ``Tr (-1)**F exp(-t H)`` of the supercharge extension.

    Each nonzero eigenvalue contributes
    ``exp(-t lam**2) (||phi_1||**2 - ||phi_2||**2)/||Phi||**2``, a number in
    ``[-1, 1]``; the zero mode (present only for ``beta = -infinity``)
    contributes 1.  ``norms="quadrature"`` evaluates the norms by adaptive
    quadrature instead of the boundary form.
    """
    model = md.SusySupercharge(alpha)
    beta = md.check_extension(model, beta)
    t, tol = _check_t(t), _check_tol(tol)
    if norms not in ("closed", "quadrature"):
        raise ParameterError(f"unknown norm method {norms!r}")
    n_cut = 1
    while 2.0 * math.exp(-2.0 * t * n_cut) / -math.expm1(-2.0 * t) > tol:
        n_cut += 1
        if n_cut > MAX_TERMS:
            raise InfeasibleToleranceError("graded partition: tolerance not reachable")
    bound = 2.0 * math.exp(-2.0 * t * n_cut) / -math.expm1(-2.0 * t)
    terms = []
    zero_mode = 0
    for sign in (1, -1):
        first = md.first_index(model, beta, sign)
        _, vals = _branch_values(model, beta, sign, max(n_cut - first, 0))
        for lam in vals:
            if lam == 0.0:
                zero_mode += 1
                continue
            weight = math.exp(-t * lam * lam)
            grade = susy_grading(alpha, lam)
            if norms == "closed":
                norm = susy_norm_closed(alpha, lam)
            else:
                norm = susy_norm_quadrature(alpha, lam)[0]
            if not norm > 0:
                raise NumericalError(f"non-positive eigenfunction norm at lam={lam}")
            terms.append(weight * grade / norm)
    value = math.fsum(terms) + zero_mode
    return SpectralSample(t, value, bound + 8 * EPS * len(terms), len(terms) + zero_mode)
