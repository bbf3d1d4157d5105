"""Operator models, their spectral conditions and closed-form traces.

Five one-parameter families of self-adjoint extensions are covered:

* :class:`OscillatorHalfLine`: inverse-square plus harmonic potential on
  the half line, extension parameter ``theta``;
* :class:`InverseSquareInterval`: inverse-square potential on (0, 1) with
  Dirichlet data at 1, parameter ``theta``;
* :class:`DiracInterval`: first-order operator on (0, 1), parameter ``beta``;
* :class:`AharonovBohmL0`: zero angular-momentum channel of a Dirac
  operator in a flux tube plus magnetic field, parameter ``beta``;
* :class:`SusySupercharge`: supercharge of a singular oscillator,
  parameter ``beta`` (``beta = -sqrt(pi) cot(gamma) / Gamma(1 - alpha)``).

Extension parameters are plain floats, with ``math.inf`` for the
Dirichlet-type member of each family.  Every spectral condition is
evaluated in an entire form whose zeros are exactly the eigenvalues;
large arguments use a positively rescaled version of the same function so
that nothing overflows.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sc

from . import specfun as sf
from .errors import (EigenvalueProximityError, ExtensionError, ParameterError,
                     PoleError)

_REFLECT_AT = 20.0
_HIGH_SCALE = math.gamma(_REFLECT_AT) / math.pi


# ---------------------------------------------------------------- models

@dataclass(frozen=True)
class OscillatorHalfLine:
    """``-d^2/dx^2 + (nu^2 - 1/4)/x^2 + x^2`` on the half line."""

    nu: float
    kind: str = field(default="oscillator", init=False, repr=False)

    def __post_init__(self):
        if not 0.0 < self.nu < 1.0:
            raise ParameterError(f"oscillator: nu must lie in (0, 1), got {self.nu}")

    @property
    def a(self):
        return 0.5 * (1.0 - self.nu)

    @property
    def b(self):
        return 0.5 * (1.0 + self.nu)

    @property
    def g(self):
        """Gamma(nu)/Gamma(-nu), always negative."""
        return -sf.gamma_ratio(1.0 + self.nu, 1.0 - self.nu)


@dataclass(frozen=True)
class InverseSquareInterval:
    """``-d^2/dx^2 + (nu^2 - 1/4)/x^2`` on (0, 1), Dirichlet at 1."""

    nu: float
    kind: str = field(default="interval", init=False, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.nu < 1.0:
            raise ParameterError(f"interval: nu must lie in [0, 1), got {self.nu}")

    @property
    def coupling(self):
        """``4**nu * Gamma(nu)/Gamma(-nu)``; multiplies theta in the condition."""
        if self.nu == 0.0:
            raise ExtensionError("interval: the nu=0 case has no power-law coupling")
        return -(4.0 ** self.nu) * sf.gamma_ratio(1.0 + self.nu, 1.0 - self.nu)


@dataclass(frozen=True)
class DiracInterval:
    """``-i sigma d/dx + alpha/x`` type operator on (0, 1), with nu = 1/2 - alpha."""

    alpha: float
    kind: str = field(default="dirac", init=False, repr=False)

    def __post_init__(self):
        if not -0.5 < self.alpha < 0.5:
            raise ParameterError(f"dirac: alpha must satisfy |alpha| < 1/2, got {self.alpha}")

    @classmethod
    def from_nu(cls, nu):
        return cls(0.5 - nu)

    @property
    def nu(self):
        return 0.5 - self.alpha


@dataclass(frozen=True)
class AharonovBohmL0:
    """Zero-mode channel of the Aharonov-Bohm Dirac operator, flux fraction kappa."""

    kappa: float
    kind: str = field(default="ab", init=False, repr=False)

    def __post_init__(self):
        if not 0.0 < self.kappa < 0.5:
            raise ParameterError(f"ab: kappa must lie in (0, 1/2), got {self.kappa}")


@dataclass(frozen=True)
class SusySupercharge:
    """Supercharge ``Q = A + A^dagger`` with ``A = -d/dx + alpha/x + x``."""

    alpha: float
    kind: str = field(default="susy", init=False, repr=False)

    def __post_init__(self):
        if not -0.5 < self.alpha < 0.5:
            raise ParameterError(f"susy: alpha must satisfy |alpha| < 1/2, got {self.alpha}")

    @property
    def c(self):
        return 0.5 - self.alpha


MODEL_TYPES = (OscillatorHalfLine, InverseSquareInterval, DiracInterval,
               AharonovBohmL0, SusySupercharge)
SIGNED_MODELS = (DiracInterval, AharonovBohmL0, SusySupercharge)


@dataclass(frozen=True)
class SpectralBracket:
    """Open interval holding exactly one eigenvalue."""

    lo: float
    hi: float
    index: int


def susy_beta(alpha, gamma):
    """Extension parameter ``beta`` for the boundary angle ``gamma``."""
    turns = gamma / math.pi
    s = sf.sinpi(turns)
    if s == 0.0:
        return -math.inf
    return -math.sqrt(math.pi) * sf.cospi(turns) / s * sc.rgamma(1.0 - alpha) + 0.0  # no -0.0


def _check_model(model):
    if not isinstance(model, MODEL_TYPES):
        raise ExtensionError(f"unknown model {model!r}")


def check_extension(model, ext):
    """Validate and normalise an extension parameter."""
    _check_model(model)
    ext = float(ext)
    if math.isnan(ext):
        raise ExtensionError("extension parameter must not be NaN")
    if math.isinf(ext):
        return math.inf
    return ext


def distinguished(model):
    """Extension values with closed-form spectra."""
    _check_model(model)
    if isinstance(model, InverseSquareInterval) and model.nu == 0.0:
        return (math.inf,)
    return (0.0, math.inf)


def is_distinguished(model, ext):
    return check_extension(model, ext) in distinguished(model)


# ------------------------------------------------------------- residuals

def _shift_ratio(u, d):
    """``Gamma(u + d) / Gamma(u)`` for positive arguments."""
    return np.exp(sf.log_gamma_shift(u, d))


def _oscillator_residual(model, theta, lam):
    a, b = model.a, model.b
    x = lam / 4.0
    out = np.empty_like(x)
    inf = math.isinf(theta)
    gt = 0.0 if inf else model.g * theta
    low = x < 0.0
    mid = (x >= 0.0) & (x <= _REFLECT_AT)
    high = x > _REFLECT_AT
    # the rescaled branches carry constants that make them meet the
    # plain form at x = 0 and x = _REFLECT_AT
    if low.any():  # times Gamma(b - x)/Gamma(b) > 0
        xl = x[low]
        body = _shift_ratio(a - xl, model.nu) * (0.0 if inf else 1.0) - (-1.0 if inf else gt)
        out[low] = body * sc.rgamma(b)
    if mid.any():
        xm = x[mid]
        out[mid] = sc.rgamma(b - xm) if inf else sc.rgamma(a - xm) - gt * sc.rgamma(b - xm)
    if high.any():  # times Gamma(_REFLECT_AT + a)/Gamma(x + a) > 0
        xh = x[high]
        if inf:
            body = sf.sinpi(b - xh)
        else:
            body = _shift_ratio(xh + a, model.nu) * sf.sinpi(a - xh) - gt * sf.sinpi(b - xh)
        out[high] = body * (sc.gamma(_REFLECT_AT + a) / math.pi)
    return out


def _interval_nu0_residual(theta, lam):
    w = lam
    out = np.empty_like(w)
    inf = math.isinf(theta)
    pos, neg, zero = w > 0, w < 0, w == 0
    if pos.any():
        mu = np.sqrt(w[pos])
        if inf:
            out[pos] = sc.j0(mu)
        else:
            out[pos] = ((theta - np.log(0.5 * mu) - sf.EULER_GAMMA) * sc.j0(mu)
                        + 0.5 * np.pi * sc.y0(mu))
    if neg.any():  # multiplied by exp(-y)
        y = np.sqrt(-w[neg])
        if inf:
            out[neg] = sc.i0e(y)
        else:
            out[neg] = ((theta - np.log(0.5 * y) - sf.EULER_GAMMA) * sc.i0e(y)
                        - sc.k0e(y) * np.exp(-2.0 * y))
    out[zero] = 1.0 if inf else theta
    return out


def _interval_residual(model, theta, lam):
    if model.nu == 0.0:
        return _interval_nu0_residual(theta, lam)
    nu = model.nu
    if math.isinf(theta):
        return sf.bessel_entire(nu, lam)
    return sf.bessel_entire(-nu, lam) - model.coupling * theta * sf.bessel_entire(nu, lam)


def _dirac_residual(model, beta, lam):
    nu = model.nu
    w = lam * lam
    if math.isinf(beta):
        return sf.bessel_entire(-nu, w)
    return lam * sf.bessel_entire(nu, w) - beta * sf.bessel_entire(-nu, w)


def _gamma_pair_residual(shift, half, scale, beta, lam):
    """Entire residual ``1/Gamma(shift - x) + beta*lam*scale/Gamma(1 - x)``.

    Here ``x = half * lam**2``.  The AB model uses ``shift = kappa``,
    ``half = 1/4`` and ``scale = -1/4``; the supercharge uses
    ``shift = 1/2 - alpha``, ``half = 1/2`` and ``scale = 1/2``.
    """
    x = half * lam * lam
    out = np.empty_like(x)
    inf = math.isinf(beta)
    coef = scale * lam * (1.0 if inf else beta)
    low = x <= _REFLECT_AT
    high = ~low
    if low.any():
        first = 0.0 if inf else sc.rgamma(shift - x[low])
        out[low] = first + coef[low] * sc.rgamma(1.0 - x[low])
    if high.any():  # times Gamma(_REFLECT_AT)/Gamma(x) > 0
        xh = x[high]
        first = 0.0 if inf else _shift_ratio(xh, 1.0 - shift) * sf.sinpi(shift - xh)
        out[high] = (first + coef[high] * sf.sinpi(xh)) * _HIGH_SCALE
    return out


def _ab_residual(model, beta, lam):
    return _gamma_pair_residual(model.kappa, 0.25, -0.25, beta, lam)


def _susy_residual(model, beta, lam):
    return _gamma_pair_residual(model.c, 0.5, 0.5, beta, lam)


_RESIDUALS = {
    "oscillator": _oscillator_residual,
    "interval": _interval_residual,
    "dirac": _dirac_residual,
    "ab": _ab_residual,
    "susy": _susy_residual,
}


def spectral_function(model, lam):
    """Left-hand side ``F(lam)`` of the spectral condition ``F(lam) = rhs(ext)``.

    The right-hand sides are ``g*theta`` (oscillator), ``4**nu*g*theta``
    (interval, ``nu > 0``), ``-theta`` (interval, ``nu = 0``) and ``beta``
    for the signed models.  Poles of ``F`` are the eigenvalues of the
    Dirichlet-type extension.
    """
    _check_model(model)
    lam = np.asarray(lam, dtype=float)
    kind = model.kind
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind == "oscillator":
            x = lam / 4.0
            out = sc.gamma(model.b - x) * sc.rgamma(model.a - x)
        elif kind == "interval":
            if model.nu == 0.0:
                out = _interval_nu0_residual(0.0, lam) / _interval_nu0_residual(math.inf, lam)
            else:
                out = sf.bessel_entire(-model.nu, lam) / sf.bessel_entire(model.nu, lam)
        elif kind == "dirac":
            w = lam * lam
            out = lam * sf.bessel_entire(model.nu, w) / sf.bessel_entire(-model.nu, w)
        elif kind == "ab":
            x = lam * lam / 4.0
            out = -lam * sc.gamma(-x) * sc.rgamma(model.kappa - x)
        else:
            y = lam * lam / 2.0
            out = lam * sc.gamma(-y) * sc.rgamma(model.c - y)
    return out if out.ndim else float(out)


def _rhs(model, ext):
    kind = model.kind
    if kind == "oscillator":
        return model.g * ext
    if kind == "interval":
        return -ext if model.nu == 0.0 else model.coupling * ext
    return ext


def spectral_residual(model, ext, lam, form="entire"):
    """Residual of the spectral condition at ``lam``.

    ``form="entire"`` (default) evaluates a pole-free function whose zeros
    are exactly the eigenvalues, rescaled by a positive factor where the
    raw entire function would overflow.  ``form="ratio"`` returns
    ``spectral_function(lam) - rhs(ext)``, which has poles.
    """
    ext = check_extension(model, ext)
    arr = np.asarray(lam, dtype=float)
    if form == "ratio":
        if math.isinf(ext):
            raise ExtensionError("ratio form is undefined for an infinite extension")
        out = np.asarray(spectral_function(model, arr)) - _rhs(model, ext)
    elif form == "entire":
        out = _RESIDUALS[model.kind](model, ext, np.atleast_1d(arr).astype(float))
        out = out.reshape(arr.shape)
    else:
        raise ParameterError(f"unknown residual form {form!r}")
    return out if out.ndim else float(out)


# ---------------------------------------------------------- closed forms

def closed_form_eigenvalue(model, ext, n, sign=1):
    """Eigenvalue of a distinguished extension.

    Index conventions: oscillator ``n >= 0``; interval ``n >= 1``; for the
    signed models ``n = 0`` is the zero mode when one exists and
    ``sign`` picks the branch.
    """
    ext = check_extension(model, ext)
    if ext not in distinguished(model):
        raise ExtensionError(f"{model.kind}: extension {ext} is not distinguished")
    n = int(n)
    sign = 1 if sign >= 0 else -1
    kind = model.kind
    if kind == "oscillator":
        _need(n >= 0, n)
        return 4.0 * (n + (model.a if ext == 0.0 else model.b))
    if kind == "interval":
        _need(n >= 1, n)
        order = model.nu if math.isinf(ext) else -model.nu
        return sf.bessel_j_zero(order, n) ** 2
    if kind == "dirac":
        if ext == 0.0:
            _need(n >= 0, n)
            return 0.0 if n == 0 else sign * sf.bessel_j_zero(model.nu, n)
        _need(n >= 1, n)
        return sign * sf.bessel_j_zero(-model.nu, n)
    if kind == "ab":
        if ext == 0.0:
            _need(n >= 0, n)
            return sign * 2.0 * math.sqrt(n + model.kappa)
        _need(n >= 0, n)
        return sign * 2.0 * math.sqrt(n)
    # supercharge: beta = 0 is gamma = pi/2, beta = inf is gamma = 0
    _need(n >= 0, n)
    if ext == 0.0:
        return sign * math.sqrt(2 * n + 1 - 2 * model.alpha)
    return sign * math.sqrt(2 * n)


def _need(ok, n):
    if not ok:
        raise ParameterError(f"eigenvalue index {n} out of range")


def ab_channel_eigenvalue(kappa, l, n, sign=1):
    """Eigenvalue of the AB Dirac operator in channel ``l != 0``."""
    AharonovBohmL0(kappa)
    sign = 1 if sign >= 0 else -1
    if l > 0:
        _need(n >= 1, n)
        return sign * 2.0 * math.sqrt(n)
    if l < 0:
        _need(n >= 0, n)
        return sign * 2.0 * math.sqrt(n + abs(l) + kappa)
    raise ParameterError("channel l=0 depends on the extension; use closed_form_eigenvalue")


# -------------------------------------------------------------- brackets

def _doubling_lower(func, start=-1.0, limit=1e300):
    lo = start
    while True:
        f = func(lo)
        if f > 0:
            break
        lo *= 2.0
        if lo < -limit or math.isnan(f):
            raise PoleError("negative eigenvalue search escaped to -infinity")
    return lo


def negative_mode_condition(model, ext):
    """Bracket of the negative eigenvalue, or ``None`` if there is none."""
    ext = check_extension(model, ext)
    if model.kind == "oscillator":
        if math.isinf(ext) or ext >= 0.0:
            return None
        threshold = -(sf.gamma_ratio(1.0 - model.nu, 1.0 + model.nu)
                      * sf.gamma_ratio(model.b, model.a))
        if not ext < threshold:
            return None
        lo = _doubling_lower(lambda t: spectral_residual(model, ext, t), start=-4.0)
        return SpectralBracket(lo, 0.0, 0)
    if model.kind == "interval":
        if math.isinf(ext):
            return None
        if model.nu == 0.0:
            if not ext > 0.0:
                return None
        elif not ext < -1.0:
            return None
        lo = _doubling_lower(lambda t: -spectral_residual(model, ext, t)
                             if model.nu == 0.0 else spectral_residual(model, ext, t))
        return SpectralBracket(lo, 0.0, 1)
    raise ExtensionError(f"{model.kind}: negative modes are defined for Schrodinger models only")


def first_index(model, ext, sign=1):
    """Smallest eigenvalue index on the given branch."""
    ext = check_extension(model, ext)
    kind = model.kind
    if kind == "oscillator":
        return 0
    if kind == "interval":
        return 1
    neg = sign < 0
    if kind == "dirac":
        if math.isinf(ext):
            return 1
        if ext == 0.0:
            return 1 if neg else 0
    elif math.isinf(ext):
        # the zero mode is listed once, on the positive branch
        return 1 if neg else 0
    elif ext == 0.0:
        return 0
    beta = -ext if neg else ext
    if kind in ("dirac", "ab"):
        return 0 if beta > 0 else 1
    return 0


def bracket_arrays(model, ext, n, sign=1):
    """Brackets ``(lo, hi)`` for an array of indices on one branch.

    Each bracket contains exactly one eigenvalue.  Degenerate brackets
    (``lo == hi``) mark an eigenvalue known exactly.  For the signed models
    the negative branch is the mirror image of the positive branch of the
    extension ``-ext``.  Distinguished extensions get brackets from the
    interlacing lattice of the complementary family, so their closed forms
    can be reproduced by root finding.
    """
    ext = check_extension(model, ext)
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    if n.size and n.min() < first_index(model, ext, sign):
        raise ParameterError(f"{model.kind}: index {int(n.min())} below the first bracket")
    kind = model.kind
    if ext in distinguished(model):
        if kind in ("dirac", "ab", "susy") and sign < 0:
            lo, hi = _closed_brackets(model, ext, n)
            return -hi, -lo
        return _closed_brackets(model, ext, n)
    if kind in ("dirac", "ab", "susy") and sign < 0:
        lo, hi = bracket_arrays(model, -ext, n, 1)
        return -hi, -lo
    if kind == "oscillator":
        return _oscillator_brackets(model, ext, n)
    if kind == "interval":
        return _interval_brackets(model, ext, n)
    if kind == "dirac":
        return _dirac_brackets(model, ext, n)
    if kind == "ab":
        k = model.kappa
        if ext > 0:
            xl, xh = np.where(n == 0, 0.0, n), n + k
        else:
            xl, xh = n - 1 + k, n.astype(float)
        return 2.0 * np.sqrt(xl), 2.0 * np.sqrt(xh)
    c = model.c
    if ext > 0:
        yl, yh = n + c, n + 1.0
    else:
        yl, yh = n.astype(float), n + c
    return np.sqrt(2.0 * yl), np.sqrt(2.0 * yh)


def _zeros_from(order, k):
    """``j_{order,k}`` with ``j_{order,0} = 0``."""
    out = np.zeros(k.shape)
    pos = k > 0
    if pos.any():
        out[pos] = sf.bessel_j_zeros(order, k[pos])
    return out


def _closed_brackets(model, ext, n):
    kind = model.kind
    inf = math.isinf(ext)
    if kind == "oscillator":
        x0 = n + (model.a if inf else model.b - 1.0)
        return 4.0 * x0, 4.0 * (x0 + 1.0)
    if kind == "interval":
        if model.nu == 0.0:
            return _zeros_from(1.0, n - 1) ** 2, _zeros_from(1.0, n) ** 2
        if inf:
            return sf.bessel_j_zeros(-model.nu, n) ** 2, sf.bessel_j_zeros(-model.nu, n + 1) ** 2
        return _zeros_from(model.nu, n - 1) ** 2, sf.bessel_j_zeros(model.nu, n) ** 2
    if kind == "dirac":
        if inf:
            return _zeros_from(model.nu, n - 1), sf.bessel_j_zeros(model.nu, n)
        lo, hi = np.zeros(n.shape), np.zeros(n.shape)
        pos = n > 0
        if pos.any():
            lo[pos] = sf.bessel_j_zeros(-model.nu, n[pos])
            hi[pos] = sf.bessel_j_zeros(-model.nu, n[pos] + 1)
        return lo, hi
    shift, half = (model.kappa, 4.0) if kind == "ab" else (model.c, 2.0)
    if inf:
        xl = np.where(n == 0, 0.0, n - 1.0 + shift)
        xh = np.where(n == 0, 0.0, n + shift)
    else:
        xl, xh = n.astype(float), n + 1.0
    return np.sqrt(half * xl), np.sqrt(half * xh)


def _oscillator_brackets(model, theta, n):
    a, b = model.a, model.b
    if theta > 0:
        xl, xh = n + a, n + b
    else:
        xl, xh = n + b - 1.0, n + a
    lo, hi = 4.0 * xl.astype(float), 4.0 * xh.astype(float)
    if theta < 0 and (n == 0).any():
        lo[n == 0] = _doubling_lower(lambda t: spectral_residual(model, theta, t), start=-4.0)
    return lo, hi


def _interval_brackets(model, theta, n):
    nu = model.nu
    if nu == 0.0:
        prev = np.zeros(n.shape)
        later = n > 1
        if later.any():
            prev[later] = sf.bessel_j_zeros(0.0, n[later] - 1) ** 2
        lo, hi = prev, sf.bessel_j_zeros(0.0, n) ** 2
        first = n == 1
        if first.any():
            if theta == 0.0:
                lo[first] = hi[first] = 0.0
            elif theta > 0.0:
                lo[first] = _doubling_lower(lambda t: -spectral_residual(model, theta, t))
                hi[first] = 0.0
        return lo, hi
    if theta > 0:
        lo = sf.bessel_j_zeros(-nu, n) ** 2
        hi = sf.bessel_j_zeros(nu, n) ** 2
        return lo, hi
    hi = sf.bessel_j_zeros(-nu, n) ** 2
    lo = np.zeros(n.shape)
    later = n > 1
    if later.any():
        lo[later] = sf.bessel_j_zeros(nu, n[later] - 1) ** 2
    first = n == 1
    if first.any():
        if theta == -1.0:
            lo[first] = hi[first] = 0.0
        elif theta < -1.0:
            lo[first] = _doubling_lower(lambda t: spectral_residual(model, theta, t))
            hi[first] = 0.0
    return lo, hi


def _dirac_brackets(model, beta, n):
    nu = model.nu
    lo = np.zeros(n.shape)
    hi = np.zeros(n.shape)
    if beta > 0:
        pos = n > 0
        if pos.any():
            lo[pos] = sf.bessel_j_zeros(nu, n[pos])
        hi[:] = sf.bessel_j_zeros(-nu, n + 1)
    else:
        lo[:] = sf.bessel_j_zeros(-nu, n)
        hi[:] = sf.bessel_j_zeros(nu, n)
    return lo, hi


# ---------------------------------------------------------------- traces

def _phi(order, w):
    return sf.bessel_entire(order, w)


def krein_factor(model, lam, theta):
    """Krein factor ``K(lam)`` and ``tau = 1/(1 + theta*K)``.

    ``K = 4**nu Gamma(1+nu)/Gamma(1-nu) * (J_nu/J_-nu)(mu) * mu**(-2nu)``
    with ``lam = mu**2``; for ``lam < 0`` the same expression is evaluated
    through modified Bessel functions and is positive.
    """
    if not isinstance(model, InverseSquareInterval) or model.nu == 0.0:
        raise ExtensionError("krein_factor is defined for the interval model with nu > 0")
    theta = float(theta)
    nu = model.nu
    den = _phi(-nu, lam)
    num = _phi(nu, lam)
    if den == 0.0 or abs(den) < 1e-14 * abs(num):
        raise PoleError(f"krein_factor: lam={lam} is a zero of J_-nu")
    k = -model.coupling * num / den
    if math.isinf(theta):
        return k, 0.0
    denom = 1.0 + theta * k
    if denom == 0.0:
        raise PoleError(f"krein_factor: tau has a pole at lam={lam}")
    return k, 1.0 / denom


def _proximity(value, slope, lam):
    if slope != 0.0 and abs(value / slope) < 1e-8 * max(1.0, abs(lam)):
        raise EigenvalueProximityError(f"argument {lam} lies within 1e-8 of an eigenvalue")


def resolvent_trace_closed(model, ext, lam, axis="real"):
    """Closed-form resolvent trace.

    Interval model: ``Tr (A - lam)^-1`` for real ``lam`` (negative values
    correspond to imaginary ``mu``).  Dirac model: the squared resolvent
    ``Tr (D - lam)^-2``, since the first power is not trace class; pass
    ``axis="imag"`` to evaluate at ``i*lam``.  For the oscillator only
    differences exist, see :func:`resolvent_trace_diff_closed`.
    """
    ext = check_extension(model, ext)
    if model.kind == "interval":
        if axis != "real":
            raise ParameterError("interval traces take a real spectral argument")
        return _interval_trace(model, ext, float(lam))
    if model.kind == "dirac":
        if axis not in ("real", "imag"):
            raise ParameterError(f"unknown axis {axis!r}")
        return _dirac_squared_trace(model, ext, float(lam), axis)
    if model.kind == "oscillator":
        raise ExtensionError("oscillator: single resolvent traces diverge; use differences")
    raise ExtensionError(f"{model.kind}: no closed-form resolvent trace")


def _interval_trace(model, theta, lam):
    nu = model.nu
    if nu == 0.0:
        return _interval_trace_nu0(theta, lam)
    p_nu, p_mnu = _phi(nu, lam), _phi(-nu, lam)
    t_inf = _phi(nu + 1.0, lam) / (2.0 * p_nu)
    t_zero = _phi(1.0 - nu, lam) / (2.0 * p_mnu)
    if math.isinf(theta):
        _proximity(p_nu, -0.5 * _phi(nu + 1.0, lam), lam)
        return t_inf
    r = spectral_residual(model, theta, lam)
    _proximity(r, -0.5 * (_phi(1.0 - nu, lam) - model.coupling * theta * _phi(nu + 1.0, lam)), lam)
    if theta == 0.0:
        return t_zero
    _, tau = krein_factor(model, lam, theta)
    return (1.0 - tau) * t_inf + tau * t_zero


def _interval_trace_nu0(theta, lam):
    if lam > 0:
        mu = math.sqrt(lam)
        j0, j1, y0, y1 = sc.j0(mu), sc.j1(mu), sc.y0(mu), sc.y1(mu)
        if math.isinf(theta):
            _proximity(j0, -j1 / (2 * mu), lam)
            return j1 / (2.0 * mu * j0)
        c = theta - math.log(0.5 * mu) - sf.EULER_GAMMA
        r = c * j0 + 0.5 * math.pi * y0
        num = c * j1 + 0.5 * math.pi * y1 + j0 / mu
        _proximity(r, -num / (2 * mu), lam)
        return num / (2.0 * mu * r)
    if lam < 0:
        y = math.sqrt(-lam)
        i0, i1 = sc.i0e(y), sc.i1e(y)
        k0, k1 = sc.k0e(y) * math.exp(-2 * y), sc.k1e(y) * math.exp(-2 * y)
        if math.isinf(theta):
            return -i1 / (2.0 * y * i0)
        c = theta - math.log(0.5 * y) - sf.EULER_GAMMA
        r = c * i0 - k0
        num = c * i1 - i0 / y + k1
        _proximity(r, num / (2 * y), lam)
        return num / (2.0 * y * r)
    raise ParameterError("interval nu=0 trace is not evaluated at lam=0")


def _dirac_squared_trace(model, beta, lam, axis):
    nu = model.nu
    if axis == "imag":
        z, w = 1j * lam, -lam * lam
    else:
        z, w = lam, lam * lam
    e1, e1p, e1pp = _phi(nu, w), -0.5 * _phi(nu + 1, w), 0.25 * _phi(nu + 2, w)
    e2, e2p, e2pp = _phi(-nu, w), -0.5 * _phi(1 - nu, w), 0.25 * _phi(2 - nu, w)
    l2 = e2p / e2
    base = -2.0 * l2 - 4.0 * w * (e2pp / e2 - l2 * l2)
    if math.isinf(beta):
        _proximity(e2, 2 * lam * e2p, lam)
        return _real_if_close(base)
    q = e1 / e2
    qp = (e1p * e2 - e1 * e2p) / e2**2
    qpp = (e1pp * e2 - e1 * e2pp) / e2**2 - 2.0 * e2p * qp / e2
    r = z * q
    rp = q + 2.0 * w * qp
    rpp = 6.0 * z * qp + 4.0 * z * w * qpp
    d = r - beta
    if axis == "real":
        _proximity(d, rp, lam)
    return _real_if_close(base - (rpp * d - rp * rp) / (d * d))


def _real_if_close(value):
    value = complex(value)
    if abs(value.imag) <= 1e-15 * max(1.0, abs(value.real)):
        return value.real
    return value


def resolvent_trace_diff_closed(model, ext_a, ext_b, z):
    """``Tr[(A^a + z)^-1 - (A^b + z)^-1]`` for the oscillator.

    Built from the logarithmic derivative of the Gamma-function spectral
    condition; for ``a = 0`` and ``b = inf`` it reduces to a digamma
    difference.
    """
    if not isinstance(model, OscillatorHalfLine):
        raise ExtensionError("resolvent_trace_diff_closed: oscillator only")
    x = -float(z) / 4.0
    a, b, g = model.a, model.b, model.g
    try:
        rho = sf.gamma_ratio(b - x, a - x)
        dpsi = sf.digamma(a - x) - sf.digamma(b - x)
    except PoleError:
        raise EigenvalueProximityError(f"-z={-z} is an eigenvalue") from None

    def shifted(theta):
        theta = check_extension(model, theta)
        if math.isinf(theta):
            return 0.0
        den = rho - g * theta
        if den == 0.0:
            raise EigenvalueProximityError(f"-z={-z} is an eigenvalue")
        return -0.25 * rho * dpsi / den

    return shifted(ext_a) - shifted(ext_b)


def graded_heat_closed_ab(kappa, t):
    """``-exp(-2 kappa t) sinh(2 kappa t) / sinh(2 t)**2``."""
    AharonovBohmL0(kappa)
    t = float(t)
    if not t > 0:
        raise ParameterError(f"graded heat: t must be positive, got {t}")
    return 2.0 * math.expm1(-4.0 * kappa * t) * math.exp(-4.0 * t) / math.expm1(-4.0 * t) ** 2
