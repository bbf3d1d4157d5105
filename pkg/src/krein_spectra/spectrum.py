"""Eigenvalue enumeration by bracketed root finding.

Every eigenvalue sits alone in a bracket built from the singularities of
the spectral condition (Gamma poles or Bessel zeros).  Brackets are
solved as one vectorised batch; distinguished extensions default to their
closed forms but can be routed through the same root finder with
``method="roots"``.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import models as md
from . import specfun as sf
from .config import map_chunks
from .errors import BracketError, ExtensionError, ParameterError
from .roots import solve_brackets

MAX_INDEX = 10**6


class EigenRecord(NamedTuple):
    index: int
    sign: int
    value: float
    bracket: md.SpectralBracket
    residual: float


@dataclass(frozen=True)
class EigenvalueStream:
    """Sorted eigenvalues with their brackets and root residuals.

    Arrays are aligned: ``values[i]`` is the eigenvalue with index
    ``indices[i]`` on branch ``signs[i]``, found inside ``[lo[i], hi[i]]``
    with residual ``residuals[i]`` relative to the bracket scale
    ``scales[i]``.
    """

    model: object
    ext: float
    indices: np.ndarray
    signs: np.ndarray
    values: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    residuals: np.ndarray
    scales: np.ndarray

    def __len__(self):
        return int(self.values.size)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i):
        return EigenRecord(int(self.indices[i]), int(self.signs[i]), float(self.values[i]),
                           md.SpectralBracket(float(self.lo[i]), float(self.hi[i]),
                                              int(self.indices[i])),
                           float(self.residuals[i]))

    def branch(self, sign):
        """Sub-stream of one sign branch."""
        keep = self.signs == (1 if sign >= 0 else -1)
        return _stream(self.model, self.ext, *(a[keep] for a in self._arrays()))

    def _arrays(self):
        return (self.indices, self.signs, self.values, self.lo, self.hi,
                self.residuals, self.scales)


def _stream(model, ext, indices, signs, values, lo, hi, residuals, scales):
    order = np.argsort(values, kind="stable")
    arrays = (indices, signs, values, lo, hi, residuals, scales)
    return EigenvalueStream(model, ext, *(np.asarray(a)[order] for a in arrays))


def _closed_array(model, ext, n, sign):
    """Vectorised closed-form eigenvalues for a distinguished extension."""
    kind = model.kind
    sgn = 1.0 if sign >= 0 else -1.0
    if kind == "oscillator":
        return 4.0 * (n + (model.a if ext == 0.0 else model.b))
    if kind == "interval":
        order = model.nu if math.isinf(ext) else -model.nu
        return sf.bessel_j_zeros(order, n) ** 2
    if kind == "dirac":
        out = np.zeros(n.shape)
        pos = n > 0
        if pos.any():
            order = -model.nu if math.isinf(ext) else model.nu
            out[pos] = sgn * sf.bessel_j_zeros(order, n[pos])
        return out
    if kind == "ab":
        return sgn * 2.0 * np.sqrt(n + (0.0 if math.isinf(ext) else model.kappa))
    if math.isinf(ext):
        return sgn * np.sqrt(2.0 * n)
    return sgn * np.sqrt(2.0 * n + 1.0 - 2.0 * model.alpha)


def _solve_block(model, ext, n, sign, method):
    lo, hi = md.bracket_arrays(model, ext, n, sign)

    def resid(x):
        return np.asarray(md.spectral_residual(model, ext, x), dtype=float)

    values = lo.copy()
    residuals = np.zeros(n.shape)
    scales = np.ones(n.shape)
    open_ = lo != hi
    if ext in md.distinguished(model) and method == "closed":
        values = _closed_array(model, ext, n, sign)
        residuals = resid(values)
        scales = np.maximum(np.abs(resid(lo)), np.abs(resid(hi)))
        scales[~open_] = 1.0
        return values, lo, hi, residuals, scales
    if open_.any():
        f_lo, f_hi = resid(lo[open_]), resid(hi[open_])
        try:
            root, res = solve_brackets(resid, lo[open_], hi[open_], f_lo=f_lo, f_hi=f_hi)
        except BracketError as exc:
            raise BracketError(f"{model!r}, ext={ext}, sign={sign}: {exc}", exc.trace) from None
        values[open_] = root
        residuals[open_] = res
        scales[open_] = np.maximum(np.abs(f_lo), np.abs(f_hi))
    residuals[~open_] = resid(values[~open_])
    return values, lo, hi, residuals, scales


def _branch(model, ext, n, sign, method, threads):
    n = np.asarray(n, dtype=np.int64)
    if n.size and n.max() > MAX_INDEX:
        raise ParameterError(f"index {int(n.max())} beyond the enumerable range {MAX_INDEX}")
    if n.size == 0:
        empty = np.zeros(0)
        return empty, empty, empty, empty, empty
    return map_chunks(lambda block: _solve_block(model, ext, block, sign, method), n,
                      threads=threads)


def _signs(model, sign):
    if sign == "both":
        if not isinstance(model, md.SIGNED_MODELS):
            return (1,)
        return (1, -1)
    if sign not in (1, -1):
        raise ParameterError(f"sign must be +1, -1 or 'both', got {sign!r}")
    if sign < 0 and not isinstance(model, md.SIGNED_MODELS):
        raise ParameterError(f"{model.kind}: spectrum has no negative branch")
    return (sign,)


def eigenvalues(model, ext, indices, sign=1, *, method="closed", threads=None):
    """Stream of eigenvalues at the given indices on one or both branches."""
    ext = md.check_extension(model, ext)
    if method not in ("closed", "roots"):
        raise ParameterError(f"unknown method {method!r}")
    indices = np.atleast_1d(np.asarray(indices, dtype=np.int64))
    parts = []
    for sg in _signs(model, sign):
        first = md.first_index(model, ext, sg)
        n = indices[indices >= first] if sign == "both" else indices
        if n.size and n.min() < first:
            raise ParameterError(f"{model.kind}: index {int(n.min())} below first index {first}")
        vals, lo, hi, res, sc = _branch(model, ext, n, sg, method, threads)
        parts.append((n, np.full(n.shape, sg), vals, lo, hi, res, sc))
    cat = [np.concatenate([p[i] for p in parts]) for i in range(7)]
    return _stream(model, ext, *cat)


def nth_eigenvalue(model, ext, n, sign=1, *, method="closed"):
    """Eigenvalue with index ``n`` on branch ``sign``."""
    stream = eigenvalues(model, ext, [n], sign, method=method)
    return float(stream.values[0])


def merge_streams(*streams):
    """One sorted stream holding the eigenvalues of several streams."""
    model, ext = streams[0].model, streams[0].ext
    cat = [np.concatenate(parts) for parts in zip(*(s._arrays() for s in streams))]
    return _stream(model, ext, *cat)


def first_eigenvalues(model, ext, count, sign=1, *, method="closed", threads=None):
    """The ``count`` lowest-index eigenvalues of one branch (or of each, for ``"both"``)."""
    if sign == "both":
        return merge_streams(*(first_eigenvalues(model, ext, count, sg, method=method,
                                                 threads=threads)
                               for sg in _signs(model, "both")))
    first = md.first_index(model, ext, sign)
    return eigenvalues(model, ext, np.arange(first, first + int(count)), sign,
                       method=method, threads=threads)


def eigenvalues_up_to(model, ext, cutoff, *, method="closed", threads=None):
    """All eigenvalues up to ``cutoff`` (in modulus for the signed models).

    Indices are taken in doubling blocks until a bracket lies wholly
    above the cutoff, so no root between bracket boundaries is missed.
    """
    ext = md.check_extension(model, ext)
    cutoff = float(cutoff)
    if not cutoff > 0:
        raise ParameterError(f"cutoff must be positive, got {cutoff}")
    signed = isinstance(model, md.SIGNED_MODELS)
    parts = []
    for sg in _signs(model, "both"):
        first = md.first_index(model, ext, sg)
        start, size = first, 64
        while True:
            n = np.arange(start, start + size)
            lo, hi = md.bracket_arrays(model, ext, n, sg)
            edge = np.minimum(np.abs(lo), np.abs(hi)) if signed else lo
            beyond = np.flatnonzero(edge > cutoff)
            if beyond.size:
                stop = start + int(beyond[0])
                break
            start += size
            size *= 2
            if start > MAX_INDEX:
                raise ParameterError(f"cutoff {cutoff} needs more than {MAX_INDEX} eigenvalues")
        n = np.arange(first, stop)
        vals, lo, hi, res, sc = _branch(model, ext, n, sg, method, threads)
        keep = (np.abs(vals) if signed else vals) <= cutoff
        parts.append((n[keep], np.full(int(keep.sum()), sg), vals[keep], lo[keep],
                      hi[keep], res[keep], sc[keep]))
    cat = [np.concatenate([p[i] for p in parts]) for i in range(7)]
    return _stream(model, ext, *cat)


def negative_modes(model, ext):
    """Negative eigenvalues of a Schrodinger-type extension (zero or one)."""
    if not isinstance(model, (md.OscillatorHalfLine, md.InverseSquareInterval)):
        raise ExtensionError(f"{model.kind}: negative modes are defined for Schrodinger models only")
    bracket = md.negative_mode_condition(model, ext)
    if bracket is None:
        return []
    value = nth_eigenvalue(model, ext, bracket.index)
    if not value < 0:
        raise BracketError(f"negative-mode bracket returned {value}")
    return [value]
