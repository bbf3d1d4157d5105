"""Vectorised bracketed root refinement.

Every element is an independent bracket ``[lo, hi]`` with a sign change.
Brackets are first bisected down to a relative width ``bisect_width``;
Newton steps follow, with a bisection step whenever Newton would leave
the current bracket.  Without an analytic derivative a forward
difference is used.
"""

import numpy as np

from .errors import BracketError

_EPS = np.finfo(float).eps


def solve_brackets(func, lo, hi, *, deriv=None, f_lo=None, f_hi=None,
                   bisect_width=1e-3, rtol=4 * _EPS, atol=0.0, max_iter=200, edge_ulps=64):
    """Return ``(roots, residuals)`` for arrays of brackets.

    ``func`` must map a float array to a float array of the same shape.
    When a root coincides with a bracket edge the endpoint residuals may
    share a sign; an endpoint is then taken as the root if its residual is
    what a shift of ``edge_ulps`` units in the last place would produce,
    with the slope from a short inward difference.
    Raises :class:`BracketError` if an endpoint pair shows no sign change.
    """
    lo = np.array(lo, dtype=float, ndmin=1)
    hi = np.array(hi, dtype=float, ndmin=1)
    f_lo = np.array(func(lo) if f_lo is None else f_lo, dtype=float, ndmin=1)
    f_hi = np.array(func(hi) if f_hi is None else f_hi, dtype=float, ndmin=1)

    same = np.flatnonzero(f_lo * f_hi > 0)
    if same.size:
        for end, fend, step in ((lo, f_lo, 1.0), (hi, f_hi, -1.0)):
            x = end[same]
            h = step * 1e-7 * np.maximum(np.abs(x), 1e-3)
            slope = np.abs(np.asarray(func(x + h), dtype=float) - fend[same]) / np.abs(h)
            hit = np.abs(fend[same]) <= edge_ulps * _EPS * np.maximum(np.abs(x), 1.0) * slope
            fend[same[hit]] = 0.0
    bad = (f_lo * f_hi > 0) | ~np.isfinite(f_lo) | ~np.isfinite(f_hi)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        trace = [(float(lo[i]), float(f_lo[i])), (float(hi[i]), float(f_hi[i]))]
        raise BracketError(
            f"no sign change on [{lo[i]!r}, {hi[i]!r}] (element {i})", trace)

    root = 0.5 * (lo + hi)
    done = np.zeros(root.shape, dtype=bool)
    for end, fend in ((lo, f_lo), (hi, f_hi)):
        hit = (fend == 0) & ~done
        root[hit], done[hit] = end[hit], True
    neg_lo = f_lo < 0

    def scale(x):
        return np.maximum(np.abs(x), 1.0) if atol == 0.0 else np.abs(x)

    # Bisection phase.
    act = np.flatnonzero(~done)
    for _ in range(max_iter):
        if act.size == 0:
            break
        wide = (hi[act] - lo[act]) > bisect_width * scale(0.5 * (lo[act] + hi[act]))
        act = act[wide]
        if act.size == 0:
            break
        mid = 0.5 * (lo[act] + hi[act])
        fm = func(mid)
        zero = fm == 0
        root[act[zero]], done[act[zero]] = mid[zero], True
        left = (fm < 0) == neg_lo[act]
        lo[act[left & ~zero]] = mid[left & ~zero]
        hi[act[~left & ~zero]] = mid[~left & ~zero]
        act = act[~zero]

    # Newton phase.
    act = np.flatnonzero(~done)
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        if act.size == 0:
            break
        xa = x[act]
        if deriv is None:
            h = 1e-7 * np.maximum(np.abs(xa), 1e-3)
            both = func(np.concatenate([xa, xa + h]))
            fx, fh = both[: xa.size], both[xa.size:]
            dfx = (fh - fx) / h
        else:
            fx = func(xa)
            dfx = deriv(xa)
        zero = fx == 0
        left = (fx < 0) == neg_lo[act]
        lo[act[left & ~zero]] = xa[left & ~zero]
        hi[act[~left & ~zero]] = xa[~left & ~zero]
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xa - fx / dfx
        out = ~np.isfinite(xn) | (xn <= lo[act]) | (xn >= hi[act])
        xn[out] = 0.5 * (lo[act][out] + hi[act][out])
        step = np.abs(xn - xa)
        tol = rtol * np.abs(xn) + atol
        conv = zero | (step <= tol) | ((hi[act] - lo[act]) <= tol)
        x[act] = np.where(zero, xa, xn)
        fin = act[conv]
        root[fin] = x[fin]
        done[fin] = True
        act = act[~conv]
    if act.size:
        root[act] = x[act]
    return root, np.asarray(func(root), dtype=float)
