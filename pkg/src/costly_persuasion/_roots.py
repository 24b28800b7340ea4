"""Scalar bracketed bisection and golden-section search.

All equilibrium objects in this package reduce to one-dimensional roots or
maxima of smooth functions, so two small, predictable routines cover every
solver: bisection to a fixed absolute tolerance in the unknown, and
golden-section search for concave maxima (used where a first-order condition
has no sign change on the bracket).
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import BracketError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_root(fn: Callable[[float], float], lo: float, hi: float, *,
                xtol: float = 1e-12, max_iter: int = 200,
                flo: float | None = None, fhi: float | None = None) -> float:
    """Root of fn on [lo, hi] by bisection; fn(lo) and fn(hi) must differ in sign.

    Endpoint values may be passed in to avoid re-evaluation. Exact zeros at an
    endpoint are returned as-is.
    """
    if flo is None:
        flo = fn(lo)
    if fhi is None:
        fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= xtol:
            break
    return 0.5 * (lo + hi)


def golden_max(fn: Callable[[float], float], lo: float, hi: float, *,
               xtol: float = 1e-10, max_iter: int = 400) -> tuple[float, float]:
    """Maximizer and maximum of a unimodal fn on [lo, hi] by golden section."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def scan_bracket(fn: Callable[[float], float], lo: float, hi: float,
                 n: int) -> tuple[float, float, float, float] | None:
    """First sign-change bracket of fn on an n-point uniform scan of [lo, hi].

    Returns (a, b, fa, fb) or None when all samples share one sign.
    """
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    fa = fn(xs[0])
    for i in range(1, n):
        fb = fn(xs[i])
        if fa == 0.0 or (fa > 0.0) != (fb > 0.0):
            return xs[i - 1], xs[i], fa, fb
        fa = fb
    return None
