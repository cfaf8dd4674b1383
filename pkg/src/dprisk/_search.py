"""Small one-dimensional search routines used by the converters and planner."""
from __future__ import annotations

import math
from typing import Callable, Tuple

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   xtol: float = 1e-10, max_iter: int = 300) -> Tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def minimize_over_slack(f: Callable[[float], float], span: float,
                        t_max: float = 600.0, n_scan: int = 160) -> Tuple[float, float]:
    """Minimize ``f(s)`` over a slack ``s`` in ``(0, span)``.

    The search runs in ``t = log(span / s)`` so that slacks spanning hundreds of
    orders of magnitude are covered evenly. A coarse geometric scan locates the
    basin, then golden-section refines inside the neighbouring bracket.
    Non-finite objective values are treated as +inf.

    Returns ``(s_best, f(s_best))``.
    """
    if not span > 0:
        raise ValueError("span must be positive")

    def g(t: float) -> float:
        v = f(span * math.exp(-t))
        return v if math.isfinite(v) else math.inf

    t_min = 1e-12
    ts = [t_min * (t_max / t_min) ** (i / (n_scan - 1)) for i in range(n_scan)]
    vals = [g(t) for t in ts]
    i = min(range(n_scan), key=vals.__getitem__)
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, n_scan - 1)]
    t_best, v_best = golden_section(g, lo, hi, xtol=1e-12 * max(1.0, hi))
    if vals[i] < v_best:
        t_best, v_best = ts[i], vals[i]
    return span * math.exp(-t_best), v_best


def bisect_monotone(pred: Callable[[float], bool], lo: float, hi: float,
                    tol: float = 1e-12, max_iter: int = 400) -> float:
    """Largest ``x`` in ``[lo, hi]`` with ``pred(x)`` true, for a predicate that
    is true on an initial segment. ``pred(lo)`` must hold."""
    if pred(hi):
        return hi
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo
