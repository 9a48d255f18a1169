"""Bracketed scalar root finding.

Plain bisection is deliberately the default here: the defining equations
downstream pit a non-increasing left side against a right side that sweeps
(-inf, inf) between poles, so a sign change is guaranteed once the bracket
hugs the poles closely enough, and bisection then converges without any
smoothness assumptions.
"""

from __future__ import annotations

from typing import Callable

__all__ = ["BracketError", "bisect", "shrinking_bracket"]


class BracketError(RuntimeError):
    """No sign change found on any attempted bracket."""


def bisect(f: Callable[[float], float], a: float, b: float,
           fa: float | None = None, fb: float | None = None,
           tol: float = 1e-12, max_iter: int = 200) -> float:
    """Root of f in [a, b] by bisection, to interval width < tol.

    f(a) and f(b) must have opposite signs (a zero endpoint is returned
    as-is).  Width tolerance rather than residual tolerance: the callers
    care about the location x, not the size of f.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise BracketError(f"f({a}) and f({b}) have the same sign")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if b - a < tol or m == a or m == b:
            return m
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


def shrinking_bracket(f: Callable[[float], float], lo: float, hi: float,
                      eps_start: float = 1e-9, eps_stop: float = 1e-12,
                      shrink: float = 10.0) -> tuple[float, float, float, float]:
    """Find a sign-change bracket [lo+eps, hi-eps], shrinking eps toward 0.

    Starts at eps_start and divides eps by `shrink` until f changes sign
    across the bracket or eps falls below eps_stop, in which case a
    BracketError is raised (for the equations here that signals an
    intensity violating positivity/monotonicity, not a solver failure).
    Returns (a, b, f(a), f(b)).
    """
    eps = eps_start
    while eps >= eps_stop:
        a, b = lo + eps, hi - eps
        fa, fb = f(a), f(b)
        if fa == 0.0 or fb == 0.0 or (fa > 0) != (fb > 0):
            return a, b, fa, fb
        eps /= shrink
    raise BracketError(
        f"no sign change on ({lo}, {hi}) down to edge distance {eps_stop}")
