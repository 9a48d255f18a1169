"""Real branches of the Lambert W function (inverse of w -> w*exp(w)).

Halley iteration from a branch-aware initial guess; converges in a
handful of steps everywhere on the real branches.  Only real arguments
are supported: W0 on [-1/e, inf), W-1 on [-1/e, 0).
"""

from __future__ import annotations

import math

__all__ = ["BranchDomainError", "lambert_w"]

_INV_E = math.exp(-1.0)
# Arguments this close to the branch point -1/e are treated as exactly on it;
# below it (beyond rounding) is a domain error.
_BRANCH_PAD = 1e-14


class BranchDomainError(ValueError):
    """Argument outside the requested real branch of Lambert W."""


def _initial_w0(z: float) -> float:
    if z > math.e:
        lz = math.log(z)
        return lz - math.log(lz)
    if z > -0.25:
        # small-|z| series W0(z) = z - z^2 + 1.5 z^3 - ...
        return z * (1.0 - z + 1.5 * z * z)
    p = math.sqrt(2.0 * (math.e * z + 1.0))
    return -1.0 + p - p * p / 3.0 + 11.0 * p**3 / 72.0


def _initial_wm1(z: float) -> float:
    if z < -0.25:
        p = math.sqrt(2.0 * (math.e * z + 1.0))
        return -1.0 - p - p * p / 3.0
    l1 = math.log(-z)
    l2 = math.log(-l1)
    return l1 - l2 + l2 / l1


def lambert_w(z: float, branch: int = 0, tol: float = 1e-14,
              max_iter: int = 50) -> float:
    """W(z) on the principal branch (0) or the lower branch (-1).

    Raises BranchDomainError for z < -1/e, and on the lower branch also
    for z >= 0.  The iteration stops once |w e^w - z| <= tol * max(1, |z|).
    """
    z = float(z)
    if branch not in (0, -1):
        raise ValueError("branch must be 0 or -1")
    if z < -_INV_E - _BRANCH_PAD:
        raise BranchDomainError(f"W is real only for z >= -1/e, got z = {z}")
    if z <= -_INV_E + _BRANCH_PAD:
        return -1.0
    if branch == -1:
        if z >= 0.0:
            raise BranchDomainError("lower branch requires z in [-1/e, 0)")
        w = _initial_wm1(z)
    else:
        if z == 0.0:
            return 0.0
        w = _initial_w0(z)

    for _ in range(max_iter):
        ew = math.exp(w)
        r = w * ew - z
        if abs(r) <= tol * abs(z) or w == -1.0:
            return w
        wp1 = w + 1.0
        step = r / (ew * wp1 - (w + 2.0) * r / (2.0 * wp1))
        w_new = w - step
        # both real branches live on one side of the branch point w = -1
        if branch == -1 and w_new > -1.0:
            w_new = -1.0 - 0.5 * abs(wp1)
        elif branch == 0 and w_new < -1.0:
            w_new = -1.0 + 0.5 * abs(wp1)
        w = w_new
        # near the branch point the residual is quadratically blind to w,
        # so a vanishing step is the sharper stopping rule there
        if abs(step) <= 4e-16 * (2.0 + abs(w)):
            return w
    raise ArithmeticError(f"Lambert W failed to converge for z = {z}, branch {branch}")
