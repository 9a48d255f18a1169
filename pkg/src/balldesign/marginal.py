"""Second support level of the two-point marginal design.

The rotation-invariant D-optimal design on the ball reduces to a marginal
measure on the first coordinate carrying exactly two points: the pole level
x11 = 1 with weight 1/(k+1) and a level x12 in [-1, 1) with weight k/(k+1).
This module solves for x12: Poisson in closed form, everything else by a
guarded bisection on the stationarity equation

    q'(x)/q(x) = 2 (1 + k x) / (k (1 - x^2))        (k >= 2)
    q'(x)/q(x) = 2 / (1 - x)                        (k = 1)

whose right side sweeps all of (-inf, inf) between its poles, so a sign
change always exists for a positive increasing intensity.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .intensity import CanonicalProblem, IntensityFamily, log_deriv_ratio
from .lambertw import lambert_w
from .roots import bisect, shrinking_bracket

__all__ = [
    "SolveMethod",
    "MarginalSolution",
    "solve_x12",
    "poisson_x12",
    "poisson_x12_limit",
    "x12_infinite_dim",
    "negbin_beta1_of_x12",
    "degenerate_design_flag",
]

# Bisection continues past the requested interval tolerance down to the
# floating-point limit, so the reported equation residual is also tiny.
_WIDTH_FLOOR = 1e-18


class SolveMethod(enum.Enum):
    CLOSED_FORM_POISSON = "closed-form-poisson"
    ROOT_FIND = "root-find"
    BOUNDARY_K1 = "boundary-k1"
    DEGENERATE_BETA1_ZERO = "degenerate-beta1-zero"


@dataclass(frozen=True)
class MarginalSolution:
    """Two-point marginal: support levels, weights, and how x12 was found."""

    x11: float
    x12: float
    w11: float
    w12: float
    method: SolveMethod
    residual: float


def _rhs(k: int, x: float) -> float:
    if k == 1:
        return 2.0 / (1.0 - x)
    return 2.0 * (1.0 + k * x) / (k * (1.0 - x * x))


def stationarity_gap(fam: IntensityFamily, prob: CanonicalProblem, x):
    """q'/q minus the right side of the defining equation, vectorized."""
    x_arr = np.asarray(x, dtype=float)
    lhs = log_deriv_ratio(fam, prob, x_arr)
    if prob.k == 1:
        rhs = 2.0 / (1.0 - x_arr)
    else:
        rhs = 2.0 * (1.0 + prob.k * x_arr) / (prob.k * (1.0 - x_arr * x_arr))
    return lhs - rhs


def solve_x12(fam: IntensityFamily, prob: CanonicalProblem, tol: float = 1e-12,
              force_rootfind: bool = False) -> MarginalSolution:
    """Solve for the non-pole support level x12.

    Poisson takes the closed form unless force_rootfind is set (used to
    cross-check the generic path).  For k = 1 a boundary solution x12 = -1
    applies whenever q'(-1)/q(-1) < 1; otherwise all stationary points
    found by a sign scan are compared on the log-determinant and the best
    one wins, with a warning if the equation had several roots (a shape
    condition must have failed for that to happen).
    """
    if not prob.beta1 > 0:
        raise ValueError("solve_x12 needs beta1 > 0; use the degenerate "
                         "uniform-sphere design when the slope vanishes")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    k = prob.k
    w11 = 1.0 / (k + 1)
    w12 = 1.0 - w11

    if fam.kind == "poisson" and not force_rootfind:
        x12 = poisson_x12(k, prob.beta1)
        return MarginalSolution(1.0, x12, w11, w12,
                                SolveMethod.CLOSED_FORM_POISSON, 0.0)

    def g(x: float) -> float:
        return log_deriv_ratio(fam, prob, x) - _rhs(k, x)

    width = min(tol, _WIDTH_FLOOR)

    if k >= 2:
        a, b, fa, fb = shrinking_bracket(g, -1.0, 1.0)
        x12 = bisect(g, a, b, fa, fb, tol=width)
        return MarginalSolution(1.0, x12, w11, w12, SolveMethod.ROOT_FIND,
                                abs(g(x12)))

    # k = 1: the right side starts at 1 in x = -1, so a too-flat intensity
    # pins the solution to the boundary.
    if log_deriv_ratio(fam, prob, -1.0) < 1.0:
        return MarginalSolution(1.0, -1.0, w11, w12,
                                SolveMethod.BOUNDARY_K1, 0.0)

    from .infomat import log_det_objective  # local import, avoids a cycle

    xs = np.linspace(-1.0, 1.0 - 1e-9, 513)
    gv = np.asarray(stationarity_gap(fam, prob, xs))
    roots: list[float] = []
    for i in range(len(xs) - 1):
        if gv[i] == 0.0:
            roots.append(float(xs[i]))
        elif (gv[i] > 0) != (gv[i + 1] > 0):
            roots.append(bisect(g, float(xs[i]), float(xs[i + 1]),
                                float(gv[i]), float(gv[i + 1]), tol=width))
    if gv[-1] == 0.0:
        roots.append(float(xs[-1]))
    if len(roots) > 1:
        warnings.warn("defining equation has %d roots on [-1, 1); selecting "
                      "by determinant comparison" % len(roots), RuntimeWarning)

    candidates = [(-1.0, SolveMethod.BOUNDARY_K1, 0.0)]
    candidates += [(r, SolveMethod.ROOT_FIND, abs(g(r))) for r in roots]
    best = max(candidates, key=lambda c: log_det_objective(fam, prob, c[0]))
    return MarginalSolution(1.0, best[0], w11, w12, best[1], best[2])


def poisson_x12(k: int, beta1: float) -> float:
    """Closed-form x12 for the exponential (Poisson) intensity.

    Written as (beta1 - 2/k) / (1 + sqrt(1 - 2 beta1/k + beta1^2)), the
    cancellation-free equivalent of the quadratic-formula root, so the
    value is right-continuous through beta1 = 0 where it equals -1/k.
    For k = 1 the solution is piecewise: -1 up to beta1 = 1, then 1 - 2/beta1.
    """
    if beta1 < 0:
        raise ValueError("beta1 must be >= 0")
    k = int(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return -1.0 if beta1 <= 1.0 else 1.0 - 2.0 / beta1
    disc = 1.0 - 2.0 * beta1 / k + beta1 * beta1
    return (beta1 - 2.0 / k) / (1.0 + math.sqrt(disc))


def poisson_x12_limit(beta1: float) -> float:
    """Large-k limit of poisson_x12, again in cancellation-free form."""
    if beta1 < 0:
        raise ValueError("beta1 must be >= 0")
    return beta1 / (1.0 + math.sqrt(1.0 + beta1 * beta1))


def x12_infinite_dim(fam: IntensityFamily, beta0: float, beta1: float,
                     tol: float = 1e-12) -> float:
    """Large-k limit level for any family: root of q'/q = 2x/(1 - x^2)."""
    if beta1 < 0:
        raise ValueError("beta1 must be >= 0")
    if beta1 == 0.0:
        return 0.0
    if fam.kind == "poisson":
        return poisson_x12_limit(beta1)
    # beta1 only scales the problem here; any k >= 1 gives the same q'/q
    prob = CanonicalProblem(1, beta0, beta1)

    def g(x: float) -> float:
        return log_deriv_ratio(fam, prob, x) - 2.0 * x / (1.0 - x * x)

    a, b, fa, fb = shrinking_bracket(g, -1.0, 1.0)
    return bisect(g, a, b, fa, fb, tol=min(tol, _WIDTH_FLOOR))


def negbin_beta1_of_x12(a: float, beta0: float, k: int, x12: float,
                        branch: int = 0) -> float:
    """Inverse of the negative-binomial x12 curve via Lambert W.

    Solving beta1 / (1 + a exp(beta0 + beta1 x)) = R(x) for beta1 at a
    fixed level x = x12, with R(x) = 2(1 + k x)/(k (1 - x^2)), gives

        beta1 = R - W(-a R x * exp(beta0 + R x)) / x .

    The principal branch covers the rising part of the beta1 -> x12 curve,
    the lower branch (branch=-1) the falling part past its maximum.
    Raises BranchDomainError when the W argument falls below -1/e and
    ValueError at the poles x12 in {-1, 1}.  At x12 = 0, where the curve
    crosses zero, the W/x quotient has a removable singularity on the
    principal branch and the limit (2/k)(1 + a exp(beta0)) is returned.
    """
    if not a > 0:
        raise ValueError("overdispersion a must be > 0")
    k = int(k)
    if k < 2:
        raise ValueError("the inverse relation is defined for k >= 2")
    if x12 in (-1.0, 1.0):
        raise ValueError(f"x12 = {x12} is a pole of the inverse relation")
    if not -1.0 < x12 < 1.0:
        raise ValueError("x12 must lie in (-1, 1)")
    if x12 == 0.0:
        if branch == -1:
            raise ValueError("the lower branch diverges at x12 = 0")
        return (2.0 / k) * (1.0 + a * math.exp(beta0))
    big_r = 2.0 * (1.0 + k * x12) / (k * (1.0 - x12 * x12))
    z = -a * big_r * x12 * math.exp(beta0 + big_r * x12)
    return big_r - lambert_w(z, branch) / x12


def degenerate_design_flag(prob: CanonicalProblem) -> bool:
    """True exactly when the slope norm is zero (uniform-sphere optimum)."""
    return prob.beta1 == 0.0
