"""Information matrices and the marginal log-determinant objective.

Two routes to the same matrix: summing elemental contributions of a
discrete design, and the closed block form of the rotation-invariant
design driven by the two-point marginal's moments.  Their agreement is a
load-bearing consistency check used throughout the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .construct import Design, FullParameter
from .intensity import CanonicalProblem, IntensityFamily, q

__all__ = [
    "InfoMatrix",
    "info_matrix_discrete",
    "info_matrix_marginal",
    "log_det_objective",
]


@dataclass(frozen=True)
class InfoMatrix:
    """Symmetric PSD information matrix with det/inverse accessors."""

    m: np.ndarray
    det_hint: float | None = None  # block-structure determinant, if known

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        object.__setattr__(self, "m", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("information matrix must be square")
        scale = max(1.0, float(np.max(np.abs(m))))
        if float(np.max(np.abs(m - m.T))) > 1e-14 * scale:
            raise ValueError("information matrix must be symmetric")
        if float(np.min(np.linalg.eigvalsh(m))) < -1e-12 * scale:
            raise ValueError("information matrix must be positive semidefinite")

    @property
    def size(self) -> int:
        return self.m.shape[0]

    def det(self) -> float:
        if self.det_hint is not None:
            return self.det_hint
        return float(np.linalg.det(self.m))

    def inv(self) -> np.ndarray:
        return np.linalg.inv(self.m)

    def rcond(self) -> float:
        sv = np.linalg.svd(self.m, compute_uv=False)
        if sv[0] == 0.0:
            return 0.0
        return float(sv[-1] / sv[0])


def regressor(points: np.ndarray) -> np.ndarray:
    """Stack (1, x1, ..., xk) rows for a batch of points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return np.hstack([np.ones((pts.shape[0], 1)), pts])


def info_matrix_discrete(fam: IntensityFamily, full: FullParameter,
                         design: Design) -> InfoMatrix:
    """Weighted sum of elemental matrices lam(f^T beta) f f^T."""
    if design.k != full.k:
        raise ValueError("design dimension disagrees with beta")
    f = regressor(design.points)
    lam = np.atleast_1d(fam.intensity(f @ full.beta))
    scaled = f * (design.weights * lam)[:, None]
    m = scaled.T @ f
    return InfoMatrix(0.5 * (m + m.T))


def info_matrix_marginal(fam: IntensityFamily, prob: CanonicalProblem,
                         x12: float, w11: float | None = None) -> InfoMatrix:
    """Closed block form for the invariant design over a two-point marginal.

    Top-left 2x2 block from the moments of q against the marginal
    {1 -> w11, x12 -> 1-w11}, and a trailing identity block scaled by
    (1/(k-1)) * integral of q (1 - id^2); absent for k = 1.
    """
    k = prob.k
    if w11 is None:
        w11 = 1.0 / (k + 1)
    if not 0.0 <= w11 <= 1.0:
        raise ValueError("w11 must be a weight in [0, 1]")
    q1 = q(fam, prob, 1.0)
    q2 = q(fam, prob, x12)
    m0 = w11 * q1 + (1.0 - w11) * q2
    m1 = w11 * q1 + (1.0 - w11) * q2 * x12
    m2 = w11 * q1 + (1.0 - w11) * q2 * x12 * x12
    block = np.array([[m0, m1], [m1, m2]])
    det2 = m0 * m2 - m1 * m1
    if k == 1:
        return InfoMatrix(block, det_hint=det2)
    trail = (1.0 - w11) * q2 * (1.0 - x12 * x12) / (k - 1)
    m = np.zeros((k + 1, k + 1))
    m[:2, :2] = block
    m[range(2, k + 1), range(2, k + 1)] = trail
    return InfoMatrix(m, det_hint=det2 * trail ** (k - 1))


def log_det_objective(fam: IntensityFamily, prob: CanonicalProblem, x12):
    """log det of the invariant-design information matrix at level x12.

    Direct evaluation of the factorized determinant with the optimal
    weight 1/(k+1) on the pole; this is the objective whose stationarity
    produces the defining equation solved in `marginal`.  Vectorized over
    x12; scalar in, scalar out.
    """
    k = prob.k
    x = np.asarray(x12, dtype=float)
    lo_ok = (x > -1.0) if k >= 2 else (x >= -1.0)
    if not np.all(lo_ok & (x < 1.0)):
        lo = "(-1, 1)" if k >= 2 else "[-1, 1)"
        raise ValueError(f"x12 must lie in {lo} for k = {k}")
    q1 = q(fam, prob, 1.0)
    q2 = np.asarray(q(fam, prob, x))
    out = np.log(q1 * q2 * (1.0 - x) ** 2 * k / (k + 1) ** 2)
    if k >= 2:
        out = out + (k - 1) * (np.log(q2 * (1.0 - x * x) * k / (k + 1))
                               - math.log(k - 1))
    return float(out) if np.ndim(x12) == 0 else out
