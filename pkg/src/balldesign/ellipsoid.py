"""Affine transport of designs between the unit ball and an ellipsoid.

An ellipsoid {x : (x-c)^T A^-2 (x-c) <= 1} with A symmetric positive
definite is the image of the unit ball under x = A u + c.  The linear
predictor is preserved by mapping the parameter the other way
(beta0 + slope.c, A slope), so a design solved on the ball transports to
the ellipsoid point by point with weights untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construct import Design, FullParameter
from .infomat import info_matrix_discrete
from .intensity import IntensityFamily
from .verify import Certificate, candidate_points, sensitivity_batch, _inverse_or_raise

__all__ = [
    "EllipsoidRegion",
    "pull_back_parameter",
    "push_forward_design",
    "certify_on_region",
    "region_from_dict",
    "region_to_dict",
]


@dataclass(frozen=True)
class EllipsoidRegion:
    """Center c and SPD factor A mapping the unit ball onto the region."""

    center: np.ndarray
    axes: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).ravel()
        a = np.asarray(self.axes, dtype=float)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "axes", a)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != c.size:
            raise ValueError("axes must be a square matrix matching the center")
        scale = max(1.0, float(np.max(np.abs(a))))
        if float(np.max(np.abs(a - a.T))) > 1e-12 * scale:
            raise ValueError("axes matrix must be symmetric")
        if float(np.min(np.linalg.eigvalsh(a))) <= 0.0:
            raise ValueError("axes matrix must be positive definite")

    @property
    def k(self) -> int:
        return self.center.size


def pull_back_parameter(region: EllipsoidRegion,
                        full: FullParameter) -> FullParameter:
    """Parameter of the equivalent ball problem under x = A u + c."""
    if full.k != region.k:
        raise ValueError("parameter dimension disagrees with the region")
    slope = full.slope
    beta0 = full.beta0 + float(slope @ region.center)
    return FullParameter(np.concatenate([[beta0], region.axes @ slope]))


def push_forward_design(region: EllipsoidRegion, design: Design) -> Design:
    """Map ball support points into the ellipsoid; weights unchanged."""
    if design.k != region.k:
        raise ValueError("design dimension disagrees with the region")
    pts = design.points @ region.axes.T + region.center
    return Design(pts, design.weights.copy())


def certify_on_region(region: EllipsoidRegion, fam: IntensityFamily,
                      full: FullParameter, design: Design,
                      grid_n: int = 200000, slack: float = 1e-6) -> Certificate:
    """Sensitivity check carried out directly on the ellipsoid.

    Builds the information matrix from the region-space support points and
    the untransformed parameter, then sweeps psi over the image of the
    ball's candidate grid.  Deliberately does not invert the transport
    map, so it is an end-to-end check of the pull-back/push-forward pair.
    """
    if grid_n < 1000:
        raise ValueError("grid_n must be >= 1000")
    if not slack > 0:
        raise ValueError("slack must be > 0")
    k = region.k
    minv = _inverse_or_raise(info_matrix_discrete(fam, full, design))

    pulled = pull_back_parameter(region, full)
    axis = pulled.slope / np.linalg.norm(pulled.slope) \
        if np.linalg.norm(pulled.slope) > 0 else np.eye(k)[0]
    ball_pts = candidate_points(k, grid_n, axis)
    pts = ball_pts @ region.axes.T + region.center

    psi = sensitivity_batch(fam, full.beta, minv, pts)
    psi_support = sensitivity_batch(fam, full.beta, minv, design.points)

    bound = float(k + 1)
    gap = float(np.max(np.abs(psi_support - bound)))
    i = int(np.argmax(psi))
    if float(np.max(psi_support)) > float(psi[i]):
        argmax = design.points[int(np.argmax(psi_support))]
        max_sens = float(np.max(psi_support))
    else:
        argmax, max_sens = pts[i], float(psi[i])
    passed = (max_sens <= bound + slack) and (gap <= slack)
    return Certificate(max_sens, np.array(argmax), bound,
                       pts.shape[0] + design.n_points, passed, gap, slack)


def region_from_dict(d: dict) -> EllipsoidRegion:
    return EllipsoidRegion(np.array(d["center"], dtype=float),
                           np.array(d["axes"], dtype=float))


def region_to_dict(region: EllipsoidRegion) -> dict:
    return {"center": [float(c) for c in region.center],
            "axes": [[float(v) for v in row] for row in region.axes]}
