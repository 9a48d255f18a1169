"""Discrete design construction on the unit ball.

The optimal design has k+1 equally weighted support points: a pole on the
sphere in the slope direction, and the vertices of a regular (k-1)-simplex
inscribed in the sphere's cross-section at latitude x12.  In the canonical
frame the pole is e1; for a general slope vector the whole configuration is
carried over by a single Householder reflection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .intensity import CanonicalProblem, IntensityFamily
from .marginal import solve_x12

__all__ = [
    "Design",
    "FullParameter",
    "simplex_vertices",
    "householder_matrix",
    "canonical_design",
    "rotated_design",
    "degenerate_design",
    "design_record",
    "design_from_record",
]

# Below this norm of the reflection vector, the direct Householder formula
# amplifies rounding (error ~eps/|v|^2) past the geometric tolerances; an
# orientation-free fallback construction takes over.
_V_DEGENERATE = 1e-3


@dataclass(frozen=True)
class Design:
    """Finite design: support points (rows) and their weights."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float).ravel()
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        if pts.shape[0] != w.shape[0]:
            raise ValueError("points and weights disagree in length")
        if not np.all(w > 0):
            raise ValueError("weights must all be positive")
        if abs(math.fsum(w.tolist()) - 1.0) > 1e-15:
            raise ValueError("weights must sum to 1")

    @property
    def k(self) -> int:
        return self.points.shape[1]

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    def assert_on_ball(self, tol: float = 1e-12) -> None:
        norms = np.linalg.norm(self.points, axis=1)
        if np.any(norms > 1.0 + tol):
            raise ValueError("design point outside the unit ball")


@dataclass(frozen=True)
class FullParameter:
    """Unreduced parameter vector (beta0, beta1, ..., betak)."""

    beta: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.beta, dtype=float).ravel()
        object.__setattr__(self, "beta", b)
        if b.size < 2:
            raise ValueError("beta needs an intercept and at least one slope")
        if b.size > 65:
            raise ValueError("dimension k is capped at 64")

    @property
    def k(self) -> int:
        return self.beta.size - 1

    @property
    def beta0(self) -> float:
        return float(self.beta[0])

    @property
    def slope(self) -> np.ndarray:
        return self.beta[1:]

    def canonical(self) -> CanonicalProblem:
        return CanonicalProblem(self.k, self.beta0,
                                float(np.linalg.norm(self.slope)))


def simplex_vertices(d: int) -> np.ndarray:
    """d+1 unit vectors in R^d with pairwise inner products -1/d.

    Deterministic orientation: first vertex at e1, the rest placed by the
    usual recursion (common first coordinate -1/d, remaining coordinates a
    scaled regular simplex one dimension down).
    """
    d = int(d)
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return np.array([[1.0], [-1.0]])
    inner = simplex_vertices(d - 1)
    out = np.zeros((d + 1, d))
    out[0, 0] = 1.0
    out[1:, 0] = -1.0 / d
    out[1:, 1:] = math.sqrt(1.0 - 1.0 / d**2) * inner
    return out


def householder_matrix(v: np.ndarray) -> np.ndarray:
    """Reflection I - 2 v v^T / (v^T v)."""
    v = np.asarray(v, dtype=float).ravel()
    vv = float(v @ v)
    if vv == 0.0:
        raise ValueError("reflection vector must be nonzero")
    return np.eye(v.size) - (2.0 / vv) * np.outer(v, v)


def canonical_design(fam: IntensityFamily, prob: CanonicalProblem,
                     x12: float) -> Design:
    """Pole-plus-simplex design in the canonical frame.

    Pole (1, 0, ..., 0) and k points (x12, sqrt(1-x12^2) * s) over the
    regular (k-1)-simplex vertices s, all weighted 1/(k+1).  For k = 1
    just the two levels 1 and x12 at weight 1/2 each.
    """
    del fam  # the geometry depends on the family only through x12
    k = prob.k
    if not -1.0 <= x12 < 1.0:
        raise ValueError("x12 must lie in [-1, 1)")
    if k >= 2 and x12 == -1.0:
        raise ValueError("x12 = -1 would collapse the simplex for k >= 2")
    if k == 1:
        return Design(np.array([[1.0], [x12]]), np.array([0.5, 0.5]))
    pts = np.zeros((k + 1, k))
    pts[0, 0] = 1.0
    pts[1:, 0] = x12
    pts[1:, 1:] = math.sqrt(1.0 - x12 * x12) * simplex_vertices(k - 1)
    design = Design(pts, np.full(k + 1, 1.0 / (k + 1)))
    design.assert_on_ball()
    return design


def _orthogonal_to_direction(b: np.ndarray) -> np.ndarray:
    """Orthogonal Q with Q e1 = b, via a cancellation-safe reflection."""
    k = b.size
    e1 = np.zeros(k)
    e1[0] = 1.0
    if b[0] <= 0.0:
        return householder_matrix(e1 - b)  # reflects e1 onto b
    return -householder_matrix(e1 + b)  # reflection sends e1 to -b; negate


def rotated_design(fam: IntensityFamily, full: FullParameter,
                   tol: float = 1e-12) -> Design:
    """Optimal design for a general slope vector.

    Solves the canonical problem at beta1 = |slope| and tilts the standard
    simplex into the hyperplane at latitude x12 around the pole
    slope/|slope| with the Householder reflection about
    v = slope/|slope| + (1, ..., 1)/sqrt(k).  When that reflection
    degenerates (slope along the negative diagonal) any orthogonal map
    taking e1 to the pole serves instead, the criterion being blind to the
    simplex orientation.
    """
    bt = full.slope
    norm = float(np.linalg.norm(bt))
    if norm == 0.0:
        raise ValueError("slope vector is zero; use degenerate_design")
    k = full.k
    prob = CanonicalProblem(k, full.beta0, norm)
    sol = solve_x12(fam, prob, tol)
    x12 = sol.x12

    if k == 1:
        sign = 1.0 if bt[0] > 0 else -1.0
        return Design(np.array([[sign], [sign * x12]]), np.array([0.5, 0.5]))

    b = bt / norm
    v = b + np.full(k, 1.0 / math.sqrt(k))
    r = math.sqrt(1.0 - x12 * x12)
    if np.linalg.norm(v) >= _V_DEGENERATE:
        scale_shift = x12 + r / math.sqrt(k - 1)
        scale_h = math.sqrt(k) / math.sqrt(k - 1) * r
        cols = np.outer(b, np.ones(k)) * scale_shift + householder_matrix(v) * scale_h
        pts = np.vstack([b, cols.T])
    else:
        base = canonical_design(fam, prob, x12)
        pts = base.points @ _orthogonal_to_direction(b).T
    design = Design(pts, np.full(k + 1, 1.0 / (k + 1)))
    design.assert_on_ball()
    return design


def degenerate_design(k: int) -> Design:
    """Zero-slope optimum: regular simplex on the sphere, equal weights."""
    verts = simplex_vertices(int(k))
    design = Design(verts, np.full(k + 1, 1.0 / (k + 1)))
    design.assert_on_ball()
    return design


def design_record(design: Design, *, model: str, beta, x12: float,
                  certificate: dict | None) -> dict:
    """Assemble the wire-format dict for a solved design."""
    return {
        "k": design.k,
        "model": model,
        "beta": [float(b) for b in np.asarray(beta, dtype=float).ravel()],
        "x12": float(x12),
        "points": [[float(c) for c in p] for p in design.points],
        "weights": [float(w) for w in design.weights],
        "certificate": certificate,
    }


def design_from_record(record: dict) -> Design:
    """Rebuild the Design from a wire-format dict (floats bit-exact)."""
    design = Design(np.array(record["points"], dtype=float),
                    np.array(record["weights"], dtype=float))
    if design.k != int(record["k"]):
        raise ValueError("record field k disagrees with the point dimension")
    return design
