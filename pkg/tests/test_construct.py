"""Geometry of the constructed designs: simplices, rotations, serialization."""

import json
import math

import numpy as np
import pytest

from balldesign import (CanonicalProblem, Design, FullParameter,
                        canonical_design, degenerate_design,
                        design_from_record, design_record, householder_matrix,
                        info_matrix_discrete, IntensityFamily, poisson_x12,
                        rotated_design, simplex_vertices, solve_x12)

POISSON = IntensityFamily.poisson()


def assert_design_valid(design, k):
    assert design.points.shape == (design.n_points, k)
    assert np.all(design.weights > 0)
    assert abs(math.fsum(design.weights.tolist()) - 1.0) <= 1e-15
    assert np.max(np.abs(np.linalg.norm(design.points, axis=1) - 1.0)) < 1e-12


# --- simplex vertices ---------------------------------------------------------

def test_simplex_d1():
    v = simplex_vertices(1)
    assert v.tolist() == [[1.0], [-1.0]]


@pytest.mark.parametrize("d", [1, 2, 3, 4, 8, 16])
def test_simplex_gram(d):
    v = simplex_vertices(d)
    gram = v @ v.T
    assert np.max(np.abs(np.diag(gram) - 1.0)) < 1e-14
    off = gram - np.eye(d + 1) * (1.0 + 1.0 / d)
    assert np.max(np.abs(off + 1.0 / d)) < 1e-14


def test_simplex_deterministic():
    a, b = simplex_vertices(5), simplex_vertices(5)
    assert np.array_equal(a, b)
    assert np.allclose(a[0], np.eye(5)[0])


def test_simplex_rejects_bad_dimension():
    with pytest.raises(ValueError):
        simplex_vertices(0)


# --- canonical designs --------------------------------------------------------

def test_canonical_k1():
    prob = CanonicalProblem(1, 0.0, 2.0)
    d = canonical_design(POISSON, prob, poisson_x12(1, 2.0))
    assert d.points.tolist() == [[1.0], [0.0]]
    assert d.weights.tolist() == [0.5, 0.5]


def test_canonical_k2_equilateral():
    prob = CanonicalProblem(2, 0.0, 1e-9)
    d = canonical_design(POISSON, prob, -0.5)
    assert_design_valid(d, 2)
    expected = {(1.0, 0.0), (-0.5, math.sqrt(3) / 2), (-0.5, -math.sqrt(3) / 2)}
    got = {tuple(np.round(p, 12)) for p in d.points}
    assert got == {tuple(np.round(e, 12)) for e in expected}


def test_canonical_k3_equidistant_ring():
    x12 = 0.60948
    d = canonical_design(POISSON, CanonicalProblem(3, 0.0, 3.0), x12)
    assert_design_valid(d, 3)
    ring = d.points[1:]
    dists = [np.linalg.norm(ring[i] - ring[j])
             for i in range(3) for j in range(i + 1, 3)]
    assert max(dists) - min(dists) < 1e-12
    assert np.max(np.abs(ring[:, 0] - x12)) < 1e-15


def test_canonical_rejects_bad_x12():
    prob = CanonicalProblem(2, 0.0, 1.0)
    for bad in (1.0, -1.5, 2.0):
        with pytest.raises(ValueError):
            canonical_design(POISSON, prob, bad)
    with pytest.raises(ValueError):
        canonical_design(POISSON, prob, -1.0)  # collapses the simplex
    # ... but -1 is a legitimate boundary level in one dimension
    d = canonical_design(POISSON, CanonicalProblem(1, 0.0, 0.5), -1.0)
    assert d.points.tolist() == [[1.0], [-1.0]]


# --- rotated designs ----------------------------------------------------------

def test_rotated_reproduces_published_points():
    full = FullParameter(np.array([0.0, 1.0, 2.0, 2.0]))
    d = rotated_design(POISSON, full)
    assert_design_valid(d, 3)
    expected = np.array([
        [1 / 3, 2 / 3, 2 / 3],
        [0.9506, 0.2195, 0.2195],
        [-0.1706, 0.9852, 0.0143],
        [-0.1706, 0.0143, 0.9852],
    ])
    # match rows up to permutation of the simplex points
    used = set()
    for row in expected:
        dists = np.linalg.norm(d.points - row, axis=1)
        j = int(np.argmin(dists))
        assert dists[j] < 5e-4 * math.sqrt(3) and j not in used
        used.add(j)


def test_rotated_along_first_axis_matches_canonical():
    full = FullParameter(np.array([0.2, 2.0, 0.0, 0.0]))
    prob = CanonicalProblem(3, 0.2, 2.0)
    rot = rotated_design(POISSON, full)
    canon = canonical_design(POISSON, prob, solve_x12(POISSON, prob).x12)
    m_rot = info_matrix_discrete(POISSON, full, rot).m
    m_canon = info_matrix_discrete(POISSON, full, canon).m
    assert np.max(np.abs(m_rot - m_canon)) < 1e-12


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_rotated_geometry_random_slopes(k):
    rng = np.random.default_rng(1234 + k)
    for _ in range(5):
        bt = rng.normal(size=k)
        full = FullParameter(np.concatenate([[0.3], bt]))
        prob = CanonicalProblem(k, 0.3, float(np.linalg.norm(bt)))
        x12 = solve_x12(POISSON, prob).x12
        d = rotated_design(POISSON, full)
        assert_design_valid(d, k)
        pole = bt / np.linalg.norm(bt)
        assert np.linalg.norm(d.points[0] - pole) < 1e-12
        inner = d.points[1:] @ pole
        assert np.max(np.abs(inner - x12)) < 1e-12


def test_rotated_k1_positive_slope_is_canonical():
    full = FullParameter(np.array([0.0, 2.0]))
    d = rotated_design(POISSON, full)
    assert d.points.tolist() == [[1.0], [0.0]]
    assert d.weights.tolist() == [0.5, 0.5]


def test_rotated_k1_negative_slope_mirrors():
    full = FullParameter(np.array([0.0, -2.0]))
    d = rotated_design(POISSON, full)
    assert d.points.tolist() == [[-1.0], [-0.0]]


def test_rotated_degenerate_diagonal_slope():
    # slope along the negative diagonal makes the reflection vector vanish;
    # the fallback must still deliver the right geometry
    k = 3
    bt = -np.ones(k) / math.sqrt(k)
    full = FullParameter(np.concatenate([[0.0], 2.0 * bt]))
    prob = CanonicalProblem(k, 0.0, 2.0)
    x12 = solve_x12(POISSON, prob).x12
    d = rotated_design(POISSON, full)
    assert_design_valid(d, k)
    assert np.linalg.norm(d.points[0] - bt) < 1e-12
    assert np.max(np.abs(d.points[1:] @ bt - x12)) < 1e-12


def test_rotated_near_degenerate_slope():
    k = 3
    pole = -np.ones(k) / math.sqrt(k)
    pole = pole + np.array([1e-5, 0.0, -1e-5])
    pole /= np.linalg.norm(pole)
    full = FullParameter(np.concatenate([[0.0], 2.0 * pole]))
    x12 = solve_x12(POISSON, CanonicalProblem(k, 0.0, 2.0)).x12
    d = rotated_design(POISSON, full)
    assert_design_valid(d, k)
    assert np.max(np.abs(d.points[1:] @ pole - x12)) < 1e-12


def test_rotated_rejects_zero_slope():
    with pytest.raises(ValueError):
        rotated_design(POISSON, FullParameter(np.array([0.0, 0.0, 0.0])))


def test_rotation_invariance_of_determinant():
    rng = np.random.default_rng(7)
    for k in (2, 3, 4):
        bt = rng.normal(size=k)
        full = FullParameter(np.concatenate([[0.1], bt]))
        prob = CanonicalProblem(k, 0.1, float(np.linalg.norm(bt)))
        canon_full = FullParameter(
            np.concatenate([[0.1], [np.linalg.norm(bt)], np.zeros(k - 1)]))
        d_rot = rotated_design(POISSON, full)
        d_can = canonical_design(POISSON, prob, solve_x12(POISSON, prob).x12)
        det_rot = info_matrix_discrete(POISSON, full, d_rot).det()
        det_can = info_matrix_discrete(POISSON, canon_full, d_can).det()
        assert det_rot == pytest.approx(det_can, rel=1e-10)


# --- householder --------------------------------------------------------------

def test_householder_properties():
    rng = np.random.default_rng(11)
    for k in (2, 3, 5, 8):
        v = rng.normal(size=k)
        h = householder_matrix(v)
        assert np.max(np.abs(h @ h.T - np.eye(k))) < 1e-12
        assert np.max(np.abs(h - h.T)) < 1e-14
        assert np.linalg.det(h) == pytest.approx(-1.0, abs=1e-12)
    with pytest.raises(ValueError):
        householder_matrix(np.zeros(3))


# --- degenerate design ----------------------------------------------------------

def test_degenerate_k1():
    d = degenerate_design(1)
    assert d.points.tolist() == [[1.0], [-1.0]]
    assert d.weights.tolist() == [0.5, 0.5]


def test_degenerate_k2_equilateral_triangle():
    d = degenerate_design(2)
    assert_design_valid(d, 2)
    gram = d.points @ d.points.T
    assert np.max(np.abs(gram[~np.eye(3, dtype=bool)] + 0.5)) < 1e-14


def test_degenerate_k3_tetrahedron():
    d = degenerate_design(3)
    assert_design_valid(d, 3)
    gram = d.points @ d.points.T
    assert np.max(np.abs(gram[~np.eye(4, dtype=bool)] + 1.0 / 3.0)) < 1e-14


# --- Design container and serialization ----------------------------------------

def test_design_validation():
    with pytest.raises(ValueError):
        Design(np.array([[1.0], [0.0]]), np.array([0.5, -0.5]))
    with pytest.raises(ValueError):
        Design(np.array([[1.0], [0.0]]), np.array([0.7, 0.7]))
    with pytest.raises(ValueError):
        Design(np.array([[1.0], [0.0]]), np.array([1.0]))
    with pytest.raises(ValueError):
        Design(np.array([[2.0, 0.0]]), np.array([1.0])).assert_on_ball()


def test_record_round_trip_bitwise():
    full = FullParameter(np.array([0.0, 1.0, 2.0, 2.0]))
    d = rotated_design(POISSON, full)
    rec = design_record(d, model="poisson", beta=full.beta,
                        x12=poisson_x12(3, 3.0), certificate=None)
    assert set(rec) == {"k", "model", "beta", "x12", "points", "weights",
                        "certificate"}
    text = json.dumps(rec)
    back = json.loads(text)
    d2 = design_from_record(back)
    assert np.array_equal(d.points, d2.points)
    assert np.array_equal(d.weights, d2.weights)
    assert back["x12"] == rec["x12"]
    assert json.dumps(back) == text


def test_record_dimension_check():
    d = degenerate_design(2)
    rec = design_record(d, model="linear", beta=[0.0, 0.0, 0.0], x12=-0.5,
                        certificate=None)
    rec["k"] = 3
    with pytest.raises(ValueError):
        design_from_record(rec)


def test_full_parameter_accessors():
    full = FullParameter(np.array([1.0, 3.0, 4.0]))
    assert full.k == 2
    assert full.beta0 == 1.0
    assert full.slope.tolist() == [3.0, 4.0]
    prob = full.canonical()
    assert prob.beta1 == pytest.approx(5.0)
    with pytest.raises(ValueError):
        FullParameter(np.array([1.0]))
