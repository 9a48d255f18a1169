"""Root-finding and Lambert W building blocks against scipy oracles."""

import math

import mpmath as mp
import numpy as np
import pytest

from balldesign.lambertw import BranchDomainError, lambert_w
from balldesign.roots import BracketError, bisect, shrinking_bracket


def w_reference(z: float, branch: int) -> float:
    """High-precision Lambert W oracle (scipy itself drifts near -1/e)."""
    with mp.workdps(50):
        return float(mp.lambertw(mp.mpf(z), branch))


def w_tolerance(z: float) -> float:
    """Conditioning-aware absolute tolerance.

    W has a square-root singularity at -1/e: w = -1 +- sqrt(2e*gap) with
    gap = z + 1/e, so an O(eps) perturbation of the argument moves w by
    ~e*eps/sqrt(2e*gap).  No double-precision evaluation can beat that.
    """
    gap = abs(z + math.exp(-1.0))
    return 1e-12 + 4e-15 / math.sqrt(max(gap, 1e-16))


def test_bisect_simple_root():
    root = bisect(lambda x: x * x - 2.0, 0.0, 2.0, tol=1e-14)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-13)


def test_bisect_endpoint_zero():
    assert bisect(lambda x: x, 0.0, 1.0) == 0.0
    assert bisect(lambda x: x - 1.0, 0.0, 1.0) == 1.0


def test_bisect_requires_sign_change():
    with pytest.raises(BracketError):
        bisect(lambda x: x * x + 1.0, -1.0, 1.0)


def test_bisect_machine_refinement():
    # a tiny tol drives the interval down to adjacent floats
    f = lambda x: math.tanh(3.0 * (x - 0.37))
    root = bisect(f, -1.0, 1.0, tol=1e-18)
    assert abs(root - 0.37) < 1e-15


def test_shrinking_bracket_finds_sign_change():
    f = lambda x: 5.0 - 2.0 * (1.0 + 2.0 * x) / (2.0 * (1.0 - x * x))
    a, b, fa, fb = shrinking_bracket(f, -1.0, 1.0)
    assert fa > 0 > fb
    root = bisect(f, a, b, fa, fb, tol=1e-14)
    assert f(root) == pytest.approx(0.0, abs=1e-10)


def test_shrinking_bracket_gives_up():
    with pytest.raises(BracketError):
        shrinking_bracket(lambda x: 1.0, -1.0, 1.0)


@pytest.mark.parametrize("z", np.concatenate([
    -np.exp(-1.0) + np.logspace(-12, -0.9, 25),
    np.linspace(-0.35, -1e-6, 25),
    [0.0, 1e-9, 0.1, 0.5],
    np.logspace(0, 12, 25),
]).tolist())
def test_w0_against_reference(z):
    expected = w_reference(z, 0)
    got = lambert_w(z, 0)
    assert got == pytest.approx(expected, rel=1e-12, abs=w_tolerance(z))
    assert got >= -1.0 - 1e-12


@pytest.mark.parametrize("z", np.concatenate([
    -np.exp(-1.0) + np.logspace(-12, -0.95, 25),
    np.linspace(-0.36, -1e-8, 25),
]).tolist())
def test_wm1_against_reference(z):
    expected = w_reference(z, -1)
    got = lambert_w(z, -1)
    assert got == pytest.approx(expected, rel=1e-12, abs=w_tolerance(z))
    assert got <= -1.0 + 1e-12


def test_w_branch_point():
    assert lambert_w(-math.exp(-1.0), 0) == -1.0
    assert lambert_w(-math.exp(-1.0), -1) == -1.0


def test_w_domain_errors():
    with pytest.raises(BranchDomainError):
        lambert_w(-0.5, 0)
    with pytest.raises(BranchDomainError):
        lambert_w(0.1, -1)
    with pytest.raises(BranchDomainError):
        lambert_w(0.0, -1)
    with pytest.raises(ValueError):
        lambert_w(0.5, 2)
