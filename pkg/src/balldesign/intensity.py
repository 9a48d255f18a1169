"""Intensity functions of generalized-linear and censored survival models.

The models handled here all share one structural feature: the elemental
Fisher information of an observation at x is lam(eta) * f(x) f(x)^T, where
eta is the linear predictor and lam is a scalar "intensity" (efficiency)
function.  This module is the catalogue of those intensity functions
(Poisson, negative binomial, three censoring schemes, plus the constant
linear-model baseline), their derivatives along the canonical first axis,
and numerical diagnostics for the four shape conditions under which the
two-point marginal solution downstream is unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "IntensityFamily",
    "CanonicalProblem",
    "ConditionCheck",
    "ConditionReport",
    "parse_family",
    "q",
    "log_deriv_ratio",
    "check_conditions",
]

KINDS = ("linear", "poisson", "negbin", "censor-t1", "censor-unif", "censor-exp")

# Finite-difference step and stencil for the diagnostics below.  Centered
# 5-point second derivative at h = 1e-5 keeps truncation ~h^4 while the
# roundoff floor is ~eps/h^2; both enter the curvature check's noise gate.
_FD_STEP = 1e-5


@dataclass(frozen=True)
class IntensityFamily:
    """One model family: which intensity function, and its fixed parameters.

    ``a`` is the negative-binomial overdispersion (variance mu + a*mu^2),
    ``c`` the deterministic censoring time (censor-t1) or the upper end of
    the uniform censoring window (censor-unif), ``rate`` the rate of the
    exponential censoring time (censor-exp).  Unused fields stay at 0.
    """

    kind: str
    a: float = 0.0
    c: float = 0.0
    rate: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown intensity family {self.kind!r}")
        if self.kind == "negbin" and not self.a >= 0:
            raise ValueError("negbin overdispersion a must be >= 0")
        if self.kind in ("censor-t1", "censor-unif") and not self.c > 0:
            raise ValueError("censoring time c must be > 0")
        if self.kind == "censor-exp" and not self.rate > 0:
            raise ValueError("censoring rate must be > 0")

    @classmethod
    def linear(cls) -> "IntensityFamily":
        return cls("linear")

    @classmethod
    def poisson(cls) -> "IntensityFamily":
        return cls("poisson")

    @classmethod
    def negbin(cls, a: float) -> "IntensityFamily":
        return cls("negbin", a=float(a))

    @classmethod
    def censor_type1(cls, c: float) -> "IntensityFamily":
        return cls("censor-t1", c=float(c))

    @classmethod
    def censor_uniform(cls, c: float) -> "IntensityFamily":
        return cls("censor-unif", c=float(c))

    @classmethod
    def censor_exp(cls, rate: float) -> "IntensityFamily":
        return cls("censor-exp", rate=float(rate))

    def label(self) -> str:
        """Round-trippable spec string, same grammar as `parse_family`."""
        if self.kind == "negbin":
            return f"negbin:a={self.a!r}"
        if self.kind in ("censor-t1", "censor-unif"):
            return f"{self.kind}:c={self.c!r}"
        if self.kind == "censor-exp":
            return f"censor-exp:rate={self.rate!r}"
        return self.kind

    # -- evaluation at the linear predictor ---------------------------------

    def intensity(self, eta):
        """lam(eta); scalar in, scalar out, arrays pass through elementwise."""
        eta_arr = np.atleast_1d(np.asarray(eta, dtype=float))
        out = self._intensity_arr(eta_arr)
        return float(out[0]) if np.isscalar(eta) or np.ndim(eta) == 0 else out

    def log_deriv(self, eta):
        """lam'(eta)/lam(eta), the logarithmic derivative of the intensity."""
        eta_arr = np.atleast_1d(np.asarray(eta, dtype=float))
        out = self._log_deriv_arr(eta_arr)
        return float(out[0]) if np.isscalar(eta) or np.ndim(eta) == 0 else out

    def _intensity_arr(self, eta: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", under="ignore"):
            if self.kind == "linear":
                return np.ones_like(eta)
            if self.kind == "poisson":
                return np.exp(eta)
            if self.kind == "negbin":
                # exp(eta)/(1 + a exp(eta)), written to survive eta >> 0
                return 1.0 / (np.exp(-eta) + self.a)
            if self.kind == "censor-t1":
                # P(event before fixed censor time c) = 1 - exp(-c exp(eta))
                return -np.expm1(-self.c * np.exp(eta))
            if self.kind == "censor-unif":
                return _censor_unif_q(self.c * np.exp(eta))
            # censor-exp: P(event before Exp(rate) censoring)
            return 1.0 / (1.0 + self.rate * np.exp(-eta))

    def _log_deriv_arr(self, eta: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", under="ignore"):
            if self.kind == "linear":
                return np.zeros_like(eta)
            if self.kind == "poisson":
                return np.ones_like(eta)
            if self.kind == "negbin":
                return 1.0 / (1.0 + self.a * np.exp(eta))
            if self.kind == "censor-t1":
                t = self.c * np.exp(eta)
                return t / np.expm1(t)
            if self.kind == "censor-unif":
                return _censor_unif_log_deriv(self.c * np.exp(eta))
            return 1.0 / (1.0 + np.exp(eta) / self.rate)


def _censor_unif_q(t: np.ndarray) -> np.ndarray:
    """1 - (1 - exp(-t))/t for t > 0, series-stable near t = 0.

    This is the event probability under uniform-[0, c] censoring with
    t = c*exp(eta): it increases from 0 to 1.  The naive expression
    cancels catastrophically for small t, so switch to the Taylor form
    t/2 - t^2/6 + t^3/24 - t^4/120 there.
    """
    out = np.empty_like(t)
    small = t < 1e-4
    ts = t[small]
    out[small] = ts / 2 - ts**2 / 6 + ts**3 / 24 - ts**4 / 120
    tl = t[~small]
    out[~small] = 1.0 + np.expm1(-tl) / tl
    return out


def _censor_unif_log_deriv(t: np.ndarray) -> np.ndarray:
    """d/d eta of log q for the uniform-censoring intensity, t = c*exp(eta).

    Equals ((1-e^-t) - t e^-t) / (t - (1-e^-t)); both numerator and
    denominator are ~t^2/2 near 0, handled by their Taylor quotients.
    """
    out = np.empty_like(t)
    small = t < 1e-3
    ts = t[small]
    num = 0.5 - ts / 3 + ts**2 / 8 - ts**3 / 30
    den = 0.5 - ts / 6 + ts**2 / 24 - ts**3 / 120
    out[small] = num / den
    tl = t[~small]
    out[~small] = (-np.expm1(-tl) - tl * np.exp(-tl)) / (tl + np.expm1(-tl))
    return out


@dataclass(frozen=True)
class CanonicalProblem:
    """The rotation-reduced design problem: dimension, intercept, slope norm.

    After rotating a general slope vector onto the first axis only its
    Euclidean norm beta1 >= 0 matters; the design region is the unit ball.
    """

    k: int
    beta0: float
    beta1: float

    def __post_init__(self):
        if not (isinstance(self.k, (int, np.integer)) and 1 <= self.k <= 64):
            raise ValueError("dimension k must be an integer in [1, 64]")
        if not self.beta1 >= 0:
            raise ValueError("slope norm beta1 must be >= 0")


def parse_family(spec: str) -> IntensityFamily:
    """Parse a family spec string.

    Grammar: ``poisson``, ``negbin:a=<float>``, ``censor-t1:c=<float>``,
    ``censor-unif:c=<float>``, ``censor-exp:rate=<float>``, ``linear``.
    """
    name, _, argpart = spec.strip().partition(":")
    name = name.lower()
    if name in ("poisson", "linear"):
        if argpart:
            raise ValueError(f"{name} takes no parameters, got {spec!r}")
        return IntensityFamily(name)
    if name not in KINDS:
        raise ValueError(f"unknown model {name!r} (expected one of {', '.join(KINDS)})")
    key, _, val = argpart.partition("=")
    expected = {"negbin": "a", "censor-t1": "c", "censor-unif": "c", "censor-exp": "rate"}[name]
    if key != expected or not val:
        raise ValueError(f"model {name!r} needs parameter {expected}=<float>, got {spec!r}")
    try:
        value = float(val)
    except ValueError:
        raise ValueError(f"bad numeric value in family spec {spec!r}") from None
    if name == "negbin":
        return IntensityFamily.negbin(value)
    if name == "censor-t1":
        return IntensityFamily.censor_type1(value)
    if name == "censor-unif":
        return IntensityFamily.censor_uniform(value)
    return IntensityFamily.censor_exp(value)


def _check_x1(x1) -> np.ndarray:
    x = np.asarray(x1, dtype=float)
    if np.any(x < -1.0) or np.any(x > 1.0):
        raise ValueError("x1 must lie in [-1, 1]")
    return x


def q(fam: IntensityFamily, prob: CanonicalProblem, x1):
    """Intensity along the canonical axis, q(x1) = lam(beta0 + beta1*x1)."""
    x = _check_x1(x1)
    return fam.intensity(prob.beta0 + prob.beta1 * x)


def log_deriv_ratio(fam: IntensityFamily, prob: CanonicalProblem, x1):
    """q'(x1)/q(x1) via the closed-form logarithmic derivative of lam."""
    x = _check_x1(x1)
    return prob.beta1 * fam.log_deriv(prob.beta0 + prob.beta1 * x)


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    first_violation_x: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class ConditionReport:
    positive: ConditionCheck
    increasing: ConditionCheck
    curvature: ConditionCheck
    log_deriv_monotone: ConditionCheck

    @property
    def checks(self) -> tuple[ConditionCheck, ...]:
        return (self.positive, self.increasing, self.curvature, self.log_deriv_monotone)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _reciprocal_second_deriv(fam: IntensityFamily, prob: CanonicalProblem,
                             x: np.ndarray) -> tuple[np.ndarray, float]:
    """5-point stencil for (1/q)'' at each x; also returns max |1/q| sampled."""
    h = _FD_STEP
    cols = []
    umax = 0.0
    for shift in (-2 * h, -h, 0.0, h, 2 * h):
        # stencil feet may poke outside [-1, 1]; lam is defined on all of R
        uvals = 1.0 / fam._intensity_arr(prob.beta0 + prob.beta1 * (x + shift))
        umax = max(umax, float(np.max(np.abs(uvals))))
        cols.append(uvals)
    um2, um1, u0, up1, up2 = cols
    upp = (-um2 + 16 * um1 - 30 * u0 + 16 * up1 - up2) / (12 * h * h)
    return upp, umax


def check_conditions(fam: IntensityFamily, prob: CanonicalProblem,
                     grid_n: int = 201) -> ConditionReport:
    """Sample the four shape conditions of the intensity on [-1, 1].

    Checked on an evenly spaced grid: q > 0; q' > 0; (1/q)'' strictly
    monotone (a grid-testable sufficient stand-in for injectivity); and
    q'/q non-increasing.  The curvature check compares consecutive
    finite-difference samples against a roundoff noise gate, so it loses
    power when beta1 is very small or when (1/q)'' is essentially flat.
    """
    if grid_n < 3:
        raise ValueError("grid_n must be >= 3")
    if not prob.beta1 > 0:
        raise ValueError("condition diagnostics require beta1 > 0")

    x = np.linspace(-1.0, 1.0, grid_n)
    eta = prob.beta0 + prob.beta1 * x
    qv = fam._intensity_arr(eta)
    ratio = prob.beta1 * fam._log_deriv_arr(eta)
    qprime = qv * ratio

    def first_bad(mask: np.ndarray) -> float | None:
        idx = np.flatnonzero(mask)
        return float(x[idx[0]]) if idx.size else None

    bad = ~(qv > 0)
    a1 = ConditionCheck("positive", not bad.any(), first_bad(bad),
                        "q > 0 on the grid" if not bad.any() else "q <= 0 found")

    bad = ~(qprime > 0)
    a2 = ConditionCheck("increasing", not bad.any(), first_bad(bad),
                        "q' > 0 on the grid" if not bad.any() else "q' <= 0 found")

    upp, umax = _reciprocal_second_deriv(fam, prob, x)
    # Roundoff in the second-derivative stencil is ~5 eps |u| / h^2; diffs
    # below that floor carry no sign information and are skipped.
    noise = 32 * np.finfo(float).eps * umax / _FD_STEP**2
    d = np.diff(upp)
    informative = np.abs(d) > noise
    di = d[informative]
    if di.size == 0:
        a3 = ConditionCheck("reciprocal_curvature", False, None,
                            "(1/q)'' flat to within noise; monotonicity undecidable")
    else:
        inc, dec = bool(np.all(di > 0)), bool(np.all(di < 0))
        if inc or dec:
            a3 = ConditionCheck("reciprocal_curvature", True, None,
                                "(1/q)'' strictly %s" % ("increasing" if inc else "decreasing"))
        else:
            sign = 1.0 if di[0] > 0 else -1.0
            wrong = informative.copy()
            wrong[informative] = sign * di < 0
            a3 = ConditionCheck("reciprocal_curvature", False, first_bad(wrong),
                                "(1/q)'' changes direction")

    tol = 1e-10 * max(1.0, float(np.max(np.abs(ratio))))
    bad_pairs = np.diff(ratio) > tol
    a4 = ConditionCheck("log_deriv_monotone", not bad_pairs.any(),
                        first_bad(np.concatenate([bad_pairs, [False]])),
                        "q'/q non-increasing" if not bad_pairs.any() else "q'/q increases")

    return ConditionReport(a1, a2, a3, a4)
