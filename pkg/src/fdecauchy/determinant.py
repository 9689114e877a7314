"""Brute-force and closed-form minimization of the solvability determinant.

Reduced to the unit interval, unique solvability of the two-point operator
family with weights bounded by A (positive part) and B (negative part)
hinges on the sign of a 2x2 determinant parametrized by the evaluation
points 0 <= tau1 <= tau2 <= 1 and the integrals

    alpha = I1(tau1),    alpha + beta = I1(tau2),

where I1 is the cumulative weight seen by the first evaluation point and
the complementary weight is I2(t) = (A - B)*t - I1(t).  With
P = A - B the determinant collapses to the affine expression

    delta = (1 - alpha) * (1 - P*tau2) + (alpha + beta) * (1 - P*tau1),

affine separately in alpha and beta over the admissible box

    -tau1*B <= alpha <= tau1*A,
    -(tau2 - tau1)*B <= beta <= (tau2 - tau1)*A.

The grid oracle exploits only that affinity (corner enumeration, no other
theory) and is the arbiter for the closed-form minimum and for the branch
threshold the closed form depends on.
"""

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .stepfun import StepFunction


@dataclass(frozen=True)
class DeterminantConfig:
    """One determinant evaluation point: the pair (tau1, tau2) and integrals."""

    alpha: float
    beta: float
    tau1: float
    tau2: float

    def __post_init__(self):
        for name in ("alpha", "beta", "tau1", "tau2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not 0.0 <= self.tau1 <= self.tau2 <= 1.0:
            raise ValueError("need 0 <= tau1 <= tau2 <= 1")

    def admissible(self, A, B, tol=1e-12):
        """Whether (alpha, beta) lies in the box carved out by the norms."""
        slack = tol * max(1.0, A, B)
        ok_a = -self.tau1 * B - slack <= self.alpha <= self.tau1 * A + slack
        gap = self.tau2 - self.tau1
        ok_b = -gap * B - slack <= self.beta <= gap * A + slack
        return bool(ok_a and ok_b)


@dataclass(frozen=True)
class MinimumReport:
    """Minimum of the determinant together with where and how it was found."""

    m_value: float
    argmin: DeterminantConfig
    method: str  # "analytic" or "grid"


def delta(config, A, B, validate=True):
    """Determinant value at one configuration, simplified affine form.

    With validate=True (default) the configuration must lie in the
    admissible box for (A, B); pass validate=False to evaluate the bare
    expression anyway (useful for probing the formula itself).
    """
    _require_pair(A, B)
    if validate and not config.admissible(A, B):
        raise ValueError("configuration outside the admissible box for (A, B)")
    # P*tau is expanded as A*tau - B*tau so the value matches the grid
    # kernel bit for bit at grid nodes (same rounding order).
    q1 = 1.0 - (A * config.tau1 - B * config.tau1)
    q2 = 1.0 - (A * config.tau2 - B * config.tau2)
    return (1.0 - config.alpha) * q2 + (config.alpha + config.beta) * q1


def delta_via_determinant(config, A, B):
    """Same value through the literal 2x2 determinant, as a cross-check.

    Expands det [[1 - I1(tau1), -I2(tau1)], [-I1(tau2), 1 - I2(tau2)]]
    with I1(tau1) = alpha, I1(tau2) = alpha + beta, I2(t) = P*t - I1(t).
    Agrees with delta() to roundoff; kept separate so the identity stays an
    observable fact rather than an assumption.
    """
    _require_pair(A, B)
    P = A - B
    i1_t1 = config.alpha
    i1_t2 = config.alpha + config.beta
    i2_t1 = P * config.tau1 - i1_t1
    i2_t2 = P * config.tau2 - i1_t2
    return (1.0 - i1_t1) * (1.0 - i2_t2) - i2_t1 * i1_t2


def _require_pair(A, B):
    if not (math.isfinite(A) and math.isfinite(B)):
        raise ValueError("norms must be finite")
    if A < 0 or B < 0:
        raise ValueError("norms must be nonnegative")


def branch_threshold(A, branch="vertex"):
    """B-threshold above which the closed-form minimum leaves the corner.

    Two candidates circulate for the same piecewise formula:

    * "vertex": (1 + sqrt(1 + 4A^2))/2, the B at which the minimizing tau1
      detaches from 0 (vertex of the corner-restricted quadratic enters the
      interval); certified against the grid oracle.
    * "alt": (1 + sqrt(1 + A^2))/2, a stated variant that disagrees on a
      thin strip; kept so the reconciliation scan has something to reject.
    """
    if branch == "vertex":
        return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * A * A))
    if branch == "alt":
        return 0.5 * (1.0 + math.sqrt(1.0 + A * A))
    raise ValueError(f"unknown branch {branch!r}")


def min_delta_analytic(A, B, branch="vertex"):
    """Closed-form minimum of the determinant over all configurations.

    For B <= A the minimum sits at the corner tau1=0, tau2=1, alpha=0,
    beta=-B with value 1 - A.  For B > A beyond the branch threshold the
    minimizing tau1 moves to the vertex 1/2 - B/(2(B^2-A^2)) and the value
    becomes ((2B-A)^2 - A^2 - (B^2-A^2-B+2A)^2) / (4(B^2-A^2)).

    Degenerate note: when A - B >= 1 the corner value 1 - A is an upper
    bound on the true (even more negative) minimum; both are nonpositive,
    so the solvability verdict is unaffected.
    """
    _require_pair(A, B)
    if B <= A or B <= branch_threshold(A, branch):
        config = DeterminantConfig(alpha=0.0, beta=-B, tau1=0.0, tau2=1.0)
        return MinimumReport(1.0 - A, config, "analytic")
    D = B * B - A * A
    inner = D - B + 2.0 * A
    value = ((2.0 * B - A) ** 2 - A * A - inner * inner) / (4.0 * D)
    tau1 = max(0.0, 0.5 - B / (2.0 * D))
    config = DeterminantConfig(alpha=A * tau1, beta=-B * (1.0 - tau1), tau1=tau1, tau2=1.0)
    return MinimumReport(value, config, "analytic")


@numba.njit(cache=True)
def _corner_scan_min(pp, pm, q):
    # pp[i], pm[i]: integrals of the two weight envelopes up to node i;
    # q[i] = 1 - (pp[i] - pm[i]).  Enumerates all node pairs i <= j and the
    # four (alpha, beta) corners; returns the smallest determinant value.
    n = q.shape[0]
    best = np.inf
    for i in range(n):
        a_lo = -pm[i]
        a_hi = pp[i]
        qi = q[i]
        s_lo = 1.0 - a_lo
        s_hi = 1.0 - a_hi
        for j in range(i, n):
            qj = q[j]
            b_lo = -(pm[j] - pm[i])
            b_hi = pp[j] - pp[i]
            d0 = s_lo * qj + (a_lo + b_lo) * qi
            d1 = s_lo * qj + (a_lo + b_hi) * qi
            d2 = s_hi * qj + (a_hi + b_lo) * qi
            d3 = s_hi * qj + (a_hi + b_hi) * qi
            m = min(min(d0, d1), min(d2, d3))
            if m < best:
                best = m
    return best


@numba.njit(cache=True)
def _corner_scan_argmin(pp, pm, q, target):
    # First (i, j, corner) whose value reproduces the known minimum, in the
    # fixed order i, then j, then corners (lo,lo), (lo,hi), (hi,lo), (hi,hi).
    # Same arithmetic as _corner_scan_min, so the equality is exact.
    n = q.shape[0]
    for i in range(n):
        a_lo = -pm[i]
        a_hi = pp[i]
        qi = q[i]
        s_lo = 1.0 - a_lo
        s_hi = 1.0 - a_hi
        for j in range(i, n):
            qj = q[j]
            b_lo = -(pm[j] - pm[i])
            b_hi = pp[j] - pp[i]
            if s_lo * qj + (a_lo + b_lo) * qi == target:
                return i, j, 0
            if s_lo * qj + (a_lo + b_hi) * qi == target:
                return i, j, 1
            if s_hi * qj + (a_hi + b_lo) * qi == target:
                return i, j, 2
            if s_hi * qj + (a_hi + b_hi) * qi == target:
                return i, j, 3
    return -1, -1, -1


def _grid_report(nodes, pp, pm):
    q = 1.0 - (pp - pm)
    best = float(_corner_scan_min(pp, pm, q))
    i, j, corner = _corner_scan_argmin(pp, pm, q, best)
    if i < 0:
        raise RuntimeError("argmin pass failed to reproduce the minimum")
    alpha = pp[i] if corner >= 2 else -pm[i]
    beta = (pp[j] - pp[i]) if corner % 2 == 1 else -(pm[j] - pm[i])
    config = DeterminantConfig(alpha=float(alpha), beta=float(beta),
                               tau1=float(nodes[i]), tau2=float(nodes[j]))
    return MinimumReport(best, config, "grid")


def min_delta_grid_general(p_plus, p_minus, n_tau):
    """Grid minimum for step-function weight envelopes on [0, 1].

    p_plus and p_minus are nonnegative StepFunction envelopes for the
    positive and negative operator weights.  Their breakpoints are merged
    into the uniform tau grid so every corner of every admissible box is
    visited exactly.
    """
    _check_envelope(p_plus, "p_plus")
    _check_envelope(p_minus, "p_minus")
    if not isinstance(n_tau, (int, np.integer)) or n_tau < 1:
        raise ValueError("n_tau must be a positive integer")
    nodes = np.arange(n_tau + 1) / n_tau
    nodes = np.union1d(nodes, np.union1d(p_plus.breaks, p_minus.breaks))
    pp = p_plus.integral(nodes)
    pm = p_minus.integral(nodes)
    return _grid_report(nodes, pp, pm)


def min_delta_grid(A, B, n_tau):
    """Grid minimum for constant envelopes, i.e. plain norm bounds A and B.

    Thin wrapper over min_delta_grid_general with constant step functions,
    so the two entry points cannot drift apart.  The minimum is
    non-increasing under grid doubling and always >= the analytic value
    (for A - B < 1).
    """
    _require_pair(A, B)
    return min_delta_grid_general(StepFunction.constant(A), StepFunction.constant(B), n_tau)


def _check_envelope(sf, name):
    if not isinstance(sf, StepFunction):
        raise ValueError(f"{name} must be a StepFunction")
    if sf.breaks[0] != 0.0 or sf.breaks[-1] != 1.0:
        raise ValueError(f"{name} must live on [0, 1]")
    if np.any(sf.values < 0.0):
        raise ValueError(f"{name} must be nonnegative")


@dataclass
class ThresholdReport:
    """Outcome of arbitrating the two branch-threshold candidates by grid."""

    certified: str | None
    checked: int
    mismatches: dict = field(default_factory=dict)
    banded: dict = field(default_factory=dict)


def reconcile_thresholds(a_lo=0.2, a_hi=0.9, b_lo=1.0, b_hi=1.6,
                         n_a=15, n_b=13, n_tau=2000, band_scale=1e-3):
    """Scan a rectangle of (A, B) and certify one branch threshold.

    For each lattice point the closed-form minimum is computed under both
    threshold candidates and its sign compared with the grid oracle's.
    Points where a candidate's |minimum| falls inside the boundary band
    band_scale * max(1, A+B) are skipped for that candidate (the grid sign
    is not trustworthy there).  A candidate with zero mismatches and a
    rival with at least one is certified.
    """
    mismatches = {"vertex": [], "alt": []}
    banded = {"vertex": 0, "alt": 0}
    checked = 0
    for A in np.linspace(a_lo, a_hi, n_a):
        for B in np.linspace(b_lo, b_hi, n_b):
            grid_positive = min_delta_grid(float(A), float(B), n_tau).m_value > 0.0
            checked += 1
            for branch in ("vertex", "alt"):
                m = min_delta_analytic(float(A), float(B), branch=branch).m_value
                if abs(m) < band_scale * max(1.0, A + B):
                    banded[branch] += 1
                    continue
                if (m > 0.0) != grid_positive:
                    mismatches[branch].append((float(A), float(B)))
    clean = [name for name in ("vertex", "alt") if not mismatches[name]]
    certified = clean[0] if len(clean) == 1 else None
    return ThresholdReport(certified=certified, checked=checked,
                           mismatches=mismatches, banded=banded)
