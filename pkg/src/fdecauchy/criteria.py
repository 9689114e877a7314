"""Solvability criteria for the scalar Cauchy problem with positive operators.

The problem under study is x'(t) = (T+ x)(t) - (T- x)(t) + f(t), x(a) = c,
with T+ and T- positive linear operators from C[a,b] to L-inf[a,b].  Unique
solvability for a whole operator family is decided from scalar data only:

* integral norms of the operator weights (check_theorem1), or
* the dimensionless products A = (b-a)*||T+|| and B = (b-a)*||T-|| built
  from ess-sup norms (everything else in this module).

The exact criterion in terms of (A, B) is positivity on [0, 1] of the
quadratic

    q(t) = (B^2 - A^2) * t^2 + (A^2 - B^2 + B) * t + 1 - A,

see quadratic_q / check_theorem2.  The remaining checks are simpler
sufficient or piecewise restatements whose mutual consistency is exercised
by the test suite.  All verdicts use strict inequalities: a margin of
exactly zero means "not uniquely solvable for the whole family", because
boundary values of the norms admit degenerate operators.
"""

import math
from dataclasses import dataclass

import numpy as np

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi


@dataclass(frozen=True)
class NormData:
    """Ess-sup norms of the positive and negative operator parts on [a, b]."""

    t_plus: float
    t_minus: float
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        for name in ("t_plus", "t_minus", "a", "b"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
        if self.t_plus < 0 or self.t_minus < 0:
            raise ValueError("operator norms must be nonnegative")
        if not self.b > self.a:
            raise ValueError("need b > a")

    def dimensionless(self):
        """The scale-free pair (A, B) = ((b-a)*t_plus, (b-a)*t_minus)."""
        width = self.b - self.a
        return width * self.t_plus, width * self.t_minus


@dataclass(frozen=True)
class Verdict:
    """Outcome of one criterion: solvable iff margin > 0."""

    solvable: bool
    margin: float
    criterion: str


def _require_norm_pair(A, B):
    if not (math.isfinite(A) and math.isfinite(B)):
        raise ValueError("norms must be finite")
    if A < 0 or B < 0:
        raise ValueError("norms must be nonnegative")


def check_theorem1(t_plus, t_minus):
    """Criterion in terms of integral norms of the operator weights.

    Here t_plus and t_minus are the integrals over [a, b] of (T+ 1) and
    (T- 1).  The family is uniquely solvable iff

        t_plus < 1   and   t_minus < 1 + 2*sqrt(1 - t_plus).

    The margin is the smaller slack of the two inequalities.
    """
    _require_norm_pair(t_plus, t_minus)
    slack_plus = 1.0 - t_plus
    slack_minus = 1.0 + 2.0 * math.sqrt(max(slack_plus, 0.0)) - t_minus
    margin = min(slack_plus, slack_minus)
    return Verdict(margin > 0.0, margin, "theorem1")


def check_corollary1(A, B):
    """Sufficient box criterion in the dimensionless sup-norm products.

    Same shape as check_theorem1 with (A, B) in place of the integral
    norms: A < 1 and B < 1 + 2*sqrt(1 - A).  Sufficient but not exact;
    check_theorem2 accepts strictly more (e.g. A=0.5, B=2.45).
    """
    _require_norm_pair(A, B)
    slack_a = 1.0 - A
    slack_b = 1.0 + 2.0 * math.sqrt(max(slack_a, 0.0)) - B
    margin = min(slack_a, slack_b)
    return Verdict(margin > 0.0, margin, "corollary1")


def quadratic_q(A, B, t):
    """The decision quadratic q(t), evaluated so endpoint values are exact.

    Algebraically q(t) = (B^2-A^2)t^2 + (A^2-B^2+B)t + 1-A on t in [0, 1].
    The grouping below returns exactly 1-A at t=0 and (1-A)+B at t=1, and
    degrades to an exact affine function when A == B.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    return (1.0 - A) + B * t + (B * B - A * A) * (t * (t - 1.0))


def min_q_on_unit_interval(A, B):
    """Minimum of quadratic_q over [0, 1] by endpoint-and-vertex analysis.

    Returns (t_star, q_star).  Candidates are the endpoints and, when the
    parabola opens upward (B > A) with vertex inside (0, 1), the vertex.
    Ties prefer the smaller t.
    """
    _require_norm_pair(A, B)
    candidates = [0.0, 1.0]
    D = B * B - A * A
    if D > 0.0:
        t_vertex = 0.5 - B / (2.0 * D)
        if 0.0 < t_vertex < 1.0:
            candidates.append(t_vertex)
    best_t, best_q = None, math.inf
    for t in sorted(candidates):
        q = quadratic_q(A, B, t)
        if q < best_q:
            best_t, best_q = t, q
    return best_t, best_q


def check_theorem2(A, B):
    """Exact criterion: solvable iff q(t) > 0 for every t in [0, 1]."""
    _, q_star = min_q_on_unit_interval(A, B)
    return Verdict(q_star > 0.0, q_star, "theorem2")


def check_cor2_cond1(A, B):
    """Piecewise closed-form restatement of the exact criterion, first form.

    Below the branch threshold (1 + sqrt(1 + A^2))/2 the condition is just
    A < 1 (margin 1 - A); above it the margin is the quartic expression

        (2B - A)^2 - A^2 - (B^2 - A^2 - B + 2A)^2.

    The threshold here is kept exactly as stated in this form even though
    the reconciliation scan (determinant module) certifies the variant
    (1 + sqrt(1 + 4A^2))/2 as the sign-consistent one; the two disagree on
    a thin strip, which is the point of keeping both available.
    """
    _require_norm_pair(A, B)
    threshold = 0.5 * (1.0 + math.sqrt(1.0 + A * A))
    if B <= threshold:
        margin = 1.0 - A
    else:
        inner = B * B - A * A - B + 2.0 * A
        margin = (2.0 * B - A) ** 2 - A * A - inner * inner
        if A >= 1.0:
            # The discriminant expression alone is not a certificate here;
            # q(0) = 1 - A already fails, so cap the margin accordingly.
            margin = min(margin, 1.0 - A)
    return Verdict(margin > 0.0, margin, "cor2_cond1")


def _scan_then_golden(f, lo, hi, samples=10001, width_tol=1e-10):
    """Global scan on a uniform grid, then golden-section refinement.

    f must accept numpy arrays.  The scan localizes the minimum, golden
    section shrinks the surrounding bracket to width_tol.  Returns the best
    (t, f(t)) actually evaluated, so the result never exceeds the scan
    minimum.
    """
    ts = np.linspace(lo, hi, samples)
    fs = f(ts)
    k = int(np.argmin(fs))
    best_t, best_f = float(ts[k]), float(fs[k])

    a = float(ts[max(k - 1, 0)])
    b = float(ts[min(k + 1, samples - 1)])
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = float(f(c))
    fd = float(f(d))
    while b - a > width_tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = float(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = float(f(d))
        if fc < best_f:
            best_t, best_f = c, fc
        if fd < best_f:
            best_t, best_f = d, fd
    return best_t, best_f


def bmax_cond2(A):
    """Largest admissible B for a fixed A in [0, 1), second piecewise form.

    For each t in (0, 1) the quadratic is positive iff B stays below the
    positive root of w*B^2 - t*B - (1 - A + A^2*w) with w = t*(1-t); the
    supremum over the family is the minimum of that root over t:

        bmax(A) = min_t [ t + sqrt(t^2 + 4w(1-A) + 4w^2 A^2) ] / (2w).

    The radicand is a sum of nonnegative terms for A <= 1, so the root is
    always real.  Minimized numerically (scan plus golden section); e.g.
    bmax(0) = 3 at t = 1/3.
    """
    if not math.isfinite(A):
        raise ValueError("A must be finite")
    if not 0.0 <= A < 1.0:
        raise ValueError("bmax_cond2 requires 0 <= A < 1")

    def root(t):
        w = t * (1.0 - t)
        rad = t * t + 4.0 * w * (1.0 - A) + 4.0 * w * w * (A * A)
        return (t + np.sqrt(rad)) / (2.0 * w)

    _, value = _scan_then_golden(root, 1e-6, 1.0 - 1e-6)
    return value


def amax_cond3(B):
    """Largest admissible A for a fixed B >= 0, third piecewise form.

    Returns 1 for B <= (1 + sqrt(5))/2: there the quadratic admits every
    A < 1, which is already forced by q(0) = 1 - A.  For larger B, each t
    with nonnegative radicand caps A at the smaller root of
    w*A^2 - A + (1 + t*B - w*B^2); t-values with negative radicand impose
    no constraint and are skipped.
    """
    if not math.isfinite(B):
        raise ValueError("B must be finite")
    if not 0.0 <= B < 3.0:
        raise ValueError("amax_cond3 requires 0 <= B < 3; no A is admissible beyond")
    if B <= 0.5 * (1.0 + math.sqrt(5.0)):
        return 1.0

    def smaller_root(t):
        w = t * (1.0 - t)
        rad = (2.0 * w * B - t) ** 2 - (1.0 - t) * (3.0 * t - 1.0)
        rad = np.asarray(rad, dtype=float)
        out = np.where(rad >= 0.0, (1.0 - np.sqrt(np.maximum(rad, 0.0))) / (2.0 * w), np.inf)
        return out if out.ndim else float(out)

    _, value = _scan_then_golden(smaller_root, 1e-6, 1.0 - 1e-6)
    return value


def check_cor2_cond2(A, B):
    """Verdict form of bmax_cond2: solvable iff A < 1 and B < bmax(A)."""
    _require_norm_pair(A, B)
    if A >= 1.0:
        return Verdict(False, 1.0 - A, "cor2_cond2")
    margin = bmax_cond2(A) - B
    return Verdict(margin > 0.0, margin, "cor2_cond2")


def check_cor2_cond3(A, B):
    """Verdict form of amax_cond3: solvable iff A < amax(B).

    amax itself is only defined for B < 3; past that the admissible region
    is empty, so the verdict extends continuously with amax treated as 0.
    """
    _require_norm_pair(A, B)
    if B >= 3.0:
        return Verdict(False, -A - (B - 3.0), "cor2_cond3")
    margin = amax_cond3(B) - A
    return Verdict(margin > 0.0, margin, "cor2_cond3")
