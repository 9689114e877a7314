"""Reduced two-point problems on [0, 1]: solving, null vectors, extremals.

A two-point problem is x'(t) = p1(t)*x(tau1) + p2(t)*x(tau2) + f(t) with
x(0) = c, all weights step functions.  Integrating once turns it into a
2x2 linear system for the unknowns x(tau1), x(tau2); its determinant is
the same object the determinant module minimizes, so boundary
configurations found there can be realized here as honest problems with a
nontrivial kernel, and re-expanded into saturated positive operator pairs.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .determinant import DeterminantConfig, delta, min_delta_analytic
from .stepfun import PiecewiseLinear, StepFunction, merge_breaks, two_piece

SINGULAR_TOL = 1e-12


class SingularProblem(Exception):
    """Raised when the two-point system is singular; carries the determinant."""

    def __init__(self, delta_value):
        super().__init__(f"two-point system is singular (delta = {delta_value:.3e})")
        self.delta = delta_value


class NotOnBoundary(ValueError):
    """Raised when a counterexample is requested at solvable (A, B)."""


def _check_unit_interval(sf, name):
    if not isinstance(sf, StepFunction):
        raise ValueError(f"{name} must be a StepFunction")
    if sf.breaks[0] != 0.0 or sf.breaks[-1] != 1.0:
        raise ValueError(f"{name} must be defined on [0, 1]")


@dataclass
class TwoPointProblem:
    """Two evaluation points, three step-function weights, initial value c."""

    tau1: float
    tau2: float
    c: float
    p1: StepFunction
    p2: StepFunction
    f: StepFunction

    def __post_init__(self):
        if not (math.isfinite(self.tau1) and math.isfinite(self.tau2) and math.isfinite(self.c)):
            raise ValueError("tau1, tau2, c must be finite")
        if not 0.0 <= self.tau1 <= self.tau2 <= 1.0:
            raise ValueError("need 0 <= tau1 <= tau2 <= 1")
        _check_unit_interval(self.p1, "p1")
        _check_unit_interval(self.p2, "p2")
        _check_unit_interval(self.f, "f")

    def system_matrix(self):
        i1_t1 = self.p1.integral(self.tau1)
        i1_t2 = self.p1.integral(self.tau2)
        i2_t1 = self.p2.integral(self.tau1)
        i2_t2 = self.p2.integral(self.tau2)
        return np.array([[1.0 - i1_t1, -i2_t1], [-i1_t2, 1.0 - i2_t2]])


def integral(sf, t):
    """Cumulative integral of a step function from 0 to t."""
    return sf.integral(t)


def problem_delta(prob):
    """Determinant of the problem's 2x2 system, from exact step integrals."""
    m = prob.system_matrix()
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def solve_two_point(prob):
    """Unique piecewise-linear solution, or SingularProblem if |delta| <= 1e-12.

    Solves the 2x2 system for v1 = x(tau1), v2 = x(tau2) by Cramer's rule,
    then reconstructs x(t) = c + v1*I1(t) + v2*I2(t) + F(t) on the merged
    breakpoints of the three weights.
    """
    m = prob.system_matrix()
    det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if abs(det) <= SINGULAR_TOL:
        raise SingularProblem(det)
    rhs1 = prob.c + prob.f.integral(prob.tau1)
    rhs2 = prob.c + prob.f.integral(prob.tau2)
    v1 = (rhs1 * m[1, 1] - m[0, 1] * rhs2) / det
    v2 = (m[0, 0] * rhs2 - rhs1 * m[1, 0]) / det
    breaks = merge_breaks(prob.p1, prob.p2, prob.f)
    values = prob.c + v1 * prob.p1.integral(breaks) + v2 * prob.p2.integral(breaks) \
        + prob.f.integral(breaks)
    return PiecewiseLinear(breaks, values)


def homogeneous_nullspace(prob, tol=SINGULAR_TOL):
    """Null vector (x(tau1), x(tau2)) of a singular homogeneous problem.

    Requires f identically zero and c = 0.  Returns None when the system is
    regular (|delta| > tol).  The vector is scaled to unit max-norm with its
    last nonzero component positive.
    """
    if not prob.f.is_zero() or prob.c != 0.0:
        raise ValueError("nullspace is defined for the homogeneous problem only")
    m = prob.system_matrix()
    det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if abs(det) > tol:
        return None
    cand_a = np.array([m[0, 1], -m[0, 0]])
    cand_b = np.array([m[1, 1], -m[1, 0]])
    v = cand_a if np.max(np.abs(cand_a)) >= np.max(np.abs(cand_b)) else cand_b
    scale = np.max(np.abs(v))
    if scale == 0.0:
        return (1.0, 0.0)  # zero matrix: every vector is a null vector
    v = v / scale
    nonzero = np.nonzero(v)[0]
    if v[nonzero[-1]] < 0:
        v = -v
    return (float(v[0]), float(v[1]))


def homogeneous_solution(prob, coeffs):
    """Kernel element x(t) = v1*I1(t) + v2*I2(t) for a null vector (v1, v2)."""
    v1, v2 = coeffs
    breaks = merge_breaks(prob.p1, prob.p2, prob.f)
    values = v1 * prob.p1.integral(breaks) + v2 * prob.p2.integral(breaks)
    return PiecewiseLinear(breaks, values)


def residual(prob, x, n_samples=200):
    """Max-norm defect of x as a solution of the problem.

    Samples x'(t) - p1(t)*x(tau1) - p2(t)*x(tau2) - f(t) at midpoints of
    the union of all breakpoints refined by a uniform grid of n_samples
    cells, plus checks the initial condition.
    """
    breaks = merge_breaks(prob.p1, prob.p2, prob.f, x)
    breaks = np.union1d(breaks, np.arange(n_samples + 1) / n_samples)
    mids = 0.5 * (breaks[:-1] + breaks[1:])
    v1 = x(prob.tau1)
    v2 = x(prob.tau2)
    defect = x.slope_at(mids) - prob.p1(mids) * v1 - prob.p2(mids) * v2 - prob.f(mids)
    return max(float(np.max(np.abs(defect))), abs(x(0.0) - prob.c))


def construct_counterexample(A, B):
    """Homogeneous problem with a nontrivial kernel at non-solvable (A, B).

    Requires the analytic minimum to be <= 0, i.e. (A, B) on or past the
    solvability boundary; raises NotOnBoundary otherwise.  The construction
    starts from the analytic argmin corner and, when the minimum is
    strictly negative, shrinks the trailing weight by bisection (60 steps)
    until the determinant vanishes to within 1e-13.
    """
    report = min_delta_analytic(A, B)
    if report.m_value > 0.0:
        raise NotOnBoundary(f"(A, B) = ({A}, {B}) is solvable; no counterexample exists")

    P = A - B
    if B <= A - 1.0:
        # No bisection bracket in this regime; collapse both evaluation
        # points onto tau = 1/(A-B), where the determinant is 1 - P*tau.
        tau = 1.0 / (A - B)
        p1 = StepFunction.constant(-B)
        p2 = StepFunction.constant(A)
        return TwoPointProblem(tau1=tau, tau2=tau, c=0.0, p1=p1, p2=p2,
                               f=StepFunction.constant(0.0))

    tau1 = report.argmin.tau1
    alpha = A * tau1

    def det_at(lam):
        beta = -lam * B * (1.0 - tau1)
        return delta(DeterminantConfig(alpha, beta, tau1, 1.0), A, B)

    lam = 1.0
    d1 = det_at(1.0)
    if abs(d1) > 1e-13:
        if d1 > 0.0:
            raise RuntimeError("determinant positive at the analytic argmin")
        lo, hi = 0.0, 1.0  # det_at(0) > 0 >= det_at(1) here
        for _ in range(60):
            lam = 0.5 * (lo + hi)
            if det_at(lam) > 0.0:
                lo = lam
            else:
                hi = lam
        lam = 0.5 * (lo + hi)
        if abs(det_at(lam)) > 1e-13:
            raise RuntimeError("bisection failed to pin the determinant to zero")

    p1 = two_piece(tau1, A, -lam * B)
    p2 = two_piece(tau1, -B, P + lam * B)
    return TwoPointProblem(tau1=tau1, tau2=1.0, c=0.0, p1=p1, p2=p2,
                           f=StepFunction.constant(0.0))


@dataclass
class FullOperatorPair:
    """Positive operator pair realizing a two-point problem.

    Each operator acts as (T x)(t) = at_tau1(t)*x(tau1) + at_tau2(t)*x(tau2)
    + at_zero(t)*x(0); all six coefficient functions are nonnegative step
    functions.
    """

    tau1: float
    tau2: float
    plus_at_tau1: StepFunction
    plus_at_tau2: StepFunction
    plus_at_zero: StepFunction
    minus_at_tau1: StepFunction
    minus_at_tau2: StepFunction
    minus_at_zero: StepFunction

    def plus_applied_to_one(self):
        return self.plus_at_tau1 + self.plus_at_tau2 + self.plus_at_zero

    def minus_applied_to_one(self):
        return self.minus_at_tau1 + self.minus_at_tau2 + self.minus_at_zero


def saturate_operators(prob, A, B, tol=1e-9):
    """Split a counterexample's weights into saturated positive operators.

    Decomposes p1 = p1+ - p1- pointwise; T+ carries p1+ at tau1 and the
    complement A - p1+ at tau2, T- carries p1- at tau1 and B - p1- at tau2,
    so (T+ 1) = A and (T- 1) = B hold identically.  Requires
    p2 = (A - B) - p1 and -B <= p1 <= A (within tol).
    """
    if A < 0 or B < 0:
        raise ValueError("norms must be nonnegative")
    breaks = merge_breaks(prob.p1, prob.p2)
    v1 = prob.p1.values_on(breaks)
    v2 = prob.p2.values_on(breaks)
    if np.max(np.abs(v1 + v2 - (A - B))) > tol:
        raise ValueError("weights do not sum to A - B; not a saturated family member")
    if np.min(v1) < -B - tol or np.max(v1) > A + tol:
        raise ValueError("p1 leaves the band [-B, A]")

    p1_pos = prob.p1.positive_part()
    p1_neg = prob.p1.negative_part()
    zero = StepFunction.constant(0.0)

    def complement(norm, part):
        rest = norm - part
        values = rest.values
        if np.min(values) < -tol:
            raise ValueError("operator coefficient went negative")
        return StepFunction(rest.breaks, np.maximum(values, 0.0))

    return FullOperatorPair(
        tau1=prob.tau1, tau2=prob.tau2,
        plus_at_tau1=p1_pos, plus_at_tau2=complement(A, p1_pos), plus_at_zero=zero,
        minus_at_tau1=p1_neg, minus_at_tau2=complement(B, p1_neg), minus_at_zero=zero,
    )


# ---------------------------------------------------------------------------
# JSON interchange.  Floats are rendered with 17 significant digits so files
# round-trip bit for bit.

def _fmt(x):
    if isinstance(x, bool):
        raise TypeError("no booleans in this format")
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _render(obj):
    if isinstance(obj, dict):
        items = ", ".join(f'"{k}": {_render(v)}' for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_render(v) for v in obj) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _fmt(obj)


def _step_to_obj(sf):
    return {"breaks": list(sf.breaks), "values": list(sf.values)}


def problem_to_json(prob, extra=None):
    """Serialize a problem; extra key/value pairs are appended verbatim."""
    obj = {
        "tau1": prob.tau1, "tau2": prob.tau2, "c": prob.c,
        "p1": _step_to_obj(prob.p1), "p2": _step_to_obj(prob.p2),
        "f": _step_to_obj(prob.f),
    }
    if extra:
        obj.update(extra)
    return _render(obj) + "\n"


def _number_list(obj, where):
    if not isinstance(obj, list) or not all(isinstance(v, (int, float)) for v in obj):
        raise ValueError(f"field '{where}' must be a list of numbers")
    return np.array(obj, dtype=float)


def _step_from_obj(obj, where):
    if not isinstance(obj, dict):
        raise ValueError(f"field '{where}' must be an object with breaks and values")
    for key in ("breaks", "values"):
        if key not in obj:
            raise ValueError(f"field '{where}.{key}' is missing")
    try:
        return StepFunction(_number_list(obj["breaks"], f"{where}.breaks"),
                            _number_list(obj["values"], f"{where}.values"))
    except ValueError as exc:
        raise ValueError(f"field '{where}': {exc}") from exc


def problem_from_json(text):
    """Parse a problem file; unknown top-level fields are ignored."""
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError("problem JSON must be an object")
    for key in ("tau1", "tau2", "c", "p1", "p2", "f"):
        if key not in obj:
            raise ValueError(f"field '{key}' is missing")
    for key in ("tau1", "tau2", "c"):
        if not isinstance(obj[key], (int, float)) or isinstance(obj[key], bool):
            raise ValueError(f"field '{key}' must be a number")
    return TwoPointProblem(
        tau1=float(obj["tau1"]), tau2=float(obj["tau2"]), c=float(obj["c"]),
        p1=_step_from_obj(obj["p1"], "p1"),
        p2=_step_from_obj(obj["p2"], "p2"),
        f=_step_from_obj(obj["f"], "f"),
    )


def solution_to_json(x, extra=None):
    obj = {"breaks": list(x.breaks), "values": list(x.values)}
    if extra:
        obj.update(extra)
    return _render(obj) + "\n"


def solution_from_json(text):
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError("solution JSON must be an object")
    for key in ("breaks", "values"):
        if key not in obj:
            raise ValueError(f"field '{key}' is missing")
    return PiecewiseLinear(_number_list(obj["breaks"], "breaks"),
                           _number_list(obj["values"], "values"))
