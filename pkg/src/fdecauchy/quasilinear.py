"""Quasilinear problems: x' = p1*x(tau1) + p2*x(tau2) + f + F(x), x(0) = c.

F is a sublinear nonlinear forcing operator.  Existence holds whenever the
linear part is uniquely solvable and F grows sublinearly; the solver here
is damped Picard iteration on a fixed evaluation grid: the nonlinearity is
sampled into a step-function forcing, the linear problem is re-solved, and
the update is blended with the previous iterate.  The residual reported is
the defect against that same sampled forcing, so a Picard fixed point has
residual at roundoff level regardless of how fine the grid is.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .equations import residual as linear_residual
from .equations import solve_two_point
from .stepfun import PiecewiseLinear, StepFunction, merge_breaks

DEFAULT_CELLS = 1024
_GROWTH_PROBES = (1e3, 1e6, 1e9)


class NoConvergence(Exception):
    """Raised when Picard iteration exhausts max_iter; carries best residual."""

    def __init__(self, best_residual, iterations):
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(best residual {best_residual:.3e})")
        self.best_residual = best_residual
        self.iterations = iterations


@dataclass(frozen=True)
class Nonlinearity:
    """Forcing operator F plus a sublinear growth bound.

    evaluator maps (x: PiecewiseLinear, breaks) to a StepFunction forcing
    on exactly those breaks; growth_bound(r) must dominate the forcing
    sup-norm over inputs with sup-norm <= r and grow sublinearly (checked
    at a few large radii by validate_sublinear).
    """

    evaluator: object
    growth_bound: object
    label: str = "custom"

    def validate_sublinear(self):
        ratios = [self.growth_bound(r) / r for r in _GROWTH_PROBES]
        if any(not math.isfinite(rho) or rho < 0 for rho in ratios):
            raise ValueError("growth_bound must be finite and nonnegative")
        if all(rho == 0.0 for rho in ratios):
            return
        if not ratios[0] > ratios[1] > ratios[2]:
            raise ValueError(
                f"growth bound of '{self.label}' is not sublinear "
                f"(ratios {ratios[0]:.3e}, {ratios[1]:.3e}, {ratios[2]:.3e})")

    def sample(self, x, breaks):
        forcing = self.evaluator(x, breaks)
        if not isinstance(forcing, StepFunction) or forcing.values.size != breaks.size - 1:
            raise ValueError("evaluator must return a StepFunction on the given breaks")
        return forcing


def from_pointwise(g, growth_bound, label="custom"):
    """Nonlinearity evaluating g(t, x(t)) at cell midpoints of the grid."""

    def evaluator(x, breaks):
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        return StepFunction(breaks, np.asarray(g(mids, x(mids)), dtype=float))

    return Nonlinearity(evaluator, growth_bound, label=label)


def power_nonlinearity(kappa, gamma):
    """kappa * sign(x) * |x|**gamma with gamma in [0, 1)."""
    if not 0.0 <= gamma < 1.0:
        raise ValueError("power nonlinearity needs 0 <= gamma < 1")
    kappa = float(kappa)
    return from_pointwise(
        lambda t, x: kappa * np.sign(x) * np.abs(x) ** gamma,
        lambda r: abs(kappa) * r ** gamma,
        label=f"power(kappa={kappa:g}, gamma={gamma:g})")


def tanh_nonlinearity(kappa):
    """kappa * tanh(x); bounded, hence trivially sublinear."""
    kappa = float(kappa)
    return from_pointwise(
        lambda t, x: kappa * np.tanh(x),
        lambda r: abs(kappa) * min(1.0, r),
        label=f"tanh(kappa={kappa:g})")


def _evaluation_grid(prob, n_cells):
    uniform = np.arange(n_cells + 1) / n_cells
    return np.union1d(uniform, merge_breaks(prob.p1, prob.p2, prob.f))


def _with_forcing(prob, nonlinearity, x, grid):
    f_values = prob.f.values_on(grid) + nonlinearity.sample(x, grid).values
    return replace(prob, f=StepFunction(grid, f_values))


def quasilinear_residual(linear, nonlinearity, x, n_samples=DEFAULT_CELLS):
    """Defect of x against the nonlinear forcing sampled on the solver grid."""
    grid = _evaluation_grid(linear, n_samples)
    return linear_residual(_with_forcing(linear, nonlinearity, x, grid), x)


def solve_quasilinear(linear, nonlinearity, c=None, max_iter=200, tol=1e-8,
                      theta=0.5, n_cells=DEFAULT_CELLS):
    """Damped Picard iteration for the quasilinear problem.

    `linear` supplies the two-point structure; its f (normally zero) acts
    as a fixed additive forcing and c overrides its initial value when
    given.  The first iterate evaluates F along the constant initial
    state, so an x-independent F converges immediately and the result then
    matches solve_two_point exactly.  Later steps solve the linear problem
    with frozen forcing and blend with weight theta, retrying with halved
    theta while the residual worsens.  Raises NoConvergence (carrying the
    best residual) after max_iter iterations above tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if not 0.0 < theta <= 1.0:
        raise ValueError("theta must lie in (0, 1]")
    nonlinearity.validate_sublinear()
    prob = linear if c is None else replace(linear, c=float(c))

    grid = _evaluation_grid(prob, n_cells)
    start = PiecewiseLinear.constant(prob.c)
    x = solve_two_point(_with_forcing(prob, nonlinearity, start, grid))
    best = linear_residual(_with_forcing(prob, nonlinearity, x, grid), x)

    for _ in range(max_iter):
        if best <= tol:
            return x
        y = solve_two_point(_with_forcing(prob, nonlinearity, x, grid))
        step = theta
        trial = x.blend(y, step)
        r_trial = linear_residual(_with_forcing(prob, nonlinearity, trial, grid), trial)
        while r_trial > best and step > 1e-3:
            step *= 0.5
            trial = x.blend(y, step)
            r_trial = linear_residual(_with_forcing(prob, nonlinearity, trial, grid), trial)
        x, best = trial, r_trial

    if best <= tol:
        return x
    raise NoConvergence(best, max_iter)


def _abs_mass(sf):
    return float(np.sum(np.abs(sf.values) * np.diff(sf.breaks)))


def a_priori_bound(prob, nonlinearity):
    """Self-consistent sup-norm bound R = |c| + m(f) + S*R + growth_bound(R).

    S is the integral of |p1| + |p2| and m(f) the integral of |f|; requires
    S < 1.  The unique root is found by expanding bisection.  Every
    solution of the quasilinear problem is bounded by R in sup norm.
    """
    weight = _abs_mass(prob.p1) + _abs_mass(prob.p2)
    if weight >= 1.0:
        raise ValueError("a priori bound needs total weight mass below 1")
    offset = abs(prob.c) + _abs_mass(prob.f)

    def gap(r):
        return r - (offset + weight * r + nonlinearity.growth_bound(r))

    hi = 1.0
    while gap(hi) < 0.0:
        hi *= 2.0
        if hi > 1e30:
            raise ValueError("growth bound does not close; no finite a priori bound")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
