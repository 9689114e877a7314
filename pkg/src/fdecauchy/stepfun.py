"""Piecewise-constant and piecewise-linear functions on a closed interval.

Both types are plain value objects over numpy arrays.  Step functions are
right-continuous: the value on [breaks[k], breaks[k+1]) is values[k], and the
right endpoint of the domain belongs to the last piece.  Exactness matters
here: integrals of step functions are computed piece by piece so that grid
oracles built on them reproduce closed-form corner values bit for bit
whenever the arithmetic allows it.
"""

from dataclasses import dataclass, field

import numpy as np


def _as_break_array(breaks):
    b = np.asarray(breaks, dtype=float)
    if b.ndim != 1 or b.size < 2:
        raise ValueError("breaks must be a 1-d array with at least two nodes")
    if not np.all(np.isfinite(b)):
        raise ValueError("breaks must be finite")
    if not np.all(np.diff(b) > 0):
        raise ValueError("breaks must be strictly increasing")
    return b


@dataclass
class StepFunction:
    """Right-continuous step function: values[k] on [breaks[k], breaks[k+1])."""

    breaks: np.ndarray
    values: np.ndarray
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.breaks = _as_break_array(self.breaks)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.breaks.size - 1,):
            raise ValueError("need one value per piece")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")
        # cumulative integral at each break node, used by integral()
        widths = np.diff(self.breaks)
        self._cum = np.concatenate(([0.0], np.cumsum(self.values * widths)))

    @classmethod
    def constant(cls, value, a=0.0, b=1.0):
        return cls(np.array([a, b]), np.array([float(value)]))

    @property
    def a(self):
        return float(self.breaks[0])

    @property
    def b(self):
        return float(self.breaks[-1])

    def _piece_index(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.breaks[0]) or np.any(t > self.breaks[-1]):
            raise ValueError("evaluation point outside the domain")
        k = np.searchsorted(self.breaks, t, side="right") - 1
        return np.clip(k, 0, self.values.size - 1)

    def __call__(self, t):
        out = self.values[self._piece_index(t)]
        return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out

    def integral(self, t):
        """Integral from the left end of the domain up to t (scalar or array).

        Exact at break nodes: integral(breaks[k]) is the cumulative sum with
        no trailing zero-width correction term.
        """
        k = self._piece_index(t)
        t = np.asarray(t, dtype=float)
        out = self._cum[k] + self.values[k] * (t - self.breaks[k])
        return float(out) if t.ndim == 0 else out

    def total_integral(self):
        return float(self._cum[-1])

    def values_on(self, breaks):
        """Piece values re-read on a refinement of this function's breaks."""
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        return self.values[self._piece_index(mids)]

    def _binary(self, other, op):
        if isinstance(other, StepFunction):
            breaks = merge_breaks(self, other)
            return StepFunction(breaks, op(self.values_on(breaks), other.values_on(breaks)))
        return StepFunction(self.breaks.copy(), op(self.values, float(other)))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return StepFunction(self.breaks.copy(), float(other) - self.values)

    def __mul__(self, scalar):
        return StepFunction(self.breaks.copy(), self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return StepFunction(self.breaks.copy(), -self.values)

    def positive_part(self):
        return StepFunction(self.breaks.copy(), np.maximum(self.values, 0.0))

    def negative_part(self):
        """Pointwise max(-f, 0), so f = positive_part - negative_part."""
        return StepFunction(self.breaks.copy(), np.maximum(-self.values, 0.0))

    def is_zero(self):
        return bool(np.all(self.values == 0.0))


def merge_breaks(*funcs):
    """Sorted union of all break nodes of the given piecewise functions."""
    arrays = [f.breaks for f in funcs]
    out = arrays[0]
    for arr in arrays[1:]:
        out = np.union1d(out, arr)
    return out


def two_piece(split, left, right, a=0.0, b=1.0):
    """Step function equal to `left` on [a, split) and `right` on [split, b].

    A split at (or past) an endpoint degenerates to a single piece.
    """
    if split <= a:
        return StepFunction(np.array([a, b]), np.array([float(right)]))
    if split >= b:
        return StepFunction(np.array([a, b]), np.array([float(left)]))
    return StepFunction(np.array([a, split, b]), np.array([float(left), float(right)]))


@dataclass
class PiecewiseLinear:
    """Continuous piecewise-linear function given by node values at breaks."""

    breaks: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.breaks = _as_break_array(self.breaks)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.breaks.shape:
            raise ValueError("need one value per break node")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    @classmethod
    def constant(cls, value, a=0.0, b=1.0):
        return cls(np.array([a, b]), np.array([float(value), float(value)]))

    @property
    def a(self):
        return float(self.breaks[0])

    @property
    def b(self):
        return float(self.breaks[-1])

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.breaks[0]) or np.any(t_arr > self.breaks[-1]):
            raise ValueError("evaluation point outside the domain")
        out = np.interp(t_arr, self.breaks, self.values)
        return float(out) if t_arr.ndim == 0 else out

    def slopes(self):
        return np.diff(self.values) / np.diff(self.breaks)

    def slope_at(self, t):
        """Slope of the piece containing t (right-sided at interior nodes)."""
        t = np.asarray(t, dtype=float)
        if np.any(t < self.breaks[0]) or np.any(t > self.breaks[-1]):
            raise ValueError("evaluation point outside the domain")
        k = np.searchsorted(self.breaks, t, side="right") - 1
        k = np.clip(k, 0, self.breaks.size - 2)
        s = self.slopes()[k]
        return float(s) if t.ndim == 0 else s

    def with_breaks(self, breaks):
        """Exact resample onto a refinement (superset) of the current breaks."""
        breaks = _as_break_array(breaks)
        return PiecewiseLinear(breaks, np.interp(breaks, self.breaks, self.values))

    def blend(self, other, weight):
        """(1 - weight) * self + weight * other on merged breaks."""
        breaks = merge_breaks(self, other)
        va = np.interp(breaks, self.breaks, self.values)
        vb = np.interp(breaks, other.breaks, other.values)
        return PiecewiseLinear(breaks, (1.0 - weight) * va + weight * vb)

    def max_abs(self):
        return float(np.max(np.abs(self.values)))
