"""Closed-form solvability criteria on the dimensionless (A, B) plane."""

import math

import numpy as np
import pytest

from fdecauchy import (
    NormData,
    amax_cond3,
    bmax_cond2,
    check_cor2_cond1,
    check_cor2_cond2,
    check_cor2_cond3,
    check_corollary1,
    check_theorem1,
    check_theorem2,
    min_q_on_unit_interval,
    quadratic_q,
)

PHI = 0.5 * (1.0 + math.sqrt(5.0))


# ---------------------------------------------------------------------------
# integral-norm criterion

def test_theorem1_zero_operators():
    v = check_theorem1(0.0, 0.0)
    assert v.solvable
    assert v.margin == 1.0


def test_theorem1_boundary_at_three():
    assert check_theorem1(0.0, 2.999).solvable
    v = check_theorem1(0.0, 3.0)
    assert not v.solvable
    assert abs(v.margin) < 1e-12


def test_theorem1_tplus_boundary():
    v = check_theorem1(1.0, 0.0)
    assert not v.solvable
    assert v.margin == 0.0


def test_theorem1_rejects_negative_input():
    with pytest.raises(ValueError):
        check_theorem1(-0.1, 0.0)
    with pytest.raises(ValueError):
        check_theorem1(0.0, -1.0)


# ---------------------------------------------------------------------------
# Corollary 1 (sufficient condition in (A, B))

def test_corollary1_examples():
    assert check_corollary1(0.0, 2.9).solvable
    assert not check_corollary1(0.5, 2.45).solvable  # 2.45 > 1 + 2*sqrt(0.5)
    assert not check_corollary1(1.0, 0.0).solvable
    with pytest.raises(ValueError):
        check_corollary1(-0.2, 0.1)


# ---------------------------------------------------------------------------
# the decision quadratic

def test_quadratic_q_values():
    assert abs(quadratic_q(0.0, 3.0, 1.0 / 3.0)) < 5e-16  # q = (3t-1)^2
    assert abs(quadratic_q(0.5, 2.5, 0.3) - (-0.01)) < 1e-12
    rng = np.random.default_rng(3)
    for _ in range(40):
        A = float(rng.uniform(0, 2))
        B = float(rng.uniform(0, 4))
        assert quadratic_q(A, B, 0.0) == 1.0 - A
        assert quadratic_q(A, B, 1.0) == (1.0 - A) + B


def test_quadratic_q_domain():
    with pytest.raises(ValueError):
        quadratic_q(0.3, 0.2, -0.001)
    with pytest.raises(ValueError):
        quadratic_q(0.3, 0.2, 1.001)


def test_quadratic_q_affine_when_equal_norms():
    # B = A kills the t^2 coefficient; second differences vanish
    for A in (0.0, 0.3, 0.9, 1.7):
        ts = np.linspace(0, 1, 9)
        qs = np.array([quadratic_q(A, A, float(t)) for t in ts])
        second = qs[2:] - 2 * qs[1:-1] + qs[:-2]
        assert np.max(np.abs(second)) < 1e-14 * (1.0 + A)


def test_min_q_examples():
    t, q = min_q_on_unit_interval(0.0, 3.0)
    assert abs(t - 1.0 / 3.0) < 1e-12
    assert abs(q) < 1e-12
    t, q = min_q_on_unit_interval(0.5, 0.0)
    assert t in (0.0, 1.0)
    assert q == 0.5
    t, q = min_q_on_unit_interval(0.0, 0.0)
    assert t in (0.0, 1.0)
    assert q == 1.0


def test_min_q_is_a_true_minimum():
    rng = np.random.default_rng(5)
    ts = np.linspace(0, 1, 2001)
    for _ in range(60):
        A = float(rng.uniform(0, 1.5))
        B = float(rng.uniform(0, 3.5))
        t_star, q_star = min_q_on_unit_interval(A, B)
        assert 0.0 <= t_star <= 1.0
        assert abs(quadratic_q(A, B, t_star) - q_star) < 1e-13
        sampled = np.min([quadratic_q(A, B, float(t)) for t in ts])
        assert q_star <= sampled + 1e-12


# ---------------------------------------------------------------------------
# Theorem 2, the canonical criterion

def test_theorem2_boundary_at_three():
    assert check_theorem2(0.0, 2.999).solvable
    v = check_theorem2(0.0, 3.0)
    assert not v.solvable
    assert abs(v.margin) < 1e-12


def test_theorem2_strict_improvement_points():
    v = check_theorem2(0.5, 2.45)
    assert v.solvable
    assert abs(v.margin - 0.026010158626683877) < 1e-12
    v = check_theorem2(0.5, 2.5)
    assert not v.solvable
    assert v.margin < -0.005  # q(0.3) = -0.01 already witnesses this


def test_corollary1_region_inside_theorem2_region():
    rng = np.random.default_rng(17)
    for _ in range(300):
        A = float(rng.uniform(0, 1.2))
        B = float(rng.uniform(0, 3.5))
        if check_corollary1(A, B).solvable:
            assert check_theorem2(A, B).solvable, (A, B)
    # strict inclusion: theorem 2 accepts a point corollary 1 rejects
    assert not check_corollary1(0.5, 2.45).solvable
    assert check_theorem2(0.5, 2.45).solvable


def test_theorem2_margin_is_locally_lipschitz():
    rng = np.random.default_rng(23)
    h = 1e-3
    L = 12.0  # |dq/dA| <= 1 + 2A, |dq/dB| <= 1 + 2B on the box
    for _ in range(80):
        A = float(rng.uniform(0, 1))
        B = float(rng.uniform(0, 3.4))
        base = check_theorem2(A, B).margin
        assert abs(check_theorem2(A + h, B).margin - base) <= L * h
        assert abs(check_theorem2(A, B + h).margin - base) <= L * h


# ---------------------------------------------------------------------------
# corollary condition 1 (discriminant form)

def test_cond1_examples():
    v = check_cor2_cond1(0.0, 2.0)
    assert v.solvable
    assert abs(v.margin - 12.0) < 1e-12
    v = check_cor2_cond1(0.0, 3.0)
    assert not v.solvable
    assert abs(v.margin) < 1e-12
    v = check_cor2_cond1(0.2, 0.5)  # below threshold, no discriminant involved
    assert v.solvable
    assert v.margin == 1.0 - 0.2


def test_cond1_never_accepts_past_a_equals_one():
    for A, B in ((1.0, 2.0), (1.3, 2.0), (2.0, 1.9)):
        assert not check_cor2_cond1(A, B).solvable


# ---------------------------------------------------------------------------
# corollary conditions 2 and 3 (numeric envelopes)

def test_bmax_at_zero_is_three():
    assert abs(bmax_cond2(0.0) - 3.0) < 1e-6


def test_bmax_at_half_separates_the_fixture_points():
    b = bmax_cond2(0.5)
    assert 2.4142 < b < 2.5
    assert check_theorem2(0.5, 2.45).solvable
    assert not check_theorem2(0.5, 2.5).solvable


def test_bmax_region_stays_bounded_near_one():
    b = bmax_cond2(0.999)
    assert PHI - 0.01 < b < 1.75


def test_bmax_domain():
    with pytest.raises(ValueError):
        bmax_cond2(1.0)
    with pytest.raises(ValueError):
        bmax_cond2(-0.1)


def test_amax_examples():
    assert amax_cond3(1.0) == 1.0
    assert amax_cond3(PHI) == 1.0
    assert amax_cond3(PHI + 1e-9) < 1.0 + 1e-6
    a = amax_cond3(2.999)
    assert 0.0 < a < 0.05


def test_amax_domain():
    with pytest.raises(ValueError):
        amax_cond3(3.0)
    with pytest.raises(ValueError):
        amax_cond3(-0.5)


def test_cond2_cond3_verdicts():
    assert check_cor2_cond2(0.0, 2.9).solvable
    assert not check_cor2_cond2(0.0, 3.1).solvable
    assert not check_cor2_cond2(1.2, 0.5).solvable
    assert check_cor2_cond3(0.9, 1.0).solvable
    assert not check_cor2_cond3(0.5, 2.9).solvable
    v = check_cor2_cond3(0.2, 3.2)  # past the empty-region boundary
    assert not v.solvable
    assert v.margin < 0


def test_three_forms_delimit_one_region():
    """thm2, the B-envelope and the A-envelope agree on the boundary location."""
    for A in np.linspace(0.0, 0.9, 7):
        b_star = _bisect_boundary(lambda b, A=A: check_theorem2(float(A), b).solvable,
                                  0.0, 4.0)
        assert abs(b_star - bmax_cond2(float(A))) < 1e-6, A
    for B in np.linspace(1.7, 2.9, 7):
        a_star = _bisect_boundary(lambda a, B=B: check_theorem2(a, float(B)).solvable,
                                  0.0, 1.5)
        assert abs(a_star - amax_cond3(float(B))) < 1e-6, B


def _bisect_boundary(accepts, lo, hi, steps=60):
    assert accepts(lo) and not accepts(hi)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if accepts(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# dimensional inputs

def test_normdata_scale_invariance():
    pairs = [(0.4, 1.7), (0.0, 2.2), (0.8, 0.3)]
    for tp, tm in pairs:
        base = NormData(t_plus=tp, t_minus=tm, a=0.0, b=1.0).dimensionless()
        scaled = NormData(t_plus=tp / 3.0, t_minus=tm / 3.0, a=2.0, b=5.0).dimensionless()
        assert abs(base[0] - scaled[0]) < 1e-12
        assert abs(base[1] - scaled[1]) < 1e-12
        assert check_theorem2(*base).solvable == check_theorem2(*scaled).solvable


def test_normdata_validation():
    with pytest.raises(ValueError):
        NormData(t_plus=1.0, t_minus=1.0, a=1.0, b=1.0)
    with pytest.raises(ValueError):
        NormData(t_plus=-1.0, t_minus=0.0, a=0.0, b=1.0)
