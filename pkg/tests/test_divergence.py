import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccs_ica.divergence import ccs_div, ccs_div_integral_2d, convex_f, convex_f_prime
from ccs_ica.errors import DegenerateContrastError, DomainError

# Frozen from a 40-digit mpmath evaluation of the textbook formula
# 4/(1-a^2) * [(1-a)/2 + (1+a)/2 t - t^((1+a)/2)] (see test_oracle_values).
F_2_HALF = 0.36377157062704487433
CCS_EXAMPLE = 0.6151040148589311422

alphas = st.floats(-0.99, 0.99).filter(lambda a: abs(a) > 1e-3)


def textbook_f(t, a):
    return 4.0 / (1.0 - a * a) * ((1.0 - a) / 2.0 + (1.0 + a) / 2.0 * t - t ** ((1.0 + a) / 2.0))


def test_oracle_values():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40

    def f(t, a):
        t, a = mpmath.mpf(t), mpmath.mpf(a)
        return 4 / (1 - a**2) * ((1 - a) / 2 + (1 + a) / 2 * t - t ** ((1 + a) / 2))

    assert float(f(2, "0.5")) == pytest.approx(F_2_HALF, rel=1e-15)
    fp = [f("0.5", "0.5")] * 2
    fq = [f("0.2", "0.5"), f("0.8", "0.5")]
    v1 = sum(x * x for x in fp)
    v2 = sum(x * x for x in fq)
    v3 = sum(x * y for x, y in zip(fp, fq))
    assert float(mpmath.log(v1 * v2 / v3**2)) == pytest.approx(CCS_EXAMPLE, rel=1e-15)


@pytest.mark.parametrize("alpha", [-1.0, -0.99999, -0.5, 0.0, 0.5, 1.0, 3.0])
def test_f_vanishes_at_one(alpha):
    assert convex_f(1.0, alpha) == pytest.approx(0.0, abs=1e-12)
    assert convex_f_prime(1.0, alpha) == pytest.approx(0.0, abs=1e-12)


def test_f_examples():
    assert convex_f(0.0, 0.0) == pytest.approx(2.0)
    assert convex_f(4.0, 0.0) == pytest.approx(2.0)
    assert convex_f(2.0, 0.5) == pytest.approx(F_2_HALF, rel=1e-13)
    assert convex_f_prime(4.0, 0.0) == pytest.approx(1.0)


def test_f_limit_branches():
    t = np.array([0.1, 0.5, 2.0, 7.0])
    np.testing.assert_allclose(convex_f(t, 1.0), t * np.log(t) - t + 1)
    np.testing.assert_allclose(convex_f(t, -1.0), t - 1 - np.log(t))
    assert convex_f(0.0, 1.0) == 1.0
    np.testing.assert_allclose(convex_f_prime(t, 1.0), np.log(t))
    np.testing.assert_allclose(convex_f_prime(t, -1.0), 1 - 1 / t)


def test_f_matches_textbook_form_away_from_limits():
    t = np.linspace(0.0, 20.0, 101)
    for a in (-0.9, -0.3, 0.2, 0.8, 2.5):
        np.testing.assert_allclose(convex_f(t, a), textbook_f(t, a), rtol=1e-9, atol=1e-12)


def test_f_stable_near_minus_one():
    # naive evaluation cancels to ~1e-11; the limit form is the reference
    t = np.array([1e-4, 0.01, 0.3, 3.0, 50.0])
    np.testing.assert_allclose(convex_f(t, -1 + 1e-9), t - 1 - np.log(t), rtol=1e-7)


def test_f_domain_errors():
    with pytest.raises(DomainError):
        convex_f(-0.1, 0.3)
    with pytest.raises(DomainError):
        convex_f(0.0, -1.0)
    with pytest.raises(DomainError):
        convex_f_prime(0.0, 0.3)
    with pytest.raises(DomainError):
        convex_f(1.0, float("nan"))


@settings(max_examples=100, deadline=None)
@given(t=st.floats(0.01, 100.0), alpha=alphas)
def test_f_prime_matches_central_difference(t, alpha):
    d = 1e-5 * max(1.0, t)
    fd = (convex_f(t + d, alpha) - convex_f(t - d, alpha)) / (2 * d)
    ref = convex_f_prime(t, alpha)
    assert abs(ref - fd) <= 1e-6 * max(abs(ref), 1e-3)


@settings(max_examples=200, deadline=None)
@given(t=st.floats(0.0, 1e3), alpha=st.floats(-0.999, 5.0))
def test_f_nonnegative(t, alpha):
    value = convex_f(t, alpha)
    assert value >= -1e-12
    if abs(t - 1.0) > 1e-3:
        assert value > 0


def test_ccs_div_example():
    assert ccs_div([0.5, 0.5], [0.2, 0.8], 0.5) == pytest.approx(CCS_EXAMPLE, rel=1e-12)


def test_ccs_div_equal_vectors_is_zero():
    rng = np.random.default_rng(3)
    p = rng.uniform(0.01, 2.0, 50)
    for alpha in (-1.0, -0.99999, 0.0, 0.7, 1.0):
        assert ccs_div(p, p, alpha) <= 1e-12


def test_ccs_div_symmetry_exact():
    rng = np.random.default_rng(4)
    p, q = rng.uniform(0.01, 1.0, (2, 30))
    assert ccs_div(p, q, -0.5) == ccs_div(q, p, -0.5)


def test_ccs_div_degenerate():
    with pytest.raises(DegenerateContrastError):
        ccs_div([1.0, 1.0], [0.3, 0.4], 0.2)
    with pytest.raises(ValueError):
        ccs_div([0.1, 0.2], [0.1], 0.2)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(1e-4, 10.0), min_size=2, max_size=20).flatmap(
        lambda p: st.tuples(st.just(p), st.lists(st.floats(1e-4, 10.0), min_size=len(p), max_size=len(p)))
    ),
    st.floats(-3.0, 3.0),
)
def test_ccs_div_nonnegative(pair, alpha):
    p, q = pair
    try:
        assert ccs_div(p, q, alpha) >= 0.0
    except DegenerateContrastError:
        pass


def _gaussian_grid(rho, n=161, lim=5.0):
    z = np.linspace(-lim, lim, n)
    dz = z[1] - z[0]
    z1, z2 = np.meshgrid(z, z, indexing="ij")
    det = 1 - rho * rho
    joint = np.exp(-(z1**2 - 2 * rho * z1 * z2 + z2**2) / (2 * det)) / (2 * np.pi * np.sqrt(det))
    marg = np.exp(-0.5 * z * z) / np.sqrt(2 * np.pi)
    return joint, marg, dz


def test_integral_independent_grid_is_zero():
    joint, marg, dz = _gaussian_grid(0.0)
    assert ccs_div_integral_2d(np.outer(marg, marg), marg, marg, 0.3, dz * dz) <= 1e-8
    assert ccs_div_integral_2d(joint, marg, marg, 0.3, dz * dz) <= 1e-8


def test_integral_symmetric_in_arguments():
    joint, marg, dz = _gaussian_grid(0.6, n=41)
    q = np.outer(marg, marg)
    # Exchange the roles: pass Q as the "joint" and recover P as an outer
    # product is impossible in general, so compare through the sample form.
    forward = ccs_div(joint.ravel(), q.ravel(), -0.4)
    backward = ccs_div(q.ravel(), joint.ravel(), -0.4)
    assert forward == backward
    assert ccs_div_integral_2d(joint, marg, marg, -0.4, dz * dz) == pytest.approx(forward, rel=1e-12)


def test_integral_matches_double_sum():
    joint, marg, dz = _gaussian_grid(0.7, n=61)
    alpha = -0.6
    num1 = num2 = den = 0.0
    for i in range(marg.size):
        for j in range(marg.size):
            fp = textbook_f(joint[i, j], alpha)
            fq = textbook_f(marg[i] * marg[j], alpha)
            num1 += fp * fp * dz * dz
            num2 += fq * fq * dz * dz
            den += fp * fq * dz * dz
    expected = math.log(num1 * num2 / den**2)
    got = ccs_div_integral_2d(joint, marg, marg, alpha, dz * dz)
    assert expected > 0
    assert got == pytest.approx(expected, abs=1e-10)


def test_integral_dimension_mismatch():
    with pytest.raises(ValueError):
        ccs_div_integral_2d(np.ones((3, 4)), np.ones(3), np.ones(3), 0.0)
