import json
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discres import verification as V
from discres.polynomials import IntPolynomial

P = IntPolynomial.from_descending


# ---- independent oracles ---------------------------------------------------

def band_area_oracle(A, delta):
    """Integrate g(x) = |A cap [x-delta, x+delta]| over A by the trapezoid
    rule between breakpoints, where g is linear, so the result is exact."""
    def g(x):
        return sum(max(F(0), min(b, x + delta) - max(a, x - delta)) for a, b in A.pieces)

    pts = set()
    for a, b in A.pieces:
        for e in (a, b):
            pts.update((e, e - delta, e + delta))
    total = F(0)
    for a, b in A.pieces:
        cuts = sorted({a, b} | {p for p in pts if a < p < b})
        for lo, hi in zip(cuts, cuts[1:]):
            total += (g(lo) + g(hi)) / 2 * (hi - lo)
    return total


def near_curve_oracle(T, eps, alpha=0, beta=3):
    n = 0
    for q in range(1, T + 1):
        for a in range(1, 3 * q + 1):
            if not (F(alpha) * q < a <= F(beta) * q):
                continue
            y = F(a * a, q)
            dist = abs(y - round(y))
            if dist < eps:
                n += 1
    return n


# ---- derivative bounds -----------------------------------------------------

def test_upper_bound_simple():
    rep = V.check_derivative_upper(P(1, 0, -1), 0.3, 1)
    assert rep.passed and rep.status == "checked"
    with pytest.raises(ValueError):
        V.check_derivative_upper(P(1, 0, -1), 0.3, 2)


def test_unnormalized_derivative_bound_can_fail():
    # x^3 at x = 1: P''(1) = 6 exceeds 3 |1 - 0| = 3, P''/2! = 3 does not
    assert not V.check_derivative_upper(P(1, 0, 0, 0), 1.0, 2, normalized=False).passed
    assert V.check_derivative_upper(P(1, 0, 0, 0), 1.0, 2).passed


def test_lower_bound_not_applicable_on_tie():
    rep = V.check_derivative_lower(P(1, 0, -1), 0, 1)
    assert rep.status == "not_applicable" and rep.passed is None


def test_lower_bound_applicable():
    # roots 0, 10, 20; x close to 0
    p = IntPolynomial.from_roots([0, 10, 20])
    rep = V.check_derivative_lower(p, 0.01, 1)
    assert rep.status == "checked" and rep.passed


def test_derivative_sweep_deterministic():
    a = V.sweep_derivative_bounds(42, 200).to_json()
    b = V.sweep_derivative_bounds(42, 200).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["failures"] == 0


# ---- root proximity --------------------------------------------------------

def test_proximity_constants():
    assert V.proximity_constants(2, 1, 1) == [2, 8]
    assert V.proximity_constants(3, 1, 1)[0] == 3
    with pytest.raises(ValueError):
        V.proximity_constants(2, 1, 0)


def test_proximity_rejects_unordered_profile():
    with pytest.raises(ValueError, match="d_1 >= d_2"):
        V.check_root_proximity(P(1, 0, -1), 0.5, 10, [F(1), F(2)])


def test_proximity_on_constructed_polynomial():
    # P = Qx^2 - Qx + 1: |P(0)| = 1, |P'(0)| = Q, P''/2 = Q, so d = (1, 0)
    # and the small root 1/Q + O(1/Q^2) must sit within c_1/Q of 0
    Q = 1000
    p = P(Q, -Q, 1)
    rep = V.check_root_proximity(p, 0.0, Q, [F(1), F(0)])
    assert rep.status == "checked" and rep.passed
    assert rep.lhs == pytest.approx(1 / Q, rel=1e-2)


def test_proximity_hypothesis_failure():
    rep = V.check_root_proximity(P(1, 0, -1), 0.5, 10, [F(3), F(0)])
    assert rep.status == "hypothesis_failed"


def test_proximity_sweep_small():
    s = V.sweep_root_proximity(7, 120)
    assert s.failures == 0 and s.checked > 0


# ---- diagonal measure ------------------------------------------------------

def test_diagonal_examples():
    I = V.IntervalUnion.of((0, 1))
    assert V.diagonal_measure(I, (0, 1), F(1, 2)) == F(3, 4)
    assert V.diagonal_measure(I, (0, 1), F(1, 1000)) == F(1999, 1000000)
    assert V.check_diagonal_bound(I, (0, 1), F(1, 2)).passed
    with pytest.raises(ValueError):
        V.diagonal_measure(I, (0, 1), 1)


def test_diagonal_matches_oracle():
    rng = random.Random(17)
    for _ in range(200):
        A = V.random_interval_union(rng, 5, 60)
        delta = F(rng.randint(1, 59), 60)
        assert V.diagonal_measure(A, (0, 1), delta) == band_area_oracle(A, delta)


def test_interval_union_merges():
    A = V.IntervalUnion.of((F(1, 2), 1), (0, F(1, 4)), (F(1, 5), F(1, 3)))
    assert A.pieces == ((0, F(1, 3)), (F(1, 2), 1))
    assert A.measure == F(5, 6)


def test_diagonal_sweep():
    s = V.sweep_diagonal(3, 300)
    assert s.failures == 0 and s.checked == 300


# ---- near-curve counting ---------------------------------------------------

def test_near_curve_examples():
    assert V.near_curve_count(2, F(3, 10)) == 6
    assert V.near_curve_count(1, F(1, 10)) == 3
    with pytest.raises(ValueError):
        V.near_curve_count(2, F(3, 5))
    with pytest.raises(ValueError):
        V.near_curve_count(2, F(1, 2))


@pytest.mark.parametrize("T", [1, 5, 13, 30])
def test_near_curve_matches_oracle(T):
    for eps in (F(1, 20), F(1, 7), F(1, 3), F(49, 100)):
        assert V.near_curve_count(T, eps) == near_curve_oracle(T, eps)


def test_near_curve_custom_curve_float_path():
    # 3/20 has no exact ties for q <= 12; eps = 1/10 would tie at q = 10
    assert V.near_curve_count(12, F(3, 20), curve=lambda x: x * x) == V.near_curve_count(12, F(3, 20))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 49), st.integers(1, 49))
def test_near_curve_monotone(T1, T2, e1, e2):
    (ta, tb), (ea, eb) = sorted((T1, T2)), sorted((e1, e2))
    assert V.near_curve_count(ta, F(ea, 100)) <= V.near_curve_count(tb, F(ea, 100))
    assert V.near_curve_count(ta, F(ea, 100)) <= V.near_curve_count(ta, F(eb, 100))


def test_near_curve_table_matches_count():
    tab = V.near_curve_table([4, 9, 16], [F(1, 4), F(1, 8)])
    for (T, e), N in tab.items():
        assert N == V.near_curve_count(T, e)


def test_float_crosscheck_clean():
    assert V.near_curve_crosscheck(T_max=20) == []


def test_dyadic_epsilon():
    assert V.dyadic_epsilon(0, 10, F(1, 2)) == 10
    assert V.dyadic_epsilon(3, 10, F(1, 2)) == F(10, 8)
    assert V.dyadic_epsilon(0, 7, 1) == 1
    e = V.dyadic_epsilon(0, 10, F(1, 4))  # 10^1.5, irrational
    assert e <= F(31623, 1000) and e ** 2 <= 1000 < (e + F(1, 2**64)) ** 2


# ---- fitting ---------------------------------------------------------------

def test_fit_exact_power_laws():
    assert V.fit_exponent([(10, 10**3), (100, 10**6)]).slope == pytest.approx(3.0)
    fit = V.fit_exponent([(10, 5 * 10**2), (100, 5 * 10**4)])
    assert fit.slope == pytest.approx(2.0) and fit.intercept == pytest.approx(math.log(5))


def test_fit_noisy():
    rng = np.random.default_rng(0)
    Qs = [50, 100, 200, 400]
    pts = [(q, 7 * q**2.5 * (1 + rng.uniform(-0.05, 0.05))) for q in Qs]
    assert abs(V.fit_exponent(pts).slope - 2.5) <= 0.1


def test_fit_errors():
    with pytest.raises(ValueError, match="increase Q or threshold"):
        V.fit_exponent([(10, 0), (20, 5)])
    with pytest.raises(ValueError):
        V.fit_exponent([(10, 5)])
