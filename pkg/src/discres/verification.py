"""Numerical and exact checkers for the auxiliary inequalities.

The derivative bounds are stated for the normalised derivative
P^{(j)}(x)/j! (the j-th Taylor coefficient), which is what the
symmetric-function expansion over the roots actually equals; with the
plain derivative they fail by the factor j! once j >= 2.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np

from discres.polynomials import (
    IntPolynomial,
    RootSet,
    roots,
    sort_roots_by_distance,
    taylor_coefficient,
)

BASE_RTOL = 1e-6
CLUSTER_RTOL = 1e-4
CLUSTER_GAP = 1e-3


@dataclass
class Report:
    check: str
    inputs: dict
    lhs: float | None
    rhs: float | None
    passed: bool | None  # None: hypothesis not met, nothing asserted
    tolerance: float
    status: str = "checked"

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def _tolerance(R: RootSet) -> float:
    return CLUSTER_RTOL if R.min_gap() < CLUSTER_GAP else BASE_RTOL


def _derivative_abs(P: IntPolynomial, j: int, x, normalized: bool) -> float:
    with mpmath.workdps(50):
        val = abs(taylor_coefficient(P, j, mpmath.mpc(x)))
        if not normalized:
            val *= math.factorial(j)
        return float(val)


def _tail_product(P: IntPolynomial, R: RootSet, x, j: int) -> float:
    # |a_n| |x - alpha_{j+1}| ... |x - alpha_n|
    with mpmath.workdps(30):
        prod = mpmath.mpf(abs(P.leading))
        for alpha in R.roots[j:]:
            prod *= abs(mpmath.mpc(x) - mpmath.mpc(alpha))
        return float(prod)


def check_derivative_upper(P: IntPolynomial, x: complex, j: int,
                           normalized: bool = True) -> Report:
    """|P^{(j)}(x)/j!| <= binom(n, j) |a_n| |x-alpha_{j+1}|...|x-alpha_n|.

    Roots are ordered by distance to x.  ``normalized=False`` tests the
    plain derivative, which only holds for j <= 1.
    """
    n = P.degree
    if not 0 <= j < n:
        raise ValueError(f"need 0 <= j < deg P = {n}, got j={j}")
    R = sort_roots_by_distance(roots(P), x)
    tol = _tolerance(R)
    lhs = _derivative_abs(P, j, x, normalized)
    rhs = math.comb(n, j) * _tail_product(P, R, x, j)
    return Report("derivative_upper", {"P": str(P), "x": str(x), "j": j}, lhs, rhs,
                  lhs <= rhs * (1 + tol), tol)


def check_derivative_lower(P: IntPolynomial, x: complex, j: int,
                           normalized: bool = True) -> Report:
    """If |x-alpha_j| < binom(n,j)^{-1} |x-alpha_{j+1}| / 2 then
    |P^{(j)}(x)/j!| >= |a_n| |x-alpha_{j+1}|...|x-alpha_n| / 2."""
    n = P.degree
    if not 1 <= j < n:
        raise ValueError(f"need 1 <= j < deg P = {n}, got j={j}")
    R = sort_roots_by_distance(roots(P), x)
    tol = _tolerance(R)
    inputs = {"P": str(P), "x": str(x), "j": j}
    near = abs(x - R.roots[j - 1])
    far = abs(x - R.roots[j])
    if not near < far / (2 * math.comb(n, j)):
        return Report("derivative_lower", inputs, None, None, None, tol, "not_applicable")
    lhs = _derivative_abs(P, j, x, normalized)
    rhs = _tail_product(P, R, x, j) / 2
    return Report("derivative_lower", inputs, lhs, rhs, lhs >= rhs * (1 - tol), tol)


def proximity_constants(n: int, c0, delta0) -> list[Fraction]:
    """c_1 = n c0/delta0, c_{j+1} = max(2 c0/delta0 binom(n,j+1), 2 c_j binom(n,j))."""
    c0, delta0 = Fraction(c0), Fraction(delta0)
    if c0 <= 0 or delta0 <= 0:
        raise ValueError("c0 and delta0 must be positive")
    c = [n * c0 / delta0]
    for j in range(1, n):
        c.append(max(2 * c0 / delta0 * math.comb(n, j + 1), 2 * c[-1] * math.comb(n, j)))
    return c


def check_root_proximity(P: IntPolynomial, x: complex, Q: float, d: Sequence,
                         c0=10, delta0=Fraction(1, 10), scale: float = 1.0) -> Report:
    """Given the sandwich delta0 Q^{-v_j} <= |s P^{(j)}(x)/j!| <= c0 Q^{-v_j}
    (v_n = -1, v_{j-1} = v_j + d_j), check |x - alpha_j| <= c_j Q^{-d_j}.

    ``scale`` (s) lets a complex multiple of an integer polynomial be
    checked; it does not move the roots.
    """
    n = P.degree
    d = [Fraction(v) for v in d]
    if len(d) != n:
        raise ValueError("need one exponent per root")
    if any(d[j] < d[j + 1] for j in range(n - 1)) or d[-1] < 0:
        raise ValueError("exponents must satisfy d_1 >= d_2 >= ... >= d_n >= 0")
    vp = [Fraction(0)] * (n + 1)
    vp[n] = Fraction(-1)
    for j in range(n, 0, -1):
        vp[j - 1] = vp[j] + d[j - 1]
    inputs = {"P": str(P), "scale": scale, "x": str(x), "Q": Q, "d": [str(v) for v in d],
              "c0": str(c0), "delta0": str(delta0)}

    Qf = float(Q)
    for j in range(n + 1):
        size = scale * _derivative_abs(P, j, x, True)
        ref = Qf ** (-float(vp[j]))
        if not float(delta0) * ref <= size <= float(c0) * ref:
            return Report("root_proximity", inputs, None, None, None, 0.0, "hypothesis_failed")

    R = sort_roots_by_distance(roots(P), x)
    tol = _tolerance(R)
    consts = proximity_constants(n, c0, delta0)
    ratios = [abs(x - R.roots[j]) / (float(consts[j]) * Qf ** (-float(d[j]))) for j in range(n)]
    j = int(np.argmax(ratios))
    lhs = abs(x - R.roots[j])
    return Report("root_proximity", inputs, lhs, lhs / ratios[j], ratios[j] <= 1 + tol, tol)


def derivative_profile(P: IntPolynomial, x: complex, Q: float) -> list[float] | None:
    """Exponents v_j with |P^{(j)}(x)/j!| = Q^{-v_j}; None if one vanishes."""
    out = []
    for j in range(P.degree + 1):
        size = _derivative_abs(P, j, x, True)
        if size == 0:
            return None
        out.append(-math.log(size) / math.log(Q))
    return out


# --------------------------------------------------------------------------
# measure of A x A near the diagonal

@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of closed intervals, normalised to sorted disjoint pieces."""

    pieces: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        items = sorted((Fraction(a), Fraction(b)) for a, b in self.pieces)
        merged: list[list[Fraction]] = []
        for a, b in items:
            if b < a:
                raise ValueError(f"empty interval [{a}, {b}]")
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        object.__setattr__(self, "pieces", tuple((a, b) for a, b in merged))

    @classmethod
    def of(cls, *pieces) -> "IntervalUnion":
        return cls(tuple(pieces))

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.pieces), Fraction(0))

    def within(self, lo, hi) -> bool:
        return all(lo <= a and b <= hi for a, b in self.pieces)


def _ramp_integral(s: Fraction, h: Fraction) -> Fraction:
    # integral_0^s clamp(u, 0, h) du
    if s <= 0:
        return Fraction(0)
    if s <= h:
        return s * s / 2
    return h * h / 2 + h * (s - h)


def _below_line(a, b, c, d, t) -> Fraction:
    # area of [a,b] x [c,d] where y - x <= t
    h = d - c
    return _ramp_integral(b + t - c, h) - _ramp_integral(a + t - c, h)


def diagonal_measure(A: IntervalUnion, I: tuple, delta) -> Fraction:
    """Exact area of {(x, y) in A x A : |x - y| <= delta}."""
    lo, hi = Fraction(I[0]), Fraction(I[1])
    delta = Fraction(delta)
    if not 0 < delta < hi - lo:
        raise ValueError("need 0 < delta < |I|")
    if not A.within(lo, hi):
        raise ValueError("A must lie inside I")
    area = Fraction(0)
    for a, b in A.pieces:
        for c, d in A.pieces:
            area += _below_line(a, b, c, d, delta) - _below_line(a, b, c, d, -delta)
    return area


def check_diagonal_bound(A: IntervalUnion, I: tuple, delta) -> Report:
    """|A^2 cap X_delta| >= 2^-6 lambda^3 delta |I| with lambda = |A|/|I|."""
    lo, hi = Fraction(I[0]), Fraction(I[1])
    length = hi - lo
    lam = A.measure / length
    lhs = diagonal_measure(A, I, delta)
    rhs = Fraction(1, 64) * lam ** 3 * Fraction(delta) * length
    return Report("diagonal_measure",
                  {"A": [[str(a), str(b)] for a, b in A.pieces], "I": [str(lo), str(hi)],
                   "delta": str(Fraction(delta))},
                  float(lhs), float(rhs), lhs >= rhs, 0.0)


# --------------------------------------------------------------------------
# rational points near a parabola

def _check_eps(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError(f"epsilon={eps} must lie in (0, 1/2)")
    return eps


def near_curve_count(T: int, eps, curve: Callable[[float], float] | None = None,
                     alpha=0, beta=3) -> int:
    """#{(a, q) : 1 <= q <= T, alpha q < a <= beta q, ||q f(a/q)|| < eps}.

    For the default f(x) = x^2 the distance ||a^2/q|| = min(r, q-r)/q with
    r = a^2 mod q is compared exactly.  A user ``curve`` is evaluated in
    floating point.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    eps = _check_eps(eps)
    alpha, beta = Fraction(alpha), Fraction(beta)
    total = 0
    for q in range(1, int(T) + 1):
        lo = math.floor(alpha * q) + 1
        hi = math.floor(beta * q)
        if hi < lo:
            continue
        a = np.arange(lo, hi + 1, dtype=object if hi > 3 * 10**9 else np.int64)
        if curve is None:
            r = (a * a) % q
            dist_num = np.minimum(r, q - r)
            # dist_num / q < eps.num / eps.den
            total += int(np.count_nonzero(dist_num * eps.denominator < eps.numerator * q))
        else:
            vals = np.array([q * curve(float(ai) / q) for ai in a])
            dist = np.abs(vals - np.round(vals))
            total += int(np.count_nonzero(dist < float(eps)))
    return total


def near_curve_table(T_values: Sequence[int], eps_values: Sequence,
                     alpha=0, beta=3) -> dict[tuple[int, Fraction], int]:
    """N(T, eps) for f(x) = x^2 on a grid, sharing one pass over q."""
    eps_values = [_check_eps(e) for e in eps_values]
    T_sorted = sorted(set(int(T) for T in T_values))
    alpha, beta = Fraction(alpha), Fraction(beta)
    counts = {e: 0 for e in eps_values}
    out = {}
    Ti = 0
    for q in range(1, T_sorted[-1] + 1):
        lo = math.floor(alpha * q) + 1
        hi = math.floor(beta * q)
        if hi >= lo:
            a = np.arange(lo, hi + 1, dtype=np.int64)
            r = (a * a) % q
            dist_num = np.minimum(r, q - r)
            for e in eps_values:
                counts[e] += int(np.count_nonzero(dist_num * e.denominator < e.numerator * q))
        while Ti < len(T_sorted) and T_sorted[Ti] == q:
            for e in eps_values:
                out[(q, e)] = counts[e]
            Ti += 1
    return out


def near_curve_envelope(T: float, eps: float, delta: float) -> float:
    return eps * T**2 + eps**-0.5 * T ** (0.5 + delta) + eps**-delta * T ** (1 + delta)


def dyadic_epsilon(t: int, Q: int, v, precision_bits: int = 64) -> Fraction:
    """2^-t Q^(2-2v); exact when rational, else rounded down to 2^-precision_bits."""
    import gmpy2

    if t < 0:
        raise ValueError("t must be a non-negative integer")
    if Q <= 1:
        raise ValueError("Q must exceed 1")
    e = 2 - 2 * Fraction(v)
    p, q = e.numerator, e.denominator
    root, exact = gmpy2.iroot(gmpy2.mpz(Q) ** abs(p), q)
    if exact:
        base = Fraction(int(root)) if p >= 0 else Fraction(1, int(root))
    else:
        scale = 2 ** precision_bits
        if p >= 0:
            k = gmpy2.iroot(gmpy2.mpz(Q) ** p * scale ** q, q)[0]
        else:
            k = gmpy2.iroot(scale ** q // gmpy2.mpz(Q) ** (-p), q)[0]
        base = Fraction(int(k), scale)
    return base / 2**t


# --------------------------------------------------------------------------
# power-law fitting

@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    max_residual: float
    points_used: int


def fit_exponent(points: Iterable[tuple[float, float]]) -> FitResult:
    """Least-squares line through (ln Q, ln count)."""
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("need at least two (Q, count) points")
    Qs = [float(q) for q, _ in pts]
    if len(set(Qs)) != len(Qs):
        raise ValueError("Q values must be distinct")
    if any(c <= 0 for _, c in pts):
        raise ValueError("zero count: increase Q or threshold")
    x = np.log(Qs)
    y = np.log([float(c) for _, c in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return FitResult(float(slope), float(intercept), float(np.max(np.abs(resid))), len(pts))


# --------------------------------------------------------------------------
# seeded sweeps

def _random_poly(rng: random.Random, max_deg: int, max_height: int, min_deg: int = 1) -> IntPolynomial:
    n = rng.randint(min_deg, max_deg)
    coeffs = [rng.randint(-max_height, max_height) for _ in range(n + 1)]
    while coeffs[-1] == 0:
        coeffs[-1] = rng.randint(-max_height, max_height)
    return IntPolynomial(tuple(coeffs))


def _product_of_linear(rng: random.Random, max_deg: int) -> IntPolynomial:
    # prod (k x - m) with |m| <= k <= 5: all roots in [-1, 1]
    coeffs = [1]
    for _ in range(rng.randint(2, max_deg)):
        k = rng.randint(1, 5)
        m = rng.randint(-k, k)
        coeffs = [k * a - m * b for a, b in zip([0] + coeffs, coeffs + [0])]
    return IntPolynomial(tuple(coeffs))


@dataclass
class SweepSummary:
    suite: str
    seed: int
    samples: int
    checked: int
    not_applicable: int
    failures: int
    failed: list

    def to_json(self) -> dict:
        return asdict(self)


def sweep_derivative_bounds(seed: int, samples: int = 1000, max_deg: int = 6,
                            max_height: int = 20) -> SweepSummary:
    rng = random.Random(seed)
    checked = na = 0
    failed = []
    for _ in range(samples):
        P = _random_poly(rng, max_deg, max_height)
        x = rng.uniform(-0.5, 0.5)
        j = rng.randrange(P.degree)
        reports = [check_derivative_upper(P, x, j)]
        if j >= 1:
            reports.append(check_derivative_lower(P, x, j))
        for rep in reports:
            if rep.passed is None:
                na += 1
            else:
                checked += 1
                if not rep.passed:
                    failed.append(rep.to_json())
    return SweepSummary("lemma3b", seed, samples, checked, na, len(failed), failed)


def sweep_root_proximity(seed: int, samples: int = 1000, max_deg: int = 6,
                         max_height: int = 20, Q: float = 10.0) -> SweepSummary:
    """Read off the profile v_j from the polynomial itself, so the sandwich
    holds by construction; cases violating d_1 >= ... >= d_n are skipped.

    x is placed at a random distance 10^-6..1 from a random root, which
    makes decreasing profiles common.
    """
    rng = random.Random(seed)
    checked = na = 0
    failed = []
    for i in range(samples):
        if i % 2:
            P = _random_poly(rng, max_deg, max_height, min_deg=2)
        else:
            P = _product_of_linear(rng, max_deg)
        alpha = rng.choice(roots(P).roots)
        r = 10 ** rng.uniform(-6, 0)
        x = alpha + r * complex(math.cos(t := rng.uniform(0, 2 * math.pi)), math.sin(t))
        vp = derivative_profile(P, x, Q)
        if vp is None:
            na += 1
            continue
        # snap to a rational near the measured value; the sandwich has slack
        vq = [Fraction(v).limit_denominator(10**6) for v in vp]
        shift = -1 - vq[-1]
        vq = [v + shift for v in vq]
        d = [vq[j - 1] - vq[j] for j in range(1, len(vq))]
        if any(d[j] < d[j + 1] for j in range(len(d) - 1)) or d[-1] < 0:
            na += 1
            continue
        # multiplying P by Q^-shift moves v_n to -1 without changing the roots
        rep = check_root_proximity(P, x, Q, d, scale=Q ** (-float(shift)))
        if rep.passed is None:
            na += 1
            continue
        checked += 1
        if not rep.passed:
            failed.append(rep.to_json())
    return SweepSummary("lemma2", seed, samples, checked, na, len(failed), failed)


def random_interval_union(rng: random.Random, max_pieces: int = 8, denom: int = 1000) -> IntervalUnion:
    k = rng.randint(1, max_pieces)
    cuts = sorted(rng.sample(range(denom + 1), 2 * k))
    return IntervalUnion(tuple((Fraction(cuts[2 * i], denom), Fraction(cuts[2 * i + 1], denom))
                               for i in range(k)))


def sweep_diagonal(seed: int, samples: int = 1000) -> SweepSummary:
    rng = random.Random(seed)
    failed = []
    for _ in range(samples):
        A = random_interval_union(rng)
        delta = Fraction(rng.randint(1, 999), 1000)
        rep = check_diagonal_bound(A, (0, 1), delta)
        if not rep.passed:
            failed.append(rep.to_json())
    return SweepSummary("lemma4", seed, samples, samples, 0, len(failed), failed)


def _near_curve_float(T: int, eps: float, alpha: float = 0.0, beta: float = 3.0):
    # floating brute force; yields (q, a, distance, counted)
    for q in range(1, T + 1):
        a = math.floor(alpha * q) + 1
        while a <= beta * q:
            y = q * (a / q) ** 2
            dist = abs(y - round(y))
            yield q, a, dist, dist < eps
            a += 1


def near_curve_crosscheck(T_max: int = 50, eps_values=(Fraction(1, 20), Fraction(1, 10),
                                                         Fraction(1, 5), Fraction(2, 5)),
                          tie_gap: float = 1e-9) -> list[dict]:
    """Compare exact and floating decisions pair by pair, skipping near-ties."""
    mismatches = []
    for e in eps_values:
        e = _check_eps(e)
        ef = float(e)
        for q, a, dist, counted in _near_curve_float(T_max, ef):
            if abs(dist - ef) <= tie_gap:
                continue
            r = (a * a) % q
            exact = Fraction(min(r, q - r), q) < e
            if exact != counted:
                mismatches.append({"q": q, "a": a, "eps": str(e)})
    return mismatches


def envelope_constant(T_exponents=range(4, 11), eps_exponents=range(2, 9),
                      delta: float = 0.1) -> tuple[float, dict]:
    """Smallest C with N(T, eps) <= C * envelope over the dyadic grid."""
    Ts = [2**k for k in T_exponents]
    eps = [Fraction(1, 2**k) for k in eps_exponents]
    table = near_curve_table(Ts, eps)
    ratios = {}
    for (T, e), N in table.items():
        ratios[(T, str(e))] = N / near_curve_envelope(T, float(e), delta)
    return max(ratios.values()), ratios
