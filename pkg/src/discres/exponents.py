"""Optimal root-separation profiles and the degree staircase.

Both counting lower bounds come from a small linear program over the
root-distance exponents d_1 >= ... >= d_n >= 0; the optimum puts
d_2 = ... = d_n and the solutions have closed forms.  Everything here
is exact ``Fraction`` arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _rational(value, name: str) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"{name} must be an exact rational (int, Fraction or 'p/q'), not float")
    return Fraction(value)


def _vprofile_from_d(d: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    # v_n = -1 and v_{j-1} = v_j + d_j
    n = len(d)
    v = [Fraction(0)] * (n + 1)
    v[n] = Fraction(-1)
    for j in range(n, 0, -1):
        v[j - 1] = v[j] + d[j - 1]
    return tuple(v)


@dataclass(frozen=True)
class ExponentProfile:
    """Root-distance exponents for polynomials with |D(P)| <= Q^(2n-2-2v)."""

    n: int
    v: Fraction
    d: tuple[Fraction, ...]
    vprofile: tuple[Fraction, ...]
    exponent: Fraction
    boundary: bool = False  # v = n-1, where gamma cannot be taken as 1

    @classmethod
    def from_d(cls, n: int, v, d) -> "ExponentProfile":
        d = tuple(Fraction(x) for x in d)
        if len(d) != n:
            raise ValueError("need exactly n exponents d_1..d_n")
        return cls(n, Fraction(v), d, _vprofile_from_d(d), d[0], Fraction(v) == n - 1)

    def to_json(self) -> dict:
        return {
            "kind": "disc",
            "n": self.n,
            "v": str(self.v),
            "d": [str(x) for x in self.d],
            "vprofile": [str(x) for x in self.vprofile],
            "exponent": str(self.exponent),
            "boundary": self.boundary,
        }


@dataclass(frozen=True)
class ResultantProfile:
    """Exponents for pairs with |R(P1, P2)| <= Q^(2n-2w); t is the
    exponent of the distance between the two base points."""

    n: int
    w: Fraction
    d: tuple[Fraction, ...]
    t: Fraction
    case: str
    exponent: Fraction
    vprofile: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        if not self.vprofile:
            object.__setattr__(self, "vprofile", _vprofile_from_d(self.d))

    def to_json(self) -> dict:
        return {
            "kind": "res",
            "n": self.n,
            "w": str(self.w),
            "d": [str(x) for x in self.d],
            "t": str(self.t),
            "case": self.case,
            "exponent": str(self.exponent),
        }


def discriminant_profile(n: int, v: Rational) -> ExponentProfile:
    """Maximise d_1 subject to sum j d_j = n+1, sum d_j = n+1-v, d decreasing.

    With d_2 = ... = d_n the two equations give d_2 = 2v/(n(n-1)) and
    d_1 = n+1 - (n+2)v/n, which is the predicted count exponent.
    """
    if n < 2:
        raise ValueError("discriminant profiles need n >= 2")
    v = _rational(v, "v")
    if not 0 <= v <= n - 1:
        raise ValueError(
            f"v={v}: the range of v is [0, n-1] = [0, {n - 1}], since "
            "|D(P)| >= 1 and |D(P)| << Q^(2n-2)")
    d2 = 2 * v / (n * (n - 1))
    d1 = n + 1 - Fraction(n + 2, n) * v
    return ExponentProfile.from_d(n, v, (d1,) + (d2,) * (n - 1))


def resultant_profile(n: int, w: Rational) -> ResultantProfile:
    """Maximise 2 d_1 - t subject to the resultant constraints.

    For w <= (n+1)/2 the unconstrained optimum d_2 = 0, t = 2w is
    feasible.  Beyond that t <= d_1 binds and the smallest admissible
    d_2 is (4w - 2n - 2) / (n(n-1)), with t = d_1.
    """
    if n < 1:
        raise ValueError("resultant profiles need n >= 1")
    w = _rational(w, "w")
    if not 0 <= w <= n:
        raise ValueError(
            f"w={w}: the range of w is [0, n] = [0, {n}], since "
            "|R| >= 1 and |R| << Q^(2n)")
    if 2 * w <= n + 1:
        d = (Fraction(n + 1),) + (Fraction(0),) * (n - 1)
        t = 2 * w
        return ResultantProfile(n, w, d, t, "low_w", 2 * d[0] - t)
    d2 = Fraction(4 * w - 2 * n - 2, n * (n - 1))
    d1 = 2 * n + 2 - 2 * w - Fraction(2, n) * (2 * w - n - 1)
    d = (d1,) + (d2,) * (n - 1)
    return ResultantProfile(n, w, d, d1, "high_w", d1)


@dataclass(frozen=True)
class Residual:
    name: str
    value: Fraction
    kind: str  # "eq": value must be 0; "ineq": value must be >= 0

    @property
    def ok(self) -> bool:
        return self.value == 0 if self.kind == "eq" else self.value >= 0


def verify_profile(profile) -> list[Residual]:
    """Exact residual of every constraint the profile should satisfy."""
    n, d = profile.n, profile.d
    out = [Residual("sum j*d_j = n+1", sum((j + 1) * x for j, x in enumerate(d)) - (n + 1), "eq")]
    for j in range(n - 1):
        out.append(Residual(f"d_{j + 1} >= d_{j + 2}", d[j] - d[j + 1], "ineq"))
    out.append(Residual(f"d_{n} >= 0", d[-1], "ineq"))
    vp = profile.vprofile
    for j in range(1, n + 1):
        out.append(Residual(f"v_{j - 1} - v_{j} = d_{j}", vp[j - 1] - vp[j] - d[j - 1], "eq"))
    out.append(Residual("sum v_j = 0", sum(vp), "eq"))
    out.append(Residual("v_n = -1", vp[n] + 1, "eq"))

    if isinstance(profile, ExponentProfile):
        out.append(Residual("sum d_j = n+1-v", sum(d) - (n + 1 - profile.v), "eq"))
        out.append(Residual("exponent = d_1", profile.exponent - d[0], "eq"))
        return out

    t, w = profile.t, profile.w
    rest = sum(d[1:], Fraction(0))
    out.append(Residual("d_1 >= t", d[0] - t, "ineq"))
    out.append(Residual("t >= d_2", t - (d[1] if n > 1 else 0), "ineq"))
    out.append(Residual("2d_1 - t + sum_{j>=2} d_j = 2n+2-2w", 2 * d[0] - t + rest - (2 * n + 2 - 2 * w), "eq"))
    if all(x == d[1] for x in d[1:]):
        d2 = d[1] if n > 1 else Fraction(0)
        out.append(Residual("2d_1 + (n-1)(n+2)d_2 = 2n+2", 2 * d[0] + (n - 1) * (n + 2) * d2 - (2 * n + 2), "eq"))
        out.append(Residual("(n^2-1)d_2 + t = 2w", (n * n - 1) * d2 + t - 2 * w, "eq"))
    out.append(Residual("exponent = 2d_1 - t", profile.exponent - (2 * d[0] - t), "eq"))
    return out


# --------------------------------------------------------------------------
# comparing degrees

def degree_exponent(k: int, x: Rational) -> Fraction:
    """Count exponent contributed by degree-k polynomials with |D| <= Q^x."""
    if k < 2:
        raise ValueError("k must be >= 2")
    x = _rational(x, "x")
    if x < 0:
        raise ValueError("x must be >= 0")
    return k + 1 - Fraction(k + 2, k) * (k - 1 - min(Fraction(k - 1), x / 2))


def staircase_argmax(n: int, x: Rational) -> tuple[Fraction, int]:
    """(max_{2<=k<=n} f_k(x), smallest maximising k)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    best, arg = None, None
    for k in range(2, n + 1):
        val = degree_exponent(k, x)
        if best is None or val > best:
            best, arg = val, k
    return best, arg


def staircase(n: int, x: Rational) -> Fraction:
    """d_n(x), checked against the explicit piecewise form."""
    value, _ = staircase_argmax(n, x)
    explicit = staircase_explicit(n, x)
    if value != explicit:
        raise AssertionError(f"staircase forms disagree at n={n}, x={x}: {value} != {explicit}")
    return value


def staircase_explicit(n: int, x: Rational) -> Fraction:
    """Piecewise-linear closed form of d_n(x).

    Plateau at height k on [2k-4, 2k-4 + 4/(k+2)] (the cap of f_{k-1}),
    then the rising line of f_k up to 2k-2.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    x = _rational(x, "x")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x <= 2:
        return x + 1
    if x >= 2 * n - 2:
        return Fraction(n + 1)
    for k in range(3, n + 1):
        knee = 2 * k - 4 + Fraction(4, k + 2)
        if 2 * k - 4 <= x <= knee:
            return Fraction(k)
        if knee <= x <= 2 * k - 2:
            return Fraction(2, k) + Fraction(k + 2, 2 * k) * x
    raise AssertionError("unreachable")


def resultant_union_exponent(n: int, x: Rational) -> Fraction:
    """Exponent x+2 for pairs of degree <= n with |R| <= Q^x."""
    x = _rational(x, "x")
    if not 0 <= x <= 2 * n + 2:
        raise ValueError(f"x={x} outside [0, {2 * n + 2}]")
    return x + 2
