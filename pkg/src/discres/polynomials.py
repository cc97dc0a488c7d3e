"""Exact integer polynomials, Sylvester determinants and complex roots.

Discriminants and resultants are computed exactly from the Sylvester
matrix with fraction-free (Bareiss) elimination.  The root finder exists
only to cross-check the exact values against the root-product formulas
and to drive the derivative/root-distance checks in ``verification``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath


class RootFindingError(ArithmeticError):
    """Raised when simultaneous iteration fails to converge.

    ``best`` holds the last iterate so callers can inspect it.
    """

    def __init__(self, message: str, best: Sequence[complex]):
        super().__init__(message)
        self.best = tuple(best)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial; ``coeffs[i]`` is the coefficient of x**i."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if not coeffs or coeffs[-1] == 0:
            raise ValueError("leading coefficient must be non-zero")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_descending(cls, *coeffs: int) -> "IntPolynomial":
        """Build from a_n, a_{n-1}, ..., a_0 (the usual written order)."""
        return cls(tuple(reversed(coeffs)))

    @classmethod
    def from_roots(cls, roots: Sequence[int], leading: int = 1) -> "IntPolynomial":
        coeffs = [leading]
        for r in roots:
            # multiply by (x - r), coefficients kept in ascending order
            shifted = [0] + coeffs
            coeffs = [s - r * c for s, c in zip(shifted, coeffs + [0])]
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    def descending(self) -> tuple[int, ...]:
        return self.coeffs[::-1]

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def derivative(P: IntPolynomial) -> IntPolynomial:
    if P.degree < 1:
        raise ValueError("constant polynomial has no degree-(n-1) derivative of interest")
    return IntPolynomial(tuple(i * c for i, c in enumerate(P.coeffs) if i > 0))


def evaluate(P: IntPolynomial, x):
    """Horner evaluation; exact for int/Fraction arguments."""
    acc = 0
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


def taylor_coefficient(P: IntPolynomial, j: int, x):
    """Return P^{(j)}(x) / j!, the j-th Taylor coefficient of P at x.

    Computed without forming factorials: the coefficient of x**i
    contributes binom(i, j) * a_i * x**(i - j).
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    acc = 0
    for i in range(P.degree, j - 1, -1):
        acc = acc * x + math.comb(i, j) * P.coeffs[i]
    return acc


def sylvester_matrix(P1: IntPolynomial, P2: IntPolynomial) -> list[list[int]]:
    """(n+m) x (n+m) Sylvester matrix: m shifted rows of P1, then n of P2."""
    n, m = P1.degree, P2.degree
    if n < 1 or m < 1:
        raise ValueError("Sylvester matrix needs both degrees >= 1")
    size = n + m
    a = P1.descending()
    b = P2.descending()
    rows = []
    for i in range(m):
        rows.append([0] * i + list(a) + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + list(b) + [0] * (size - m - 1 - i))
    return rows


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination.

    Every division in the Bareiss recurrence is exact, so only Python
    integers ever appear.
    """
    M = [list(row) for row in matrix]
    size = len(M)
    if size == 0:
        return 1
    if any(len(row) != size for row in M):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(size - 1):
        if M[k][k] == 0:
            for r in range(k + 1, size):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        row_k = M[k]
        for i in range(k + 1, size):
            row_i = M[i]
            lead = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * M[-1][-1]


def resultant(P1: IntPolynomial, P2: IntPolynomial) -> int:
    return bareiss_determinant(sylvester_matrix(P1, P2))


def discriminant(P: IntPolynomial) -> int:
    """D(P) = (-1)^{n(n-1)/2} R(P, P') / a_n, exactly."""
    n = P.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    R = resultant(P, derivative(P))
    q, r = divmod(R, P.leading)
    if r != 0:
        raise ArithmeticError(f"R(P, P') = {R} not divisible by a_n = {P.leading}")
    return -q if (n * (n - 1) // 2) % 2 else q


def quadratic_discriminant(a: int, b: int, c: int) -> int:
    """Discriminant of a*x^2 + b*x + c."""
    return b * b - 4 * a * c


def cubic_discriminant(a: int, b: int, c: int, d: int) -> int:
    """Discriminant of a*x^3 + b*x^2 + c*x + d."""
    return (b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d
            - 27 * a * a * d * d + 18 * a * b * c * d)


def linear_resultant(a1: int, a0: int, b1: int, b0: int) -> int:
    """R(a1*x + a0, b1*x + b0)."""
    return a1 * b0 - a0 * b1


def quadratic_resultant(a2: int, a1: int, a0: int, b2: int, b1: int, b0: int) -> int:
    """R(a2*x^2 + a1*x + a0, b2*x^2 + b1*x + b0)."""
    u = a2 * b0 - a0 * b2
    return u * u - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1)


def discriminant_bound_constant(n: int) -> int:
    """gamma_n = (2n-1)! * n^(2n-1), so |D(P)| <= gamma_n * H(P)^(2n-2).

    This dominates Mahler's bound n^n (n+1)^(n-1) H^(2n-2), which is
    what actually makes it valid.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    return math.factorial(2 * n - 1) * n ** (2 * n - 1)


def resultant_bound_constant(n: int, m: int | None = None) -> int:
    """rho with |R(P1, P2)| <= rho * Q^(n+m) for heights <= Q.

    Hadamard's inequality on the Sylvester rows gives
    (m+1)^(n/2) (n+1)^(m/2); rounded up to an integer.
    """
    m = n if m is None else m
    return math.isqrt((m + 1) ** n * (n + 1) ** m) + 1


# --------------------------------------------------------------------------
# complex roots

@dataclass(frozen=True)
class RootSet:
    """Approximate roots with a per-root inclusion radius."""

    roots: tuple[complex, ...]
    radii: tuple[float, ...]

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def radius(self) -> float:
        return max(self.radii) if self.radii else 0.0

    def min_gap(self) -> float:
        gaps = [abs(a - b) for i, a in enumerate(self.roots) for b in self.roots[i + 1:]]
        return min(gaps) if gaps else math.inf


def _aberth(coeffs, z, tol, maxiter):
    """In-place Gauss-Seidel Aberth iteration on a monic polynomial.

    ``coeffs`` are descending, generic over complex / mpc numbers.
    Returns (roots, converged).
    """
    n = len(z)
    for _ in range(maxiter):
        worst = 0
        for i in range(n):
            zi = z[i]
            p = coeffs[0]
            dp = 0
            for c in coeffs[1:]:
                dp = dp * zi + p
                p = p * zi + c
            if p == 0:
                continue
            s = 0
            for k in range(n):
                if k != i:
                    diff = zi - z[k]
                    if diff != 0:
                        s += 1 / diff
            if dp == 0:
                denom = 1
                for k in range(n):
                    if k != i and zi != z[k]:
                        denom *= zi - z[k]
                w = p / denom
            else:
                ratio = p / dp
                w = ratio / (1 - ratio * s)
            z[i] = zi - w
            step = abs(w) / max(1, abs(zi))
            if step > worst:
                worst = step
        if worst <= tol:
            return z, True
    return z, False


def _weierstrass_radii(coeffs, z):
    # n |W_i| with W_i = p(z_i) / prod_{k != i}(z_i - z_k) bounds the
    # distance to the nearest root (disjoint discs isolate single roots).
    n = len(z)
    out = []
    for i in range(n):
        p = coeffs[0]
        for c in coeffs[1:]:
            p = p * z[i] + c
        denom = 1
        for k in range(n):
            if k != i:
                denom *= z[i] - z[k]
        if denom == 0:
            out.append(math.inf)
        else:
            out.append(float(n * abs(p / denom)))
    return out


def roots(P: IntPolynomial, maxiter: int = 500) -> RootSet:
    """All complex roots of P by Aberth iteration.

    A double-precision pass is refined in multiprecision when roots cluster
    (gap < 1e-3) or the fast pass stalls, so repeated roots still come
    back accurate to double precision.
    """
    n = P.degree
    if n < 1:
        raise ValueError("roots needs degree >= 1")
    lead = P.leading
    monic = [complex(c) / lead for c in P.descending()]
    radius0 = 1 + P.height / abs(lead)
    z = [radius0 * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    z, ok = _aberth(monic, z, 1e-15, maxiter)

    gaps = [abs(a - b) for i, a in enumerate(z) for b in z[i + 1:]]
    if ok and (not gaps or min(gaps) >= 1e-3):
        radii = _weierstrass_radii(monic, z)
        radii = [r + 4e-16 * max(1.0, abs(zi)) for r, zi in zip(radii, z)]
        return RootSet(tuple(z), tuple(radii))

    # an m-fold root is only resolved to about eps^(1/m)
    dps = max(60, 25 * n)
    with mpmath.workdps(dps):
        mono = [mpmath.mpf(c) / lead for c in P.descending()]
        zm = [mpmath.mpc(zi.real, zi.imag) for zi in z]
        zm, ok = _aberth(mono, zm, mpmath.mpf(10) ** (2 - dps // n), 20 * maxiter)
        if not ok:
            raise RootFindingError(f"Aberth iteration did not converge for {P}",
                                   [complex(w) for w in zm])
        radii = _weierstrass_radii(mono, zm)
        out = [complex(w) for w in zm]
    radii = [r + 4e-16 * max(1.0, abs(zi)) for r, zi in zip(radii, out)]
    return RootSet(tuple(out), tuple(radii))


def sort_roots_by_distance(R: RootSet, x: complex) -> RootSet:
    """Order roots so |x - alpha_1| <= ... <= |x - alpha_n|, stable on ties."""
    order = sorted(range(len(R.roots)), key=lambda i: abs(x - R.roots[i]))
    return RootSet(tuple(R.roots[i] for i in order), tuple(R.radii[i] for i in order))


def discriminant_from_roots(P: IntPolynomial) -> complex:
    """a_n^{2n-2} * prod_{i<j} (alpha_i - alpha_j)^2 from numerical roots."""
    n = P.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    z = roots(P).roots
    prod = complex(1)
    for i in range(n):
        for j in range(i + 1, n):
            prod *= (z[i] - z[j]) ** 2
    return P.leading ** (2 * n - 2) * prod


def resultant_from_roots(P1: IntPolynomial, P2: IntPolynomial) -> complex:
    """a_n^m * prod_i P2(alpha_i), alpha_i the roots of P1."""
    if P1.degree < 1 or P2.degree < 1:
        raise ValueError("resultant needs both degrees >= 1")
    prod = complex(P1.leading ** P2.degree)
    for alpha in roots(P1).roots:
        prod *= evaluate(P2, alpha)
    return prod
