"""Exhaustive, partitionable counting over P_n(Q) and P_n(Q)^2.

The search space is split along the plane of the two leading
coefficients: a_n ranges over the 2Q non-zero values in [-Q, Q] and
a_{n-1} over all 2Q+1 values, giving 2Q(2Q+1) cells.  A chunk is a
contiguous block of cells, so any chunking covers every polynomial
exactly once and merged counts never depend on the chunking or on the
number of workers.
"""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import gmpy2

from discres.polynomials import (
    IntPolynomial,
    bareiss_determinant,
    cubic_discriminant,
    discriminant,
    linear_resultant,
    quadratic_discriminant,
    quadratic_resultant,
    resultant,
    sylvester_matrix,
)

log = logging.getLogger(__name__)

KINDS = ("disc", "res")
_KIND_ALIASES = {"disc": "disc", "discriminant": "disc", "res": "res", "resultant": "res"}
CSV_HEADER = ("kind", "n", "Q", "threshold", "count", "total", "elapsed_s")


class ResourceCapExceeded(RuntimeError):
    """The enumeration budget ran out before every chunk was processed.

    ``partial`` sums the chunks that finished (None if none did) and
    ``watermark`` is the index of the first chunk that was not run.
    """

    def __init__(self, message: str, partial: "CountRecord | None", watermark: int):
        super().__init__(message)
        self.partial = partial
        self.watermark = watermark


def power_threshold(coef, Q: int, exponent) -> Fraction:
    """coef * Q**exponent, exact when rational, otherwise rounded down.

    ``exponent`` must be rational.  When Q**exponent is irrational the
    floor is returned; the sets being counted only contain integer
    values of |D| or |R|, so the floor selects exactly the same set.
    """
    coef = Fraction(coef)
    e = Fraction(exponent)
    if coef < 0:
        raise ValueError("threshold coefficient must be non-negative")
    if Q < 1:
        raise ValueError("Q must be a positive integer")
    p, q = e.numerator, e.denominator
    root, exact = gmpy2.iroot(gmpy2.mpz(Q) ** abs(p), q)
    if exact:
        val = Fraction(int(root)) if p >= 0 else Fraction(1, int(root))
        return coef * val
    num = coef.numerator ** q
    den = coef.denominator ** q
    if p >= 0:
        num *= Q ** p
    else:
        den *= Q ** (-p)
    return Fraction(int(gmpy2.iroot(gmpy2.mpz(num // den), q)[0]))


def discriminant_threshold(n: int, Q: int, v, gamma=1) -> Fraction:
    """B = gamma * Q^(2n-2-2v)."""
    return power_threshold(gamma, Q, 2 * n - 2 - 2 * Fraction(v))


def resultant_threshold(n: int, Q: int, w, rho=1) -> Fraction:
    """B = rho * Q^(2n-2w)."""
    return power_threshold(rho, Q, 2 * n - 2 * Fraction(w))


@dataclass(frozen=True)
class CountTask:
    kind: str
    n: int
    Q: int
    threshold: Fraction
    chunk: tuple[int, int] = (0, 1)

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind)
        if kind is None:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "threshold", Fraction(self.threshold))
        object.__setattr__(self, "chunk", tuple(self.chunk))
        if self.n < (2 if kind == "disc" else 1):
            raise ValueError(f"degree n={self.n} too small for kind {kind!r}")
        if self.Q < 1:
            raise ValueError("Q must be >= 1")
        if self.threshold < 0:
            raise ValueError("threshold must be non-negative")
        index, count = self.chunk
        if count < 1 or not 0 <= index < count:
            raise ValueError(f"invalid chunk {self.chunk}")

    @property
    def bound(self) -> int:
        """Largest admissible |D| or |R| (they are integers)."""
        return math.floor(self.threshold)

    def key(self):
        return (self.kind, self.n, self.Q, self.threshold)


@dataclass(frozen=True)
class CountRecord:
    task: CountTask
    count: int
    total: int
    elapsed: float = field(default=0.0, compare=False)

    def as_dict(self, timing: bool = True) -> dict:
        return {
            "kind": self.task.kind,
            "n": self.task.n,
            "Q": self.task.Q,
            "threshold": str(self.task.threshold),
            "count": self.count,
            "total": self.total,
            "elapsed_s": float(f"{self.elapsed:.12g}") if timing else None,
        }

    def as_row(self, timing: bool = True) -> list[str]:
        d = self.as_dict(timing)
        d["elapsed_s"] = f"{self.elapsed:.12g}" if timing else ""
        return [str(d[k]) for k in CSV_HEADER]


# --------------------------------------------------------------------------
# enumeration of P_n(Q)

def plane_size(Q: int) -> int:
    return 2 * Q * (2 * Q + 1)


def chunk_bounds(index: int, count: int, Q: int) -> tuple[int, int]:
    N = plane_size(Q)
    return index * N // count, (index + 1) * N // count


def _cell(k: int, Q: int) -> tuple[int, int]:
    w = 2 * Q + 1
    i, b = divmod(k, w)
    a = i - Q if i < Q else i - Q + 1
    return a, b - Q


def size_Pn(n: int, Q: int) -> int:
    return 2 * Q * (2 * Q + 1) ** n


def enumerate_Pn(n: int, Q: int, chunk: tuple[int, int] = (0, 1)) -> Iterator[IntPolynomial]:
    """Yield the polynomials of exact degree n and height <= Q in ``chunk``.

    Within a chunk the order is lexicographic in (a_n, a_{n-1}, ..., a_0).
    """
    if n < 1 or Q < 1:
        raise ValueError("need n >= 1 and Q >= 1")
    start, stop = chunk_bounds(chunk[0], chunk[1], Q)
    span = range(-Q, Q + 1)
    for k in range(start, stop):
        an, an1 = _cell(k, Q)
        if n == 1:
            yield IntPolynomial((an1, an))
            continue
        for rest in product(span, repeat=n - 1):
            yield IntPolynomial(tuple(reversed((an, an1) + rest)))


def _chunk_total(task: CountTask) -> int:
    start, stop = chunk_bounds(task.chunk[0], task.chunk[1], task.Q)
    cells = stop - start
    per_cell = (2 * task.Q + 1) ** (task.n - 1)
    if task.kind == "res":
        per_cell *= size_Pn(task.n, task.Q)
    return cells * per_cell


# --------------------------------------------------------------------------
# fast-path validation

@lru_cache(maxsize=None)
def _validated(kind: str, n: int) -> bool:
    """Check a closed form and its compiled kernel before first use."""
    from discres import _kernels

    rng = random.Random(20240601 + 10 * n + (kind == "res"))
    trials = 10_000 if (kind, n) == ("disc", 3) else 2_000
    for _ in range(trials):
        h = rng.choice((3, 20, 1000))
        if kind == "disc":
            c = [rng.randint(-h, h) for _ in range(n + 1)]
            if c[0] == 0:
                c[0] = 1
            fast = quadratic_discriminant(*c) if n == 2 else cubic_discriminant(*c)
            slow = discriminant(IntPolynomial.from_descending(*c))
        else:
            a = [rng.randint(-h, h) for _ in range(n + 1)]
            b = [rng.randint(-h, h) for _ in range(n + 1)]
            a[0] = a[0] or 1
            b[0] = b[0] or 1
            fast = linear_resultant(*a, *b) if n == 1 else quadratic_resultant(*a, *b)
            slow = resultant(IntPolynomial.from_descending(*a), IntPolynomial.from_descending(*b))
        if fast != slow:
            raise AssertionError(f"closed form for {kind} n={n} disagrees with Sylvester path")

    kernel = _kernels.KERNELS[(kind, n)]
    Q = 2 if (kind, n) != ("res", 2) else 1
    for B in (0, 1, 7, 10**6):
        task = CountTask(kind, n, Q, B)
        got = kernel(Q, B, 0, plane_size(Q))
        want = _count_generic(task)
        if got != want:
            raise AssertionError(f"compiled kernel for {kind} n={n} disagrees: {got} != {want}")
    return True


def has_fast_path(kind: str, n: int, Q: int) -> bool:
    from discres import _kernels

    limit = _kernels.SAFE_Q.get((kind, n))
    return limit is not None and Q <= limit


# --------------------------------------------------------------------------
# counting

def _count_generic(task: CountTask) -> int:
    B = task.bound
    if B < 1:
        return 0
    cnt = 0
    if task.kind == "disc":
        for P in enumerate_Pn(task.n, task.Q, task.chunk):
            if 1 <= abs(discriminant(P)) <= B:
                cnt += 1
        return cnt
    n = task.n
    others = [P.descending() for P in enumerate_Pn(n, task.Q)]
    size = 2 * n
    for P1 in enumerate_Pn(n, task.Q, task.chunk):
        # P1 rows are shared by every P2
        top = sylvester_matrix(P1, P1)[:n]
        for b in others:
            rows = top + [[0] * i + list(b) + [0] * (size - n - 1 - i) for i in range(n)]
            if 1 <= abs(bareiss_determinant(rows)) <= B:
                cnt += 1
    return cnt


def count_chunk(task: CountTask, fast: bool = True) -> CountRecord:
    """Count the members of the set described by ``task`` in its chunk."""
    t0 = time.perf_counter()
    B = task.bound
    if B < 1:
        cnt = 0
    elif fast and has_fast_path(task.kind, task.n, task.Q):
        from discres import _kernels

        _validated(task.kind, task.n)
        start, stop = chunk_bounds(task.chunk[0], task.chunk[1], task.Q)
        B = min(B, 2**62)
        cnt = int(_kernels.KERNELS[(task.kind, task.n)](task.Q, B, start, stop))
    else:
        cnt = _count_generic(task)
    return CountRecord(task, cnt, _chunk_total(task), time.perf_counter() - t0)


def _count_chunk_slow(task: CountTask) -> CountRecord:
    return count_chunk(task, fast=False)


def run_count(task: CountTask, workers: int = 1, chunks: int | None = None,
              max_enumerated: int | None = None, fast: bool = True) -> CountRecord:
    """Split ``task`` into chunks, count them on ``workers`` workers and merge.

    Compiled kernels release the GIL and run on threads; the generic
    big-integer path runs in worker processes.
    """
    if task.chunk != (0, 1):
        return count_chunk(task, fast=fast)
    workers = max(1, int(workers))
    chunks = workers if chunks is None else int(chunks)
    chunks = max(1, min(chunks, plane_size(task.Q)))
    subtasks = [replace(task, chunk=(i, chunks)) for i in range(chunks)]

    watermark = chunks
    if max_enumerated is not None:
        budget = 0
        for i, sub in enumerate(subtasks):
            budget += _chunk_total(sub)
            if budget > max_enumerated:
                watermark = i
                break
    runnable = subtasks[:watermark]

    use_kernel = fast and has_fast_path(task.kind, task.n, task.Q) and task.bound >= 1
    if use_kernel:
        _validated(task.kind, task.n)
    if workers == 1 or len(runnable) <= 1:
        records = [count_chunk(sub, fast=fast) for sub in runnable]
    elif use_kernel:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(count_chunk, runnable))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            fn = count_chunk if fast else _count_chunk_slow
            records = list(pool.map(fn, runnable))

    if watermark < chunks:
        partial = _sum_records(task, records) if records else None
        raise ResourceCapExceeded(
            f"enumeration cap {max_enumerated} reached at chunk {watermark}/{chunks}",
            partial, watermark)
    return merge(records)


def _sum_records(task: CountTask, records: Sequence[CountRecord]) -> CountRecord:
    return CountRecord(replace(task, chunk=(0, 1)),
                       sum(r.count for r in records),
                       sum(r.total for r in records),
                       sum(r.elapsed for r in records))


def merge(records: Sequence[CountRecord]) -> CountRecord:
    """Combine the records of a complete, disjoint chunking."""
    if not records:
        raise ValueError("cannot merge an empty list of records")
    first = records[0].task
    count = first.chunk[1]
    seen = set()
    for r in records:
        if r.task.key() != first.key():
            raise ValueError(f"mismatched task parameters: {r.task.key()} vs {first.key()}")
        if r.task.chunk[1] != count:
            raise ValueError("records come from different chunkings")
        if r.task.chunk[0] in seen:
            raise ValueError(f"duplicate chunk index {r.task.chunk[0]}")
        seen.add(r.task.chunk[0])
    missing = set(range(count)) - seen
    if missing:
        raise ValueError(f"missing chunk(s) {sorted(missing)} of {count}")
    return _sum_records(first, records)


def count_discriminants(task: CountTask, workers: int = 1, chunks: int | None = None,
                        max_enumerated: int | None = None) -> CountRecord:
    """#{P in P_n(Q) : 1 <= |D(P)| <= B} over the task's chunk."""
    if task.kind != "disc":
        raise ValueError("count_discriminants needs a discriminant task")
    return run_count(task, workers, chunks, max_enumerated)


def count_resultants(task: CountTask, workers: int = 1, chunks: int | None = None,
                     max_enumerated: int | None = None) -> CountRecord:
    """#{(P1, P2) in P_n(Q)^2 : 0 < |R(P1, P2)| <= B}, ordered pairs."""
    if task.kind != "res":
        raise ValueError("count_resultants needs a resultant task")
    return run_count(task, workers, chunks, max_enumerated)
