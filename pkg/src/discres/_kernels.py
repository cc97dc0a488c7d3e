"""Compiled counting loops for the closed-form fast paths.

Each kernel walks a contiguous block of cells of the (a_n, a_{n-1})
plane and exhaustively enumerates the remaining coefficients.  Cell
index ``k`` maps to ``a_n = lead_values[k // (2Q+1)]`` and
``a_{n-1} = k % (2Q+1) - Q`` where ``lead_values`` skips zero.

All arithmetic is int64; callers must respect ``SAFE_Q``.
"""

import numba

# |value| stays below 2**62 for heights up to these bounds
SAFE_Q = {
    ("disc", 2): 10**8,
    ("disc", 3): 15000,
    ("res", 1): 10**8,
    ("res", 2): 15000,
}


@numba.njit(nogil=True, cache=True)
def _lead(i, Q):
    v = i - Q
    return v if v < 0 else v + 1


@numba.njit(nogil=True, cache=True)
def count_disc2(Q, B, start, stop):
    w = 2 * Q + 1
    cnt = 0
    for k in range(start, stop):
        a = _lead(k // w, Q)
        b = k % w - Q
        bb = b * b
        for c in range(-Q, Q + 1):
            d = bb - 4 * a * c
            if d < 0:
                d = -d
            if d >= 1 and d <= B:
                cnt += 1
    return cnt


@numba.njit(nogil=True, cache=True)
def count_disc3(Q, B, start, stop):
    w = 2 * Q + 1
    cnt = 0
    for k in range(start, stop):
        a = _lead(k // w, Q)
        b = k % w - Q
        for c in range(-Q, Q + 1):
            t0 = b * b * c * c - 4 * a * c * c * c
            t1 = 18 * a * b * c - 4 * b * b * b
            aa27 = 27 * a * a
            for d in range(-Q, Q + 1):
                D = t0 + t1 * d - aa27 * d * d
                if D < 0:
                    D = -D
                if D >= 1 and D <= B:
                    cnt += 1
    return cnt


@numba.njit(nogil=True, cache=True)
def count_res1(Q, B, start, stop):
    # P1 = a1 x + a0 from the cell, P2 = b1 x + b0 over all of P_1(Q)
    w = 2 * Q + 1
    cnt = 0
    for k in range(start, stop):
        a1 = _lead(k // w, Q)
        a0 = k % w - Q
        for b1 in range(-Q, Q + 1):
            if b1 == 0:
                continue
            for b0 in range(-Q, Q + 1):
                R = a1 * b0 - a0 * b1
                if R < 0:
                    R = -R
                if R >= 1 and R <= B:
                    cnt += 1
    return cnt


@numba.njit(nogil=True, cache=True)
def count_res2(Q, B, start, stop):
    w = 2 * Q + 1
    cnt = 0
    for k in range(start, stop):
        a2 = _lead(k // w, Q)
        a1 = k % w - Q
        for a0 in range(-Q, Q + 1):
            for b2 in range(-Q, Q + 1):
                if b2 == 0:
                    continue
                for b1 in range(-Q, Q + 1):
                    v = a2 * b1 - a1 * b2
                    for b0 in range(-Q, Q + 1):
                        u = a2 * b0 - a0 * b2
                        R = u * u - v * (a1 * b0 - a0 * b1)
                        if R < 0:
                            R = -R
                        if R >= 1 and R <= B:
                            cnt += 1
    return cnt


KERNELS = {
    ("disc", 2): count_disc2,
    ("disc", 3): count_disc3,
    ("res", 1): count_res1,
    ("res", 2): count_res2,
}
