"""PSLQ integer-relation search (Ferguson-Bailey) in mpmath arithmetic.

Written out here instead of calling ``mpmath.pslq`` because callers need a
cooperative deadline; mpmath's routine cannot be interrupted.
"""

from __future__ import annotations

import time

import mpmath as mp


class DeadlineExceeded(Exception):
    pass


def _reduce_row(h, a, b, y, i, j):
    if h[j][j] == 0:
        return
    t = mp.nint(h[i][j] / h[j][j])
    if not t:
        return
    ti = int(t)
    y[j] += t * y[i]
    for col in range(j + 1):
        h[i][col] -= t * h[j][col]
    n = len(y)
    for col in range(n):
        a[i][col] -= ti * a[j][col]
        b[col][j] += ti * b[col][i]


def pslq(x, tol, maxcoeff, deadline=None, maxsteps=100_000):
    """Search an integer vector q with |q . x| < tol and max |q_j| <= maxcoeff.

    Must be called inside an ``mp.workdps`` block at the desired precision.
    Returns the relation as a list of ints, or None once every relation is
    provably longer than ``sqrt(n) * maxcoeff`` (so none meets the bound) or
    ``maxsteps`` iterations pass.  ``deadline`` is a ``time.monotonic()``
    value; passing it raises DeadlineExceeded.
    """
    x = [mp.mpf(v) for v in x]
    n = len(x)
    for j, v in enumerate(x):
        if abs(v) < tol:
            return [1 if c == j else 0 for c in range(n)]
    if n < 2:
        return None
    norm_limit = mp.sqrt(n) * maxcoeff
    gamma = mp.mpf("1.2")

    s = [mp.mpf(0)] * n
    for k in range(n):
        s[k] = mp.sqrt(mp.fsum(v * v for v in x[k:]))
    t0 = s[0]
    y = [v / t0 for v in x]
    s = [v / t0 for v in s]
    h = [[mp.mpf(0)] * (n - 1) for _ in range(n)]
    for i in range(n):
        for j in range(n - 1):
            if i == j:
                h[i][j] = s[j + 1] / s[j]
            elif i > j:
                h[i][j] = -y[i] * y[j] / (s[j] * s[j + 1])
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    b = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(1, n):
        for j in range(i - 1, -1, -1):
            _reduce_row(h, a, b, y, i, j)

    for _ in range(maxsteps):
        if deadline is not None and time.monotonic() > deadline:
            raise DeadlineExceeded
        m = max(range(n - 1), key=lambda i: gamma ** (i + 1) * abs(h[i][i]))
        y[m], y[m + 1] = y[m + 1], y[m]
        h[m], h[m + 1] = h[m + 1], h[m]
        a[m], a[m + 1] = a[m + 1], a[m]
        for row in b:
            row[m], row[m + 1] = row[m + 1], row[m]
        if m < n - 2:
            t0 = mp.sqrt(h[m][m] ** 2 + h[m][m + 1] ** 2)
            if t0 == 0:
                break
            t1, t2 = h[m][m] / t0, h[m][m + 1] / t0
            for i in range(m, n):
                t3, t4 = h[i][m], h[i][m + 1]
                h[i][m] = t1 * t3 + t2 * t4
                h[i][m + 1] = -t2 * t3 + t1 * t4
        for i in range(m + 1, n):
            for j in range(min(i - 1, m + 1), -1, -1):
                _reduce_row(h, a, b, y, i, j)

        best = None
        for j in range(n):
            if abs(y[j]) < tol:
                cand = [b[r][j] for r in range(n)]
                if any(cand) and (best is None or max(map(abs, cand)) < max(map(abs, best))):
                    best = cand
        if best is not None:
            return best if max(map(abs, best)) <= maxcoeff else None
        diag = max(abs(h[j][j]) for j in range(n - 1))
        if diag == 0:
            break
        if 1 / diag > norm_limit:
            return None
    return None
