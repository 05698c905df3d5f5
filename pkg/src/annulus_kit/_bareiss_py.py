"""Pure-Python fraction-free determinant over Z[t, t^-1].

Entries are ``None`` (zero) or ``(lo, coeffs)`` with ``coeffs`` a list of ints
whose first and last items are nonzero.  This module is the reference
implementation; the compiled kernel must agree with it bit for bit.
"""

from __future__ import annotations


def _trim(lo, c):
    i, j = 0, len(c)
    while i < j and c[i] == 0:
        i += 1
    while j > i and c[j - 1] == 0:
        j -= 1
    if i == j:
        return None
    return lo + i, c[i:j]


def dense_mul(a, b):
    if a is None or b is None:
        return None
    (la, ca), (lb, cb) = a, b
    out = [0] * (len(ca) + len(cb) - 1)
    for i, x in enumerate(ca):
        if x:
            for j, y in enumerate(cb):
                out[i + j] += x * y
    return la + lb, out


def dense_sub(a, b):
    if b is None:
        return a
    if a is None:
        lb, cb = b
        return lb, [-x for x in cb]
    (la, ca), (lb, cb) = a, b
    lo = min(la, lb)
    hi = max(la + len(ca), lb + len(cb))
    out = [0] * (hi - lo)
    for i, x in enumerate(ca):
        out[la - lo + i] += x
    for i, x in enumerate(cb):
        out[lb - lo + i] -= x
    return _trim(lo, out)


def dense_exact_div(a, b):
    """Quotient of coefficient lists ``a / b`` (both trimmed); raises if inexact."""
    a = list(a)
    n, m = len(a), len(b)
    if n < m:
        raise ArithmeticError("inexact polynomial division")
    q = [0] * (n - m + 1)
    lead = b[-1]
    for k in range(n - m, -1, -1):
        top = a[k + m - 1]
        if top % lead:
            raise ArithmeticError("inexact polynomial division")
        c = top // lead
        q[k] = c
        if c:
            for j in range(m):
                a[k + j] -= c * b[j]
    if any(a[: m - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


def _div(a, b):
    if a is None:
        return None
    (la, ca), (lb, cb) = a, b
    return la - lb, dense_exact_div(ca, cb)


def bareiss_det(rows):
    """Determinant of a square matrix of dense entries; ``None`` means zero."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 0, [1]
    sign = 1
    prev = (0, [1])
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                e = a[i][j]
                if e is not None and (best is None or len(e[1]) < best[0]):
                    best = (len(e[1]), i, j)
        if best is None:
            return None
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for r in a:
                r[k], r[pj] = r[pj], r[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = dense_sub(dense_mul(piv, a[i][j]), dense_mul(aik, a[k][j]))
                a[i][j] = _div(num, prev)
            a[i][k] = None
        prev = piv
    lo, c = a[n - 1][n - 1]
    if sign < 0:
        c = [-x for x in c]
    return lo, c
