# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fraction-free determinant over Z[t, t^-1] with int64 coefficients.

Every multiply and add is overflow-checked; on overflow ``OverflowError`` is
raised and the caller retries with the arbitrary-precision Python kernel.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static int ak_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static int ak_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    static int ak_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int ak_mul(long long a, long long b, long long *r) nogil
    int ak_add(long long a, long long b, long long *r) nogil
    int ak_sub(long long a, long long b, long long *r) nogil


cdef struct Entry:
    long long lo
    int n          # 0 means the zero polynomial
    long long *c


cdef int _trim(Entry *e) nogil:
    cdef int i = 0, j = e.n, k
    while i < j and e.c[i] == 0:
        i += 1
    while j > i and e.c[j - 1] == 0:
        j -= 1
    if i > 0:
        for k in range(j - i):
            e.c[k] = e.c[k + i]
    e.lo += i
    e.n = j - i
    return 0


# out = p*a - q*b, caller frees out.c; returns -1 on overflow
cdef int _cross(Entry *p, Entry *a, Entry *q, Entry *b, Entry *out) nogil:
    cdef long long lo1 = 0, lo2 = 0, hi1 = 0, hi2 = 0, lo, hi, prod, tmp
    cdef int has1 = p.n > 0 and a.n > 0
    cdef int has2 = q.n > 0 and b.n > 0
    cdef int i, j
    out.n = 0
    out.c = NULL
    out.lo = 0
    if not has1 and not has2:
        return 0
    if has1:
        lo1 = p.lo + a.lo
        hi1 = lo1 + p.n + a.n - 1
    if has2:
        lo2 = q.lo + b.lo
        hi2 = lo2 + q.n + b.n - 1
    if has1 and has2:
        lo = lo1 if lo1 < lo2 else lo2
        hi = hi1 if hi1 > hi2 else hi2
    elif has1:
        lo, hi = lo1, hi1
    else:
        lo, hi = lo2, hi2
    out.lo = lo
    out.n = <int>(hi - lo)
    out.c = <long long *>malloc(out.n * sizeof(long long))
    for i in range(out.n):
        out.c[i] = 0
    if has1:
        for i in range(p.n):
            for j in range(a.n):
                if ak_mul(p.c[i], a.c[j], &prod):
                    return -1
                tmp = out.c[lo1 - lo + i + j]
                if ak_add(tmp, prod, &out.c[lo1 - lo + i + j]):
                    return -1
    if has2:
        for i in range(q.n):
            for j in range(b.n):
                if ak_mul(q.c[i], b.c[j], &prod):
                    return -1
                tmp = out.c[lo2 - lo + i + j]
                if ak_sub(tmp, prod, &out.c[lo2 - lo + i + j]):
                    return -1
    _trim(out)
    return 0


# in-place exact division a /= b; -1 overflow, -2 inexact
cdef int _divide(Entry *a, Entry *b) nogil:
    cdef int n = a.n, m = b.n, k, j
    cdef long long lead, top, c, prod, tmp
    cdef long long *q
    if n == 0:
        return 0
    if n < m:
        return -2
    q = <long long *>malloc((n - m + 1) * sizeof(long long))
    lead = b.c[m - 1]
    for k in range(n - m, -1, -1):
        top = a.c[k + m - 1]
        if top % lead != 0:
            free(q)
            return -2
        c = top // lead
        q[k] = c
        if c != 0:
            for j in range(m):
                if ak_mul(c, b.c[j], &prod):
                    free(q)
                    return -1
                tmp = a.c[k + j]
                if ak_sub(tmp, prod, &a.c[k + j]):
                    free(q)
                    return -1
    for k in range(m - 1):
        if a.c[k] != 0:
            free(q)
            return -2
    free(a.c)
    a.c = q
    a.lo = a.lo - b.lo
    a.n = n - m + 1
    return 0


def bareiss_det(rows):
    """Same contract as the pure-Python kernel; raises OverflowError past int64."""
    cdef int n = len(rows)
    cdef int i, j, k, pi, pj, best, status
    cdef Entry *a
    cdef Entry prev, num, swap
    cdef int sign = 1
    if n == 0:
        return 0, [1]
    a = <Entry *>malloc(n * n * sizeof(Entry))
    for i in range(n * n):
        a[i].n = 0
        a[i].c = NULL
        a[i].lo = 0
    prev.n = 0
    prev.c = NULL
    try:
        for i in range(n):
            row = rows[i]
            for j in range(n):
                e = row[j]
                if e is None:
                    continue
                lo, coeffs = e
                a[i * n + j].lo = lo
                a[i * n + j].n = len(coeffs)
                a[i * n + j].c = <long long *>malloc(len(coeffs) * sizeof(long long))
                for k in range(len(coeffs)):
                    a[i * n + j].c[k] = coeffs[k]
        prev.lo = 0
        prev.n = 1
        prev.c = <long long *>malloc(sizeof(long long))
        prev.c[0] = 1
        for k in range(n):
            best = -1
            pi = pj = -1
            for i in range(k, n):
                for j in range(k, n):
                    if a[i * n + j].n > 0 and (best < 0 or a[i * n + j].n < best):
                        best = a[i * n + j].n
                        pi = i
                        pj = j
            if best < 0:
                return None
            if pi != k:
                for j in range(n):
                    swap = a[k * n + j]
                    a[k * n + j] = a[pi * n + j]
                    a[pi * n + j] = swap
                sign = -sign
            if pj != k:
                for i in range(n):
                    swap = a[i * n + k]
                    a[i * n + k] = a[i * n + pj]
                    a[i * n + pj] = swap
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    status = _cross(&a[k * n + k], &a[i * n + j], &a[i * n + k], &a[k * n + j], &num)
                    if status == 0 and num.n > 0:
                        status = _divide(&num, &prev)
                    if status != 0:
                        free(num.c)
                        if status == -1:
                            raise OverflowError("int64 overflow in determinant kernel")
                        raise ArithmeticError("inexact polynomial division")
                    free(a[i * n + j].c)
                    a[i * n + j] = num
                free(a[i * n + k].c)
                a[i * n + k].c = NULL
                a[i * n + k].n = 0
            free(prev.c)
            prev = a[k * n + k]
            a[k * n + k].c = NULL
            a[k * n + k].n = 0
        coeffs = [int(prev.c[i]) * sign for i in range(prev.n)]
        return prev.lo, coeffs
    finally:
        for i in range(n * n):
            free(a[i].c)
        free(a)
        free(prev.c)
