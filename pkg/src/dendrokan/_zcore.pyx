# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Machine-word kernels for the integer eliminations.

Same algorithms as the pure-Python versions in zlat.py, over int64 with a
hard magnitude guard: any intermediate beyond the guard raises
OverflowError and the caller falls back to exact Python integers, so the
fast path never returns a wrong answer.
"""

from libc.stdlib cimport free, malloc

cdef long long GUARD = (<long long> 1) << 62


cdef inline long long _checked_sub_mul(long long a, long long q, long long b) except? -9223372036854775807:
    # a - q*b with conservative overflow guards
    cdef long long p
    if q != 0 and b != 0:
        if (q if q > 0 else -q) > GUARD // (b if b > 0 else -b):
            raise OverflowError("intermediate too large")
    p = q * b
    if (a > 0 and p < 0 and a - p < 0) or (a < 0 and p > 0 and a - p > 0):
        raise OverflowError("intermediate too large")
    a = a - p
    if a >= GUARD or a <= -GUARD:
        raise OverflowError("intermediate too large")
    return a


cdef inline long long _floordiv(long long a, long long b):
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long _llabs(long long x):
    return x if x >= 0 else -x


def hnf_columns(cols, Py_ssize_t nrows):
    """Column Hermite reduction; returns the canonical basis columns."""
    cdef Py_ssize_t ncols = len(cols)
    if ncols == 0:
        return []
    cdef long long *w = <long long *> malloc(ncols * nrows * sizeof(long long))
    if w is NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, row, start, piv, nz_count, j0, last_nz = -1
    cdef long long q, p, v
    try:
        for j in range(ncols):
            c = cols[j]
            for i in range(nrows):
                v = c[i]
                if v >= GUARD or v <= -GUARD:
                    raise OverflowError("input too large")
                w[j * nrows + i] = v
        start = 0
        for row in range(nrows):
            if start >= ncols:
                break
            while True:
                nz_count = 0
                j0 = -1
                for j in range(start, ncols):
                    if w[j * nrows + row] != 0:
                        nz_count += 1
                        if j0 < 0 or _llabs(w[j * nrows + row]) < _llabs(w[j0 * nrows + row]):
                            j0 = j
                        last_nz = j
                if nz_count == 0:
                    piv = -1
                    break
                if nz_count == 1:
                    piv = last_nz
                    break
                for j in range(start, ncols):
                    if j == j0 or w[j * nrows + row] == 0:
                        continue
                    q = _floordiv(w[j * nrows + row], w[j0 * nrows + row])
                    if q != 0:
                        for i in range(row, nrows):
                            w[j * nrows + i] = _checked_sub_mul(
                                w[j * nrows + i], q, w[j0 * nrows + i]
                            )
            if piv < 0:
                continue
            if piv != start:
                for i in range(nrows):
                    v = w[start * nrows + i]
                    w[start * nrows + i] = w[piv * nrows + i]
                    w[piv * nrows + i] = v
            if w[start * nrows + row] < 0:
                for i in range(nrows):
                    w[start * nrows + i] = -w[start * nrows + i]
            p = w[start * nrows + row]
            for j in range(start):
                q = _floordiv(w[j * nrows + row], p)
                if q != 0:
                    for i in range(nrows):
                        w[j * nrows + i] = _checked_sub_mul(
                            w[j * nrows + i], q, w[start * nrows + i]
                        )
            start += 1
        out = []
        for j in range(start):
            out.append([w[j * nrows + i] for i in range(nrows)])
        return out
    finally:
        free(w)


def snf_diagonal(rows):
    """Smith invariant factors of a dense row-major matrix."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = len(rows[0]) if m else 0
    if m == 0 or n == 0:
        return []
    cdef long long *a = <long long *> malloc(m * n * sizeof(long long))
    if a is NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, jj, t, bi, bj
    cdef long long q, p, v, best
    cdef bint dirty, bad
    try:
        for i in range(m):
            r = rows[i]
            for j in range(n):
                v = r[j]
                if v >= GUARD or v <= -GUARD:
                    raise OverflowError("input too large")
                a[i * n + j] = v
        diag = []
        t = 0
        while t < m and t < n:
            bi = -1
            bj = -1
            best = 0
            for i in range(t, m):
                for j in range(t, n):
                    v = a[i * n + j]
                    if v != 0 and (bi < 0 or _llabs(v) < best):
                        bi = i
                        bj = j
                        best = _llabs(v)
            if bi < 0:
                break
            if bi != t:
                for j in range(n):
                    v = a[t * n + j]
                    a[t * n + j] = a[bi * n + j]
                    a[bi * n + j] = v
            if bj != t:
                for i in range(m):
                    v = a[i * n + t]
                    a[i * n + t] = a[i * n + bj]
                    a[i * n + bj] = v
            dirty = False
            p = a[t * n + t]
            for i in range(t + 1, m):
                q = _floordiv(a[i * n + t], p)
                if q != 0:
                    for j in range(n):
                        a[i * n + j] = _checked_sub_mul(a[i * n + j], q, a[t * n + j])
                if a[i * n + t] != 0:
                    dirty = True
            for j in range(t + 1, n):
                q = _floordiv(a[t * n + j], p)
                if q != 0:
                    for i in range(m):
                        a[i * n + j] = _checked_sub_mul(a[i * n + j], q, a[i * n + t])
                if a[t * n + j] != 0:
                    dirty = True
            if dirty:
                continue
            p = a[t * n + t]
            bad = False
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i * n + j] % p != 0:
                        for jj in range(n):
                            a[t * n + jj] = _checked_sub_mul(
                                a[t * n + jj], -1, a[i * n + jj]
                            )
                        bad = True
                        break
                if bad:
                    break
            if bad:
                continue
            diag.append(_llabs(p))
            t += 1
        return diag
    finally:
        free(a)
