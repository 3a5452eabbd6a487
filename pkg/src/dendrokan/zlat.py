"""Exact integer linear algebra over free abelian groups.

Matrices act on column vectors; the matrix of a composite g . f is
M(g) @ M(f).  Everything is arbitrary-precision: the compiled kernel, when
present, runs the same eliminations over machine words and raises
OverflowError before any entry could exceed its guard bound, at which point
the pure-Python path takes over.  Canonical forms make lattices comparable
bit for bit: a Lattice stores the column-style Hermite basis of its
generators, pivots descending row by row, pivot entries positive, entries
left of a pivot reduced to [0, pivot).
"""

from __future__ import annotations

import math

try:
    from . import _zcore

    _HAVE_ZCORE = True
except ImportError:  # pure-Python fallback only
    _zcore = None
    _HAVE_ZCORE = False

# entries above this bound skip the compiled fast path entirely
_FAST_INPUT_BOUND = 2**40


def backend():
    return "compiled" if _HAVE_ZCORE else "python"


class IntMatrix:
    """Immutable integer matrix with exact arithmetic."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data):
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(r) for r in data)
        if len(self.data) != rows or any(len(r) != cols for r in self.data):
            raise ValueError("inconsistent matrix dimensions")

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, nrows, columns):
        return cls(nrows, len(columns), [[c[i] for c in columns] for i in range(nrows)])

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return IntMatrix(self.cols, self.rows, [self.column(j) for j in range(self.cols)])

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(
                    f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
                )
            ot = list(zip(*other.data)) if other.rows else [()] * other.cols
            out = [
                [sum(a * b for a, b in zip(row, col)) for col in ot]
                for row in self.data
            ]
            return IntMatrix(self.rows, other.cols, out)
        return NotImplemented

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum(a * b for a, b in zip(row, vec)) for row in self.data]

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return IntMatrix(
            self.rows,
            self.cols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, k):
        return IntMatrix(self.rows, self.cols, [[k * a for a in r] for r in self.data])

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def is_zero(self):
        return all(a == 0 for r in self.data for a in r)

    def is_identity(self):
        return self.rows == self.cols and all(
            self.data[i][j] == (1 if i == j else 0)
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __repr__(self):
        if self.rows <= 6 and self.cols <= 6:
            body = "; ".join(" ".join(str(a) for a in r) for r in self.data)
            return f"IntMatrix({self.rows}x{self.cols}: {body})"
        return f"IntMatrix({self.rows}x{self.cols})"

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [a for r in self.data for a in r],
        }

    @classmethod
    def from_json(cls, d):
        r, c = d["rows"], d["cols"]
        flat = d["entries"]
        return cls(r, c, [flat[i * c : (i + 1) * c] for i in range(r)])


def hstack(mats):
    mats = list(mats)
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("row mismatch in hstack")
    data = [[a for m in mats for a in m.data[i]] for i in range(rows)]
    return IntMatrix(rows, sum(m.cols for m in mats), data)


def vstack(mats):
    mats = list(mats)
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("column mismatch in vstack")
    data = [list(r) for m in mats for r in m.data]
    return IntMatrix(sum(m.rows for m in mats), cols, data)


# ---------------------------------------------------------------------------
# eliminations (pure Python reference; the compiled kernel mirrors these)


def _hnf_columns_py(cols, nrows):
    """Column-style Hermite reduction, in place on a list of columns.

    Returns the canonical basis columns (zero columns dropped): one pivot
    per used row, pivots positive, earlier columns reduced at pivot rows.
    """
    work = [list(c) for c in cols]
    ncols = len(work)
    start = 0
    for row in range(nrows):
        if start >= ncols:
            break
        piv = None
        while True:
            nz = [j for j in range(start, ncols) if work[j][row] != 0]
            if not nz:
                break
            if len(nz) == 1:
                piv = nz[0]
                break
            nz.sort(key=lambda j: abs(work[j][row]))
            j0 = nz[0]
            for j in nz[1:]:
                q = work[j][row] // work[j0][row]
                if q:
                    cj, c0 = work[j], work[j0]
                    for i in range(row, nrows):
                        cj[i] -= q * c0[i]
            # continue until a single nonzero remains
        if piv is None:
            continue
        work[start], work[piv] = work[piv], work[start]
        if work[start][row] < 0:
            work[start] = [-x for x in work[start]]
        p = work[start][row]
        for j in range(start):
            q = work[j][row] // p
            if q:
                cj, c0 = work[j], work[start]
                for i in range(nrows):
                    cj[i] -= q * c0[i]
        start += 1
    return [c for c in work[:start]]


def _hnf_columns(cols, nrows):
    if _HAVE_ZCORE and cols:
        if all(abs(x) <= _FAST_INPUT_BOUND for c in cols for x in c):
            try:
                return _zcore.hnf_columns(cols, nrows)
            except OverflowError:
                pass
    return _hnf_columns_py(cols, nrows)


def _snf_diagonal_py(rows):
    """Smith diagonal (nonnegative, each dividing the next)."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    diag = []
    t = 0
    while t < min(m, n):
        # move a nonzero of least magnitude to the pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        a[t], a[bi] = a[bi], a[t]
        for r in a:
            r[t], r[bj] = r[bj], r[t]
        dirty = False
        for i in range(t + 1, m):
            q = a[i][t] // a[t][t]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            if a[i][t]:
                dirty = True
        for j in range(t + 1, n):
            q = a[t][j] // a[t][t]
            if q:
                for i in range(m):
                    a[i][j] -= q * a[i][t]
            if a[t][j]:
                dirty = True
        if dirty:
            continue
        # pivot must divide the rest of the block
        p = a[t][t]
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            continue
        diag.append(abs(p))
        t += 1
    return diag


def _snf_diagonal(rows):
    if _HAVE_ZCORE and rows and rows[0]:
        if all(abs(x) <= _FAST_INPUT_BOUND for r in rows for x in r):
            try:
                return _zcore.snf_diagonal([list(r) for r in rows])
            except OverflowError:
                pass
    return _snf_diagonal_py(rows)


def hnf(mat):
    """Column Hermite normal form; dependent (zero) columns are dropped."""
    basis = _hnf_columns(mat.columns(), mat.rows)
    return IntMatrix.from_columns(mat.rows, basis)


def snf(mat):
    """Smith normal form: the diagonal matrix in the shape of the input,
    and the invariant-factor list d1 | d2 | ..."""
    diag = _snf_diagonal([list(r) for r in mat.data])
    out = [[0] * mat.cols for _ in range(mat.rows)]
    for i, d in enumerate(diag):
        out[i][i] = d
    return IntMatrix(mat.rows, mat.cols, out), list(diag)


class Lattice:
    """A subgroup of Z^ambient_rank given by its canonical Hermite basis."""

    __slots__ = ("ambient_rank", "basis")

    def __init__(self, ambient_rank, basis):
        self.ambient_rank = ambient_rank
        self.basis = basis

    @classmethod
    def from_columns(cls, ambient_rank, columns):
        basis = _hnf_columns([list(c) for c in columns], ambient_rank)
        return cls(ambient_rank, IntMatrix.from_columns(ambient_rank, basis))

    @classmethod
    def from_matrix(cls, mat):
        return cls.from_columns(mat.rows, mat.columns())

    @classmethod
    def full(cls, ambient_rank):
        return cls(ambient_rank, IntMatrix.identity(ambient_rank))

    @classmethod
    def zero(cls, ambient_rank):
        return cls(ambient_rank, IntMatrix(ambient_rank, 0, [[]] * ambient_rank))

    @property
    def rank(self):
        return self.basis.cols

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.ambient_rank == other.ambient_rank
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.basis))

    def __repr__(self):
        return f"Lattice(rank {self.rank} in Z^{self.ambient_rank})"

    def _pivots(self):
        pivots = []
        for j in range(self.basis.cols):
            col = self.basis.column(j)
            pivots.append(next(i for i, x in enumerate(col) if x != 0))
        return pivots

    def solve(self, vec):
        """Coefficients expressing vec in the basis, or None."""
        coeffs = [0] * self.rank
        v = list(vec)
        pivots = self._pivots()
        for j in range(self.rank):
            col = self.basis.column(j)
            p = pivots[j]
            if v[p] % col[p]:
                return None
            c = v[p] // col[p]
            coeffs[j] = c
            if c:
                v = [x - c * y for x, y in zip(v, col)]
        if any(v):
            return None
        return coeffs

    def __contains__(self, vec):
        return self.solve(vec) is not None

    def solve_matrix(self, mat):
        """X with basis @ X == mat, or None (columns solved independently)."""
        cols = []
        for j in range(mat.cols):
            c = self.solve(mat.column(j))
            if c is None:
                return None
            cols.append(c)
        return IntMatrix.from_columns(self.rank, cols)

    def contains_lattice(self, other):
        return all(self.solve(c) is not None for c in other.basis.columns())

    def intersect(self, other):
        """Intersection lattice, via the kernel of [A | -B]."""
        if self.ambient_rank != other.ambient_rank:
            raise ValueError("ambient rank mismatch")
        if self.rank == 0 or other.rank == 0:
            return Lattice.zero(self.ambient_rank)
        stacked = hstack([self.basis, other.basis.scale(-1)])
        ker = kernel(stacked)
        cols = []
        for j in range(ker.rank):
            coeffs = ker.basis.column(j)[: self.rank]
            cols.append(self.basis.apply(coeffs))
        return Lattice.from_columns(self.ambient_rank, cols)

    def to_json(self):
        return {"ambient_rank": self.ambient_rank, "basis": self.basis.to_json()}


def kernel(mat):
    """Exact integer kernel, as a lattice in Z^cols."""
    n = mat.cols
    if n == 0:
        return Lattice.zero(0)
    # column-reduce [M; I]: columns whose M-part vanished carry the kernel
    cols = []
    for j in range(n):
        c = mat.column(j) + [1 if i == j else 0 for i in range(n)]
        cols.append(c)
    reduced = _hnf_columns(cols, mat.rows + n)
    kernel_cols = [
        c[mat.rows :] for c in reduced if all(x == 0 for x in c[: mat.rows])
    ]
    # the reduction leaves kernel columns unreduced among themselves
    return Lattice.from_columns(n, kernel_cols)


def image(mat):
    """Column span, as a lattice in Z^rows."""
    return Lattice.from_matrix(mat)


def intersect_kernels(mats, ambient_rank):
    """Common kernel; the empty intersection is the full lattice."""
    mats = [m for m in mats if m.rows > 0]
    if not mats:
        return Lattice.full(ambient_rank)
    if any(m.cols != ambient_rank for m in mats):
        raise ValueError("kernel ambient rank mismatch")
    return kernel(vstack(mats))


def sum_images(mats, ambient_rank):
    """Sum of column spans; the empty sum is the zero lattice."""
    mats = [m for m in mats if m.cols > 0]
    if not mats:
        return Lattice.zero(ambient_rank)
    if any(m.rows != ambient_rank for m in mats):
        raise ValueError("image ambient rank mismatch")
    return Lattice.from_matrix(hstack(mats))


def is_direct_sum(a, b):
    """Do the two sublattices decompose the full ambient group?

    Requires complementary ranks and a unimodularity certificate: the
    concatenated bases have Smith diagonal all ones.
    """
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("ambient rank mismatch")
    r = a.ambient_rank
    if a.rank + b.rank != r:
        return False
    if r == 0:
        return True
    _, diag = snf(hstack([a.basis, b.basis]))
    return len(diag) == r and all(d == 1 for d in diag)


def is_isomorphism(mat):
    """Square with Smith diagonal all ones (determinant is a unit)."""
    if mat.rows != mat.cols:
        return False
    if mat.rows == 0:
        return True
    _, diag = snf(mat)
    return len(diag) == mat.rows and all(d == 1 for d in diag)
