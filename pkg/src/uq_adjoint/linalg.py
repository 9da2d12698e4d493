"""Dense and sparse exact linear algebra over a cyclotomic field.

Everything is Gauss-Jordan elimination with exact pivots; there are no
tolerances anywhere.  A :class:`Subspace` keeps its basis in reduced row echelon
form so that coordinates of a member vector are read off at the pivot columns.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .cyclotomic import Cyc, CyclotomicField

__all__ = ["Matrix", "Subspace", "sparse_nullspace", "block_diag"]


class Matrix:
    """A dense ``nrows x ncols`` matrix stored as a list of row lists."""

    __slots__ = ("K", "rows", "nrows", "ncols")

    def __init__(self, K: CyclotomicField, rows: list[list[Cyc]], ncols: int | None = None):
        self.K = K
        self.rows = rows
        self.nrows = len(rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        self.ncols = ncols

    # -- constructors -----------------------------------------------------------
    @classmethod
    def zeros(cls, K, nrows: int, ncols: int) -> "Matrix":
        z = K.zero
        return cls(K, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, K, n: int) -> "Matrix":
        m = cls.zeros(K, n, n)
        for i in range(n):
            m.rows[i][i] = K.one
        return m

    @classmethod
    def scalar(cls, K, n: int, c) -> "Matrix":
        m = cls.zeros(K, n, n)
        c = K(c)
        for i in range(n):
            m.rows[i][i] = c
        return m

    @classmethod
    def from_columns(cls, K, cols: Sequence[Sequence[Cyc]], nrows: int) -> "Matrix":
        rows = [[col[i] for col in cols] for i in range(nrows)]
        return cls(K, rows, len(cols))

    @classmethod
    def from_values(cls, K, values) -> "Matrix":
        return cls(K, [[K(x) for x in row] for row in values])

    # -- basic protocol ---------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols}, {self.rows!r})"

    def copy(self) -> "Matrix":
        return Matrix(self.K, [list(r) for r in self.rows], self.ncols)

    def column(self, j: int) -> list[Cyc]:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list[Cyc]]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.K, [list(c) for c in zip(*self.rows)] if self.nrows else
                      [[] for _ in range(self.ncols)], self.nrows)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        one = self.K.one
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if (x != one) if i == j else bool(x):
                    return False
        return True

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.K, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.K, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix(self.K, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.K(c)
        if not c:
            return Matrix.zeros(self.K, self.nrows, self.ncols)
        return Matrix(self.K, [[a * c if a else a for a in r] for r in self.rows], self.ncols)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        K = self.K
        zero = K.zero
        n = other.ncols
        brows = other.rows
        out = []
        for r in self.rows:
            acc = [zero] * n
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(brows[k]):
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(K, out, n)

    def apply(self, v: Sequence[Cyc]) -> list[Cyc]:
        zero = self.K.zero
        out = []
        for r in self.rows:
            acc = zero
            for a, x in zip(r, v):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out

    def power(self, e: int) -> "Matrix":
        result = Matrix.identity(self.K, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def trace(self) -> Cyc:
        acc = self.K.zero
        for i in range(min(self.nrows, self.ncols)):
            acc = acc + self.rows[i][i]
        return acc

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(self.K, [r + s for r, s in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix(self.K, [list(r) for r in self.rows] + [list(r) for r in other.rows], self.ncols)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        cols = list(cols)
        return Matrix(self.K, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    # -- elimination ------------------------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        rows = [list(r) for r in self.rows]
        pivots = _rref_inplace(rows, self.ncols)
        return Matrix(self.K, rows[: len(pivots)], self.ncols), pivots

    def rank(self) -> int:
        return len(_rref_inplace([list(r) for r in self.rows], self.ncols))

    def nullity(self) -> int:
        return self.ncols - self.rank()

    def nullspace(self) -> list[list[Cyc]]:
        """Basis of {x : self @ x = 0}, one vector per free column."""
        R, pivots = self.rref()
        return _nullspace_from_rref(self.K, R.rows, pivots, self.ncols)

    def left_nullspace(self) -> list[list[Cyc]]:
        return self.T.nullspace()

    def column_space(self) -> "Subspace":
        return Subspace.span(self.K, self.columns(), self.nrows)

    def image(self) -> "Subspace":
        return self.column_space()

    def kernel(self) -> "Subspace":
        return Subspace.span(self.K, self.nullspace(), self.ncols)

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of non-square matrix")
        n = self.nrows
        aug = self.hstack(Matrix.identity(self.K, n))
        rows = [list(r) for r in aug.rows]
        pivots = _rref_inplace(rows, 2 * n, stop=n)
        if pivots != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix(self.K, [r[n:] for r in rows], n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """Some X with self @ X = rhs, or None when inconsistent."""
        n = self.ncols
        aug = self.hstack(rhs)
        rows = [list(r) for r in aug.rows]
        pivots = _rref_inplace(rows, n + rhs.ncols, stop=n)
        for r in rows[len(pivots):]:
            if any(r[n:]):
                return None
        X = Matrix.zeros(self.K, n, rhs.ncols)
        for i, p in enumerate(pivots):
            X.rows[p] = rows[i][n:]
        return X

    def det(self) -> Cyc:
        if self.nrows != self.ncols:
            raise ValueError("determinant of non-square matrix")
        rows = [list(r) for r in self.rows]
        n = self.nrows
        d = self.K.one
        for c in range(n):
            p = next((i for i in range(c, n) if rows[i][c]), None)
            if p is None:
                return self.K.zero
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                d = -d
            piv = rows[c][c]
            d = d * piv
            inv = piv.inv()
            for i in range(c + 1, n):
                f = rows[i][c]
                if f:
                    f = f * inv
                    ri, rc = rows[i], rows[c]
                    for j in range(c + 1, n):
                        if rc[j]:
                            ri[j] = ri[j] - f * rc[j]
        return d

    def to_json(self) -> list[list[list[str]]]:
        return [[x.to_json() for x in r] for r in self.rows]


def _rref_inplace(rows: list[list[Cyc]], ncols: int, stop: int | None = None) -> list[int]:
    """Gauss-Jordan on ``rows`` in place; pivots are searched only in columns < stop."""
    if stop is None:
        stop = ncols
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(stop):
        if r >= nrows:
            break
        p = None
        for i in range(r, nrows):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        if piv != piv.K.one:
            inv = piv.inv()
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def _nullspace_from_rref(K, rrows, pivots, ncols):
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [K.zero] * ncols
        v[free] = K.one
        for i, p in enumerate(pivots):
            x = rrows[i][free]
            if x:
                v[p] = -x
        basis.append(v)
    return basis


class Subspace:
    """A subspace of K^n with basis rows in reduced row echelon form."""

    __slots__ = ("K", "n", "basis", "pivots")

    def __init__(self, K, n: int, basis: list[list[Cyc]], pivots: list[int]):
        self.K = K
        self.n = n
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, K, vectors: Iterable[Sequence[Cyc]], n: int) -> "Subspace":
        rows = [list(v) for v in vectors]
        pivots = _rref_inplace(rows, n)
        return cls(K, n, rows[: len(pivots)], pivots)

    @classmethod
    def full(cls, K, n: int) -> "Subspace":
        return cls(K, n, Matrix.identity(K, n).rows, list(range(n)))

    @classmethod
    def zero(cls, K, n: int) -> "Subspace":
        return cls(K, n, [], [])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.n})"

    def coords(self, v: Sequence[Cyc]) -> list[Cyc]:
        """Coordinates of a vector assumed to lie in the subspace."""
        return [v[p] for p in self.pivots]

    def contains(self, v: Sequence[Cyc]) -> bool:
        r = list(v)
        for b, p in zip(self.basis, self.pivots):
            c = r[p]
            if c:
                for j, x in enumerate(b):
                    if x:
                        r[j] = r[j] - c * x
        return not any(r)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.pivots == other.pivots and self.basis == other.basis

    def matrix(self) -> Matrix:
        """Inclusion map K^dim -> K^n (basis vectors as columns)."""
        return Matrix.from_columns(self.K, self.basis, self.n)

    def coord_matrix(self) -> Matrix:
        """The pivot-row selection K^n -> K^dim; a left inverse of :meth:`matrix`."""
        m = Matrix.zeros(self.K, self.dim, self.n)
        for i, p in enumerate(self.pivots):
            m.rows[i][p] = self.K.one
        return m

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.K, self.basis + other.basis, self.n)

    def intersect(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace.zero(self.K, self.n)
        # solve sum a_i u_i = sum b_j w_j
        A = Matrix.from_columns(self.K, self.basis + [[-x for x in w] for w in other.basis], self.n)
        vecs = []
        for sol in A.nullspace():
            v = [self.K.zero] * self.n
            for a, u in zip(sol, self.basis):
                if a:
                    v = [x + a * y if y else x for x, y in zip(v, u)]
            vecs.append(v)
        return Subspace.span(self.K, vecs, self.n)

    def complement_coords(self) -> list[int]:
        """Standard-basis indices spanning a complement (the non-pivot columns)."""
        piv = set(self.pivots)
        return [i for i in range(self.n) if i not in piv]


def block_diag(K, blocks: Sequence[Matrix]) -> Matrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    m = Matrix.zeros(K, nr, nc)
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            m.rows[r0 + i][c0:c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return m


def sparse_nullspace(K, equations: list[dict[int, Cyc]], ncols: int) -> list[list[Cyc]]:
    """Null space basis of a sparse system given as ``{column: coefficient}`` rows."""
    pivot_rows: dict[int, dict[int, Cyc]] = {}
    one = K.one
    for eq in equations:
        row = {j: x for j, x in eq.items() if x}
        # reduce against existing pivots until the leading column is new
        while row:
            lead = min(row)
            prow = pivot_rows.get(lead)
            if prow is None:
                break
            f = row[lead]
            for j, x in prow.items():
                y = row.get(j)
                y = -f * x if y is None else y - f * x
                if y:
                    row[j] = y
                else:
                    row.pop(j, None)
        if not row:
            continue
        lead = min(row)
        piv = row[lead]
        if piv != one:
            inv = piv.inv()
            row = {j: x * inv for j, x in row.items()}
        pivot_rows[lead] = row
    # back substitution to reduced form
    # rows with larger leads are already reduced, so one pass per row suffices
    for lead in sorted(pivot_rows, reverse=True):
        row = pivot_rows[lead]
        for j in [c for c in row if c != lead and c in pivot_rows]:
            f = row[j]
            for k, x in pivot_rows[j].items():
                y = row.get(k)
                y = -f * x if y is None else y - f * x
                if y:
                    row[k] = y
                else:
                    row.pop(k, None)
    basis = []
    for free in range(ncols):
        if free in pivot_rows:
            continue
        v = [K.zero] * ncols
        v[free] = one
        for lead, row in pivot_rows.items():
            x = row.get(free)
            if x:
                v[lead] = -x
        basis.append(v)
    return basis
