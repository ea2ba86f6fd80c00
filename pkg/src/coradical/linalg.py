"""Exact sparse linear algebra over the rationals.

Matrices are immutable and store only their nonzero entries, row by row.
Every computation is carried out with :class:`fractions.Fraction`; nothing
is ever rounded.

Tensor products use row-major lexicographic ordering of basis indices with
the leftmost factor most significant: ``e_i (x) f_j`` has flat index
``i * dim(F) + j``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DimensionMismatch",
    "Matrix",
    "NoSolution",
    "Subspace",
    "are_orthogonal",
    "as_fraction",
    "echelon_rows",
    "is_idempotent",
    "kernel_basis",
    "kronecker",
    "rank",
    "solve",
]


class DimensionMismatch(ValueError):
    pass


class NoSolution(ArithmeticError):
    """Raised by :func:`solve` when the linear system is inconsistent."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(value)


SparseRow = dict  # column index -> nonzero Fraction


class Matrix:
    """Immutable sparse rational matrix."""

    __slots__ = ("_rows", "_ncols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, data: Mapping[int, Mapping[int, object]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self._rows = rows
        self._ncols = cols
        clean: dict[int, dict[int, Fraction]] = {}
        if data:
            for i, row in data.items():
                if not 0 <= i < rows:
                    raise IndexError(f"row {i} out of range for {rows}x{cols}")
                out = {}
                for j, v in row.items():
                    if not 0 <= j < cols:
                        raise IndexError(f"column {j} out of range for {rows}x{cols}")
                    v = as_fraction(v)
                    if v:
                        out[j] = v
                if out:
                    clean[i] = out
        self._data = clean
        self._hash = None

    @classmethod
    def _raw(cls, rows: int, cols: int, data: dict[int, dict[int, Fraction]]) -> "Matrix":
        # trusted constructor: data already clean
        m = cls.__new__(cls)
        m._rows, m._ncols, m._data, m._hash = rows, cols, data, None
        return m

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._raw(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one = Fraction(1)
        return cls._raw(n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def diagonal(cls, values: Sequence[object]) -> "Matrix":
        n = len(values)
        return cls(n, n, {i: {i: v} for i, v in enumerate(values)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> "Matrix":
        if cols is None:
            if not rows:
                raise ValueError("cannot infer width of an empty row list")
            cols = len(rows[0])
        data = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise DimensionMismatch("ragged rows")
            data[i] = {j: v for j, v in enumerate(row)}
        return cls(len(rows), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, object] | Sequence[object]], rows: int) -> "Matrix":
        """Assemble a matrix from column vectors (dense sequences or sparse dicts)."""
        data: dict[int, dict[int, object]] = {}
        for j, col in enumerate(columns):
            items = col.items() if isinstance(col, Mapping) else enumerate(col)
            for i, v in items:
                data.setdefault(i, {})[j] = v
        return cls(rows, len(columns), data)

    @classmethod
    def from_triples(cls, rows: int, cols: int, triples: Iterable[tuple[int, int, object]]) -> "Matrix":
        data: dict[int, dict[int, Fraction]] = {}
        for i, j, v in triples:
            row = data.setdefault(i, {})
            row[j] = row.get(j, Fraction(0)) + as_fraction(v)
        return cls(rows, cols, data)

    # basic access ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self._rows, self._ncols

    @property
    def nrows(self) -> int:
        return self._rows

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self._data.get(i, {}).get(j, Fraction(0))

    def row(self, i: int) -> dict[int, Fraction]:
        return dict(self._data.get(i, {}))

    def items(self):
        """Yield ``(i, j, value)`` for every nonzero entry in row-major order."""
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield i, j, row[j]

    def columns(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self._ncols)]
        for i, row in self._data.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def column(self, j: int) -> dict[int, Fraction]:
        return {i: row[j] for i, row in self._data.items() if j in row}

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self._ncols for _ in range(self._rows)]
        for i, row in self._data.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self._data

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, tuple(self.items())))
        return self._hash

    def __repr__(self) -> str:
        if self._rows * self._ncols <= 64:
            body = "; ".join(" ".join(str(v) for v in r) for r in self.to_dense())
            return f"Matrix({self._rows}x{self._ncols}: [{body}])"
        return f"Matrix({self._rows}x{self._ncols}, nnz={self.nnz})"

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        data = {i: dict(r) for i, r in self._data.items()}
        for i, row in other._data.items():
            target = data.setdefault(i, {})
            for j, v in row.items():
                s = target.get(j, 0) + v
                if s:
                    target[j] = s
                else:
                    target.pop(j, None)
            if not target:
                del data[i]
        return Matrix._raw(self._rows, self._ncols, data)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self._rows, self._ncols, {i: {j: -v for j, v in r.items()} for i, r in self._data.items()})

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = as_fraction(c)
        if not c:
            return Matrix.zeros(*self.shape)
        return Matrix._raw(self._rows, self._ncols, {i: {j: c * v for j, v in r.items()} for i, r in self._data.items()})

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self._ncols != other._rows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            data: dict[int, dict[int, Fraction]] = {}
            odata = other._data
            for i, row in self._data.items():
                acc: dict[int, Fraction] = {}
                for k, a in row.items():
                    orow = odata.get(k)
                    if orow is None:
                        continue
                    for j, b in orow.items():
                        acc[j] = acc.get(j, 0) + a * b
                acc = {j: v for j, v in acc.items() if v}
                if acc:
                    data[i] = acc
            return Matrix._raw(self._rows, other._ncols, data)
        return self.apply(other)

    def apply(self, vector) -> list[Fraction]:
        """Multiply by a dense vector."""
        if len(vector) != self._ncols:
            raise DimensionMismatch(f"{self.shape} applied to length {len(vector)}")
        v = [as_fraction(x) for x in vector]
        out = [Fraction(0)] * self._rows
        for i, row in self._data.items():
            out[i] = sum((a * v[j] for j, a in row.items()), Fraction(0))
        return out

    def apply_sparse(self, vector: Mapping[int, Fraction]) -> dict[int, Fraction]:
        cols: dict[int, Fraction] = {}
        for i, row in self._data.items():
            s = Fraction(0)
            for j, a in row.items():
                x = vector.get(j)
                if x:
                    s += a * x
            if s:
                cols[i] = s
        return cols

    def transpose(self) -> "Matrix":
        data: dict[int, dict[int, Fraction]] = {}
        for i, row in self._data.items():
            for j, v in row.items():
                data.setdefault(j, {})[i] = v
        return Matrix._raw(self._ncols, self._rows, data)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def power(self, k: int) -> "Matrix":
        if self._rows != self._ncols:
            raise DimensionMismatch("power of a non-square matrix")
        out = Matrix.identity(self._rows)
        for _ in range(k):
            out = out @ self
        return out

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Matrix":
        rows = range(self._rows) if rows is None else rows
        cols = range(self._ncols) if cols is None else cols
        cpos = {c: k for k, c in enumerate(cols)}
        data = {}
        for new_i, i in enumerate(rows):
            row = self._data.get(i)
            if not row:
                continue
            r = {cpos[j]: v for j, v in row.items() if j in cpos}
            if r:
                data[new_i] = r
        return Matrix._raw(len(rows), len(cols), data)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self._rows != other._rows:
            raise DimensionMismatch("hstack row mismatch")
        data = {i: dict(r) for i, r in self._data.items()}
        for i, row in other._data.items():
            data.setdefault(i, {}).update({self._ncols + j: v for j, v in row.items()})
        return Matrix._raw(self._rows, self._ncols + other._ncols, data)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self._ncols != other._ncols:
            raise DimensionMismatch("vstack column mismatch")
        data = {i: dict(r) for i, r in self._data.items()}
        data.update({self._rows + i: dict(r) for i, r in other._data.items()})
        return Matrix._raw(self._rows + other._rows, self._ncols, data)

    def permute_rows(self, perm: Sequence[int]) -> "Matrix":
        """Return P @ self where row ``i`` moves to row ``perm[i]``."""
        return Matrix._raw(self._rows, self._ncols, {perm[i]: dict(r) for i, r in self._data.items()})


# ---------------------------------------------------------------------------
# kronecker products


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """(a (x) b) with the leftmost factor most significant."""
    br, bc = b.shape
    data: dict[int, dict[int, Fraction]] = {}
    for i, arow in a._data.items():
        for k, brow in b._data.items():
            row = {}
            for j, x in arow.items():
                base = j * bc
                for l, y in brow.items():
                    row[base + l] = x * y
            data[i * br + k] = row
    return Matrix._raw(a.nrows * br, a.ncols * bc, data)


def kron_apply(a: Matrix, left: int, right: int, t: Matrix) -> Matrix:
    """Compute ``(id_left (x) a (x) id_right) @ t`` without materializing the kronecker product."""
    ar, ac = a.shape
    if t.nrows != left * ac * right:
        raise DimensionMismatch(f"kron_apply: {t.nrows} != {left}*{ac}*{right}")
    acols = a.columns()
    out: dict[int, dict[int, Fraction]] = {}
    for r, row in t._data.items():
        hi, rest = divmod(r, ac * right)
        mid, lo = divmod(rest, right)
        col = acols[mid]
        if not col:
            continue
        for i, x in col.items():
            target = out.setdefault((hi * ar + i) * right + lo, {})
            for j, y in row.items():
                s = target.get(j, 0) + x * y
                if s:
                    target[j] = s
                else:
                    del target[j]
    out = {i: r for i, r in out.items() if r}
    return Matrix._raw(left * ar * right, t.ncols, out)


# ---------------------------------------------------------------------------
# echelon forms, rank, kernels


def _reduce(row: dict[int, Fraction], basis: dict[int, dict[int, Fraction]]) -> dict[int, Fraction]:
    """Eliminate every pivot column of ``basis`` from ``row`` (in place)."""
    for p in sorted(set(row) & basis.keys()):
        c = row.get(p)
        if not c:
            continue
        for j, v in basis[p].items():
            s = row.get(j, 0) - c * v
            if s:
                row[j] = s
            else:
                row.pop(j, None)
    return row


def _insert(row: dict[int, Fraction], basis: dict[int, dict[int, Fraction]]) -> int | None:
    """Insert a row into a reduced echelon basis keyed by pivot; return the new pivot or None."""
    while True:
        row = _reduce(row, basis)
        if not row:
            return None
        # new pivot columns may have been introduced; reducing repeatedly is cheap
        if not (set(row) & basis.keys()):
            break
    p = min(row)
    inv = 1 / row[p]
    row = {j: v * inv for j, v in row.items()}
    for q, brow in basis.items():
        c = brow.get(p)
        if c:
            for j, v in row.items():
                s = brow.get(j, 0) - c * v
                if s:
                    brow[j] = s
                else:
                    brow.pop(j, None)
    basis[p] = row
    return p


def echelon_rows(rows: Iterable[Mapping[int, object]]) -> dict[int, dict[int, Fraction]]:
    """Reduced row-echelon basis of the span of ``rows``, keyed by pivot column.

    Pivots are leftmost nonzero entries, so the result depends only on the
    row space and not on the order or choice of spanning rows.
    """
    basis: dict[int, dict[int, Fraction]] = {}
    for r in rows:
        row = {j: as_fraction(v) for j, v in r.items() if v}
        if row:
            _insert(row, basis)
    return basis


def rank(m: Matrix) -> int:
    # rank of the row space; pick the orientation with fewer columns per row
    if m.ncols <= m.nrows:
        return len(echelon_rows(m._data.values()))
    return len(echelon_rows(m.transpose()._data.values()))


class Subspace:
    """A subspace of Q^n, stored as its canonical reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "_pivots", "_rows")

    def __init__(self, ambient_dim: int, vectors: Iterable[Mapping[int, object] | Sequence[object]] = ()):
        self.ambient_dim = ambient_dim
        sparse = []
        for v in vectors:
            if isinstance(v, Mapping):
                sparse.append(v)
            else:
                if len(v) != ambient_dim:
                    raise DimensionMismatch(f"vector of length {len(v)} in Q^{ambient_dim}")
                sparse.append({j: x for j, x in enumerate(v) if x})
        basis = echelon_rows(sparse)
        if any(j >= ambient_dim or j < 0 for r in basis.values() for j in r):
            raise DimensionMismatch("vector index outside ambient space")
        self._pivots = tuple(sorted(basis))
        self._rows = tuple(basis[p] for p in self._pivots)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, ({i: 1} for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def span_of_columns(cls, m: Matrix) -> "Subspace":
        return cls(m.nrows, m.columns())

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    def basis(self) -> list[dict[int, Fraction]]:
        return [dict(r) for r in self._rows]

    def basis_dense(self) -> list[list[Fraction]]:
        return [[r.get(j, Fraction(0)) for j in range(self.ambient_dim)] for r in self._rows]

    @property
    def matrix(self) -> Matrix:
        """Basis as the rows of a ``dim x ambient_dim`` matrix."""
        return Matrix._raw(self.dim, self.ambient_dim, {i: dict(r) for i, r in enumerate(self._rows) if r})

    def contains(self, v: Mapping[int, object] | Sequence[object]) -> bool:
        row = dict(v) if isinstance(v, Mapping) else {j: x for j, x in enumerate(v) if x}
        row = {j: as_fraction(x) for j, x in row.items() if x}
        basis = dict(zip(self._pivots, self._rows))
        return not _reduce(row, basis)

    def reduce(self, v: Mapping[int, object]) -> dict[int, Fraction]:
        """Normal form of ``v`` modulo this subspace (pivot coordinates cleared)."""
        row = {j: as_fraction(x) for j, x in v.items() if x}
        return _reduce(row, dict(zip(self._pivots, self._rows)))

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(r) for r in self._rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient_dim, list(self._rows) + list(other._rows))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # v = sum a_i s_i = sum b_j o_j  <=>  (a, -b) in ker [S^T | O^T]
        s = self.matrix.transpose()
        o = other.matrix.transpose()
        k = kernel_basis(s.hstack(-o))
        vecs = []
        for w in k.basis():
            a = {i: x for i, x in w.items() if i < self.dim}
            vecs.append(s.apply_sparse(a))
        return Subspace(self.ambient_dim, vecs)

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"Q^{self.ambient_dim} vs Q^{other.ambient_dim}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._pivots == other._pivots and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self._pivots, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    """Right kernel ``{v : m v = 0}`` as a canonical subspace."""
    n = m.ncols
    basis = echelon_rows(m._data.values())
    pivots = set(basis)
    vecs = []
    for free in range(n):
        if free in pivots:
            continue
        v = {free: Fraction(1)}
        for p, row in basis.items():
            c = row.get(free)
            if c:
                v[p] = -c
        vecs.append(v)
    return Subspace(n, vecs)


def image(m: Matrix) -> Subspace:
    return Subspace.span_of_columns(m)


def is_idempotent(m: Matrix) -> bool:
    if m.nrows != m.ncols:
        raise DimensionMismatch(f"idempotence of non-square {m.shape}")
    return m @ m == m


def are_orthogonal(a: Matrix, b: Matrix) -> bool:
    if a.shape != b.shape or a.nrows != a.ncols:
        raise DimensionMismatch(f"orthogonality of {a.shape} and {b.shape}")
    return (a @ b).is_zero() and (b @ a).is_zero()


def solve(m: Matrix, v: Sequence[object]) -> list[Fraction]:
    """One exact solution ``x`` of ``m x = v``; free variables are set to zero.

    Raises :class:`NoSolution` if the system is inconsistent.
    """
    if len(v) != m.nrows:
        raise DimensionMismatch(f"rhs of length {len(v)} for {m.shape}")
    n = m.ncols
    rows = []
    for i in range(m.nrows):
        r = m.row(i)
        if v[i]:
            r[n] = as_fraction(v[i])
        if r:
            rows.append(r)
    basis = echelon_rows(rows)
    if n in basis:
        raise NoSolution("inconsistent system")
    x = [Fraction(0)] * n
    for p, row in basis.items():
        x[p] = row.get(n, Fraction(0))
    return x


def left_inverse(m: Matrix) -> Matrix:
    """A left inverse of an injective matrix (raises NoSolution otherwise)."""
    r, c = m.shape
    if rank(m) != c:
        raise NoSolution("matrix is not injective")
    # solve L m = I column by column on the transpose: m^T L^T = I
    mt = m.transpose()
    cols = []
    for j in range(c):
        e = [0] * c
        e[j] = 1
        cols.append(solve(mt, e))
    return Matrix.from_columns(cols, r).transpose()


def polynomial_in(m: Matrix, roots: Sequence[object], scale=1) -> Matrix:
    """scale * prod_r (m - r id)."""
    n = m.nrows
    out = Matrix.identity(n).scale(scale)
    for r in roots:
        out = (m - Matrix.identity(n).scale(r)) @ out
    return out


def lagrange_projectors(m: Matrix, eigenvalues: Sequence[object]) -> list[Matrix]:
    """Eigenprojectors of a diagonalizable ``m`` as Lagrange polynomials in ``m``.

    pi_k = prod_{i != k} (m - l_i) / (l_k - l_i).
    """
    lams = [as_fraction(x) for x in eigenvalues]
    if len(set(lams)) != len(lams):
        raise ValueError("eigenvalues must be distinct")
    out = []
    for k, lk in enumerate(lams):
        others = [li for i, li in enumerate(lams) if i != k]
        denom = Fraction(1)
        for li in others:
            denom *= lk - li
        out.append(polynomial_in(m, others, 1 / denom))
    return out
