from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coradical.linalg import (
    DimensionMismatch,
    Matrix,
    NoSolution,
    Subspace,
    as_fraction,
    image,
    is_idempotent,
    kernel_basis,
    kron_apply,
    kronecker,
    lagrange_projectors,
    left_inverse,
    rank,
    solve,
)

small = st.integers(-3, 3).map(Fraction)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]).map(
            lambda rows_: Matrix.from_rows(rows_, rc[1])
        )
    )


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("3/4") == Fraction(3, 4)


def test_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        Matrix.identity(2) @ Matrix.identity(3)


def test_sparse_storage_drops_zeros():
    m = Matrix.from_rows([[0, 1], [0, 0]], 2)
    assert m.nnz == 1
    assert m - m == Matrix.zeros(2, 2)
    assert (m - m).is_zero()


def test_symmetrizer_rank():
    # (1 + swap)/2 on Q^2 (x) Q^2 has rank 3 = dim Sym^2 Q^2
    triples = [(i * 2 + j, j * 2 + i, Fraction(1)) for i in range(2) for j in range(2)]
    sw = Matrix.from_triples(4, 4, triples)
    sym = (Matrix.identity(4) + sw).scale(Fraction(1, 2))
    assert is_idempotent(sym)
    assert rank(sym) == 3
    assert kernel_basis(sym).dim == 1


def test_solve_and_nosolution():
    m = Matrix.from_rows([[1, 1], [1, -1]], 2)
    assert solve(m, [2, 0]) == [1, 1]
    with pytest.raises(NoSolution):
        solve(Matrix.from_rows([[1, 1], [2, 2]], 2), [1, 3])


def test_left_inverse():
    b = Matrix.from_rows([[1, 0], [1, 1], [0, 2]], 2)
    assert left_inverse(b) @ b == Matrix.identity(2)


def test_lagrange_projectors_of_diagonal():
    d = Matrix.diagonal([1, 3, 9, 3])
    ps = lagrange_projectors(d, [1, 3, 9])
    assert [rank(p) for p in ps] == [1, 2, 1]
    assert sum(ps[1:], ps[0]) == Matrix.identity(4)


def test_subspace_canonical():
    a = Subspace(3, [[1, 1, 0], [0, 1, 1]])
    b = Subspace(3, [[1, 0, -1], [2, 3, 1]])
    assert a == b and hash(a) == hash(b)
    assert a.contains([1, 2, 1])
    assert not a.contains([1, 0, 0])
    assert (a + Subspace(3, [[1, 0, 0]])) == Subspace.full(3)
    assert a.intersection(Subspace(3, [[1, 0, 0], [0, 1, 0]])).dim == 1


@given(matrices(), matrices())
@settings(max_examples=60, deadline=None)
def test_kron_mixed_product(a, b):
    c, d = Matrix.identity(a.ncols), Matrix.identity(b.ncols)
    assert kronecker(a, b) @ kronecker(c, d) == kronecker(a @ c, b @ d)


@given(matrices(), st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_kron_apply_matches_kronecker(a, left, right):
    full = kronecker(kronecker(Matrix.identity(left), a), Matrix.identity(right))
    t = Matrix.from_rows([[Fraction(i + 2 * j) for j in range(2)] for i in range(full.ncols)], 2)
    assert kron_apply(a, left, right, t) == full @ t


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).dim == m.ncols
    assert image(m).dim == rank(m)
    assert rank(m) == rank(m.transpose())


@given(matrices(), st.permutations(range(4)))
@settings(max_examples=60, deadline=None)
def test_echelon_invariant_under_row_operations(m, perm):
    rows = [list(m.row(i).get(j, Fraction(0)) for j in range(m.ncols)) for i in range(m.nrows)]
    perm = [p for p in perm if p < len(rows)]
    shuffled = [rows[p] for p in perm]
    if len(shuffled) > 1:
        shuffled[0] = [x + 2 * y for x, y in zip(shuffled[0], shuffled[1])]
    assert Subspace(m.ncols, rows) == Subspace(m.ncols, shuffled)
