"""Co-commutative co-algebras on finite-dimensional rational vector spaces.

A :class:`Coalgebra` is a labeled basis together with the matrices of the
co-multiplication ``M -> M (x) M`` and the co-unit ``M -> Q``.  Everything
below (reduced co-multiplication, co-radical filtration, strictness,
co-generation) is computed as exact matrix algebra on top of
:mod:`coradical.linalg`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .linalg import (
    DimensionMismatch,
    Matrix,
    Subspace,
    kernel_basis,
    kron_apply,
    kronecker,
    left_inverse,
    rank,
)

DEFAULT_TENSOR_CAP = 200_000

TENSOR_SEP = "⊗"


class TensorCapExceeded(RuntimeError):
    """A tensor-power matrix would exceed the configured entry cap."""


class NotAUnit(ValueError):
    pass


class NotACoalgebraMorphism(ValueError):
    pass


def check_cap(rows: int, cols: int, cap: int | None, what: str = "tensor matrix") -> None:
    if cap is not None and rows * cols > cap:
        raise TensorCapExceeded(f"{what} would be {rows}x{cols} = {rows * cols} entries (cap {cap})")


# ---------------------------------------------------------------------------
# spaces and gradings


@dataclass(frozen=True)
class GradedSpace:
    """A labeled basis, optionally with one grade per basis vector."""

    labels: tuple[str, ...]
    grades: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be unique")
        if self.grades is not None:
            object.__setattr__(self, "grades", tuple(int(g) for g in self.grades))
            if len(self.grades) != len(self.labels):
                raise DimensionMismatch("one grade per basis vector required")
            if any(g < 0 for g in self.grades):
                raise ValueError("grades must be non-negative")

    @classmethod
    def from_blocks(cls, blocks: Iterable[tuple[int, Sequence[str]]]) -> "GradedSpace":
        labels, grades = [], []
        last = -1
        for g, labs in blocks:
            if g <= last:
                raise ValueError("grade indices must be strictly increasing")
            last = g
            labels.extend(labs)
            grades.extend([g] * len(labs))
        return cls(tuple(labels), tuple(grades))

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def graded(self) -> bool:
        return self.grades is not None

    @property
    def top_grade(self) -> int:
        return max(self.grades, default=0) if self.grades else 0

    def indices(self, k: int) -> list[int]:
        return [i for i, g in enumerate(self.grades or ()) if g == k]

    def blocks(self) -> list[tuple[int, int, tuple[str, ...]]]:
        """(grade, dimension, labels) for every grade present."""
        out = []
        for k in sorted(set(self.grades or ())):
            idx = self.indices(k)
            out.append((k, len(idx), tuple(self.labels[i] for i in idx)))
        return out

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def tensor(self, other: "GradedSpace") -> "GradedSpace":
        labels = tuple(f"{a}{TENSOR_SEP}{b}" for a, b in product(self.labels, other.labels))
        grades = None
        if self.graded and other.graded:
            grades = tuple(a + b for a, b in product(self.grades, other.grades))
        return GradedSpace(labels, grades)

    def vector(self, coeffs: Mapping[str, object]) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        for lab, c in coeffs.items():
            v[self.index(lab)] += Fraction(c)
        return v

    def basis_vector(self, label: str) -> list[Fraction]:
        return self.vector({label: 1})


def tensor_labels(labels: Sequence[str], k: int) -> list[str]:
    return [TENSOR_SEP.join(w) for w in product(labels, repeat=k)]


def format_vector(vec: Mapping[int, Fraction] | Sequence[Fraction], labels: Sequence[str] | None = None) -> str:
    """Render a vector as ``label:coefficient`` pairs in index order."""
    items = vec.items() if isinstance(vec, Mapping) else enumerate(vec)
    parts = []
    for i, c in sorted(items):
        if c:
            name = labels[i] if labels is not None else str(i)
            parts.append(f"{name}:{c}")
    return " ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Grading:
    """A finite grading given by complementary idempotents, one per grade."""

    projectors: tuple[Matrix, ...]

    @classmethod
    def from_space(cls, space: GradedSpace) -> "Grading":
        if not space.graded:
            raise ValueError("space carries no grades")
        n = space.dim
        projs = []
        for k in range(space.top_grade + 1):
            projs.append(Matrix(n, n, {i: {i: 1} for i in space.indices(k)}))
        return cls(tuple(projs))

    @property
    def top(self) -> int:
        return len(self.projectors) - 1

    @property
    def dim(self) -> int:
        return self.projectors[0].nrows

    def piece(self, k: int) -> Subspace:
        if k < 0 or k > self.top:
            return Subspace.zero(self.dim)
        return Subspace.span_of_columns(self.projectors[k])

    def basis_matrix(self, k: int) -> Matrix:
        """Columns form a basis of the grade-``k`` piece."""
        sub = self.piece(k)
        return sub.matrix.transpose()

    def up_to(self, k: int) -> Matrix:
        n = self.dim
        acc = Matrix.zeros(n, n)
        for j in range(min(k, self.top) + 1):
            acc = acc + self.projectors[j]
        return acc

    def conjugate(self, forward: Matrix, backward: Matrix) -> "Grading":
        return Grading(tuple(forward @ p @ backward for p in self.projectors))


@dataclass(frozen=True)
class Filtration:
    """Ascending chain of subspaces ``steps[0] <= steps[1] <= ...``."""

    steps: tuple[Subspace, ...]
    exhaustive_at: int | None = None

    def __getitem__(self, k: int) -> Subspace:
        if k >= len(self.steps):
            return self.steps[-1]
        return self.steps[k]

    def __len__(self) -> int:
        return len(self.steps)

    def dims(self) -> list[int]:
        return [s.dim for s in self.steps]

    def is_ascending(self) -> bool:
        return all(a.is_subspace_of(b) for a, b in zip(self.steps, self.steps[1:]))


# ---------------------------------------------------------------------------
# co-algebras


@dataclass(frozen=True)
class Coalgebra:
    space: GradedSpace
    comult: Matrix
    counit: Matrix
    unit: tuple[Fraction, ...] | None = None
    grading: Grading | None = None
    cocommutative: bool = True
    name: str = ""

    def __post_init__(self):
        n = self.space.dim
        if self.comult.shape != (n * n, n):
            raise DimensionMismatch(f"comult is {self.comult.shape}, expected {(n * n, n)}")
        if self.counit.shape != (1, n):
            raise DimensionMismatch(f"counit is {self.counit.shape}, expected {(1, n)}")
        if self.unit is not None:
            if len(self.unit) != n:
                raise DimensionMismatch("unit vector has wrong length")
            object.__setattr__(self, "unit", tuple(Fraction(x) for x in self.unit))
        if self.grading is None and self.space.graded:
            object.__setattr__(self, "grading", Grading.from_space(self.space))

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels

    def delta(self, v: Sequence[object]) -> list[Fraction]:
        return self.comult.apply(v)

    def eps(self, v: Sequence[object]) -> Fraction:
        return self.counit.apply(v)[0]

    def with_grading(self, grading: Grading | None) -> "Coalgebra":
        return Coalgebra(self.space, self.comult, self.counit, self.unit, grading, self.cocommutative, self.name)

    def with_unit(self, unit: Sequence[object] | None) -> "Coalgebra":
        return Coalgebra(self.space, self.comult, self.counit, unit, self.grading, self.cocommutative, self.name)

    def fmt(self, vec) -> str:
        return format_vector(vec, self.labels)


def swap_matrix(n: int) -> Matrix:
    """The unsigned flip ``a (x) b -> b (x) a`` on Q^n (x) Q^n."""
    return Matrix(n * n, n * n, {j * n + i: {i * n + j: 1} for i in range(n) for j in range(n)})


def iterated_comult(c: Coalgebra, k: int, cap: int | None = DEFAULT_TENSOR_CAP) -> Matrix:
    """delta^k : M -> M^(k+1), expanded on the leftmost factor; delta^0 = id."""
    n = c.dim
    check_cap(n ** (k + 1), n, cap, f"delta^{k}")
    t = Matrix.identity(n)
    for j in range(1, k + 1):
        t = kron_apply(c.comult, 1, n ** (j - 1), t)
    return t


@dataclass
class AxiomReport:
    counit_ok: bool
    coassoc_ok: bool
    cocomm_ok: bool
    witnesses: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.counit_ok and self.coassoc_ok and self.cocomm_ok


def _first_bad_column(a: Matrix, b: Matrix) -> int | None:
    diff = a - b
    if diff.is_zero():
        return None
    return min(j for _, j, _ in diff.items())


def check_axioms(c: Coalgebra) -> AxiomReport:
    n = c.dim
    d = c.comult
    ident = Matrix.identity(n)
    # (eps (x) id) delta = id = (id (x) eps) delta
    left = kron_apply(c.counit, 1, n, d)
    right = kron_apply(c.counit, n, 1, d)
    bad = _first_bad_column(left, ident)
    if bad is None:
        bad = _first_bad_column(right, ident)
    witnesses = {}
    counit_ok = bad is None
    if not counit_ok:
        witnesses["counit"] = c.labels[bad]
    lhs = kron_apply(d, 1, n, d)
    rhs = kron_apply(d, n, 1, d)
    bad = _first_bad_column(lhs, rhs)
    coassoc_ok = bad is None
    if not coassoc_ok:
        witnesses["coassoc"] = c.labels[bad]
    bad = _first_bad_column(swap_matrix(n) @ d, d)
    cocomm_ok = bad is None
    if not cocomm_ok:
        witnesses["cocomm"] = c.labels[bad]
    return AxiomReport(counit_ok, coassoc_ok, cocomm_ok, witnesses)


def outer(u: Sequence[Fraction], n_tail: int = 1) -> Matrix:
    """``u`` as an ``n x 1`` matrix."""
    return Matrix.from_columns([list(u)], len(u))


def is_unit(c: Coalgebra, u: Sequence[object]) -> bool:
    u = [Fraction(x) for x in u]
    if len(u) != c.dim:
        raise DimensionMismatch("unit candidate has wrong length")
    if c.eps(u) != 1:
        return False
    col = outer(u)
    return c.comult.apply(u) == kronecker(col, col).apply([1])


def _unit_of(c: Coalgebra, u: Sequence[object] | None) -> list[Fraction]:
    if u is None:
        u = c.unit
    if u is None:
        raise NotAUnit(f"co-algebra {c.name or ''} has no unit")
    u = [Fraction(x) for x in u]
    if not is_unit(c, u):
        raise NotAUnit(f"not a unit: {c.fmt(u)}")
    return u


def counit_complement(c: Coalgebra, u: Sequence[object] | None = None) -> Matrix:
    """p-bar = id - u eps, the projection onto ker(eps) along span(u)."""
    u = _unit_of(c, u)
    return Matrix.identity(c.dim) - outer(u) @ c.counit


def reduced_comult(c: Coalgebra, u: Sequence[object] | None = None) -> Matrix:
    """(delta - u (x) id - id (x) u) o p-bar."""
    u = _unit_of(c, u)
    n = c.dim
    ucol = outer(u)
    ident = Matrix.identity(n)
    u_left = kronecker(ucol, ident)
    u_right = kronecker(ident, ucol)
    return (c.comult - u_left - u_right) @ counit_complement(c, u)


def iterated_reduced_comult(
    c: Coalgebra, u: Sequence[object] | None, k: int, cap: int | None = DEFAULT_TENSOR_CAP
) -> Matrix:
    """delta-bar^k : M -> M^(k+1), with delta-bar^0 = p-bar and leftmost expansion."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = c.dim
    check_cap(n ** (k + 1), n, cap, f"reduced delta^{k}")
    t = counit_complement(c, u)
    if k == 0:
        return t
    red = reduced_comult(c, u)
    t = red
    for j in range(2, k + 1):
        t = kron_apply(red, 1, n ** (j - 1), t)
    return t


def reduced_identity_holds(c: Coalgebra, u: Sequence[object] | None, k: int, cap: int | None = DEFAULT_TENSOR_CAP) -> bool:
    """Check delta-bar^k = p-bar^(k+1) o delta^k o p-bar."""
    n = c.dim
    pbar = counit_complement(c, u)
    t = iterated_comult(c, k, cap) @ pbar
    for pos in range(k + 1):
        t = kron_apply(pbar, n ** pos, n ** (k - pos), t)
    return t == iterated_reduced_comult(c, u, k, cap)


def left_and_right_expansions_agree(c: Coalgebra, u: Sequence[object] | None, k: int, cap: int | None = DEFAULT_TENSOR_CAP) -> bool:
    """Leftmost and rightmost expansions of delta-bar^k coincide (co-associativity)."""
    n = c.dim
    red = reduced_comult(c, u)
    left = iterated_reduced_comult(c, u, k, cap)
    t = counit_complement(c, u) if k == 0 else red
    for j in range(2, k + 1):
        t = kron_apply(red, n ** (j - 1), 1, t)
    return t == left


def coradical_filtration(
    c: Coalgebra, u: Sequence[object] | None = None, k_max: int | None = None, cap: int | None = DEFAULT_TENSOR_CAP
) -> Filtration:
    """R_k = ker(delta-bar^k) for k = 0..k_max (default: top grade, or until exhaustive)."""
    if k_max is None:
        k_max = c.grading.top if c.grading is not None else c.dim
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    steps = []
    exhaustive = None
    for k in range(k_max + 1):
        r = kernel_basis(iterated_reduced_comult(c, u, k, cap))
        steps.append(r)
        if exhaustive is None and r.dim == c.dim:
            exhaustive = k
    return Filtration(tuple(steps), exhaustive)


def grading_filtration(c: Coalgebra, grading: Grading | None = None) -> Filtration:
    grading = grading or c.grading
    if grading is None:
        raise ValueError("co-algebra is not graded")
    steps = tuple(Subspace.span_of_columns(grading.up_to(k)) for k in range(grading.top + 1))
    exhaustive = next((k for k, s in enumerate(steps) if s.dim == c.dim), None)
    return Filtration(steps, exhaustive)


# ---------------------------------------------------------------------------
# unital gradings


@dataclass
class GradingReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions_failed(self) -> set[str]:
        return {cond for cond, _ in self.violations}


def check_unital_grading(c: Coalgebra, u: Sequence[object] | None = None, grading: Grading | None = None) -> GradingReport:
    """Check that ``grading`` is a unital grading of ``c`` with unit ``u``.

    (a) delta maps M_(k) into the sum of M_(i) (x) M_(j) over i + j = k;
    (b) eps vanishes in positive grades and is an isomorphism on M_(0);
    (c) u lies in M_(0) (so that u = eps_0^{-1}(1)).
    """
    grading = grading or c.grading
    report = GradingReport()
    if grading is None:
        report.violations.append(("graded", "no grading"))
        return report
    n = c.dim
    projs = grading.projectors
    total = Matrix.zeros(n, n)
    for p in projs:
        total = total + p
    if total != Matrix.identity(n) or any(p @ p != p for p in projs):
        report.violations.append(("grading", "projectors are not a complete idempotent family"))
        return report
    for k, p in enumerate(projs):
        lhs = c.comult @ p
        rhs = Matrix.zeros(n * n, n)
        for i in range(k + 1):
            rhs = rhs + kronecker(projs[i], projs[k - i]) @ lhs
        bad = _first_bad_column(lhs, rhs)
        if bad is not None:
            report.violations.append(("a", f"grade {k}: {c.fmt(p.column(bad))}"))
    for k, p in enumerate(projs[1:], start=1):
        e = c.counit @ p
        if not e.is_zero():
            j = min(jj for _, jj, _ in e.items())
            report.violations.append(("b", f"eps nonzero in grade {k}: {c.fmt(p.column(j))}"))
    zero_piece = grading.piece(0)
    if zero_piece.dim != 1:
        witness = "M_(0) = 0"
        if zero_piece.dim > 1:
            ker = kernel_basis(c.counit @ grading.basis_matrix(0))
            b0 = grading.basis_matrix(0)
            witness = c.fmt(b0.apply_sparse(ker.basis()[0])) if ker.dim else f"dim M_(0) = {zero_piece.dim}"
        report.violations.append(("b", f"eps_0 not an isomorphism: {witness}"))
    elif not c.counit.apply(zero_piece.basis_dense()[0])[0]:
        report.violations.append(("b", "eps vanishes on M_(0)"))
    try:
        uu = _unit_of(c, u)
    except NotAUnit as exc:
        report.violations.append(("c", str(exc)))
    else:
        if not zero_piece.contains(uu):
            report.violations.append(("c", f"unit not in grade 0: {c.fmt(uu)}"))
    return report


# ---------------------------------------------------------------------------
# strictness, primitives, co-generation


@dataclass
class StrictReport:
    strict: bool
    per_grade: dict[int, tuple[int, int]]  # k -> (rank of delta-bar^{k-1} on M_(k), dim M_(k))
    single_condition: bool
    witness: tuple[int, str] | None = None

    @property
    def consistent(self) -> bool:
        return self.strict == self.single_condition


def check_strict(c: Coalgebra, u: Sequence[object] | None = None, cap: int | None = DEFAULT_TENSOR_CAP) -> StrictReport:
    grading = c.grading
    if grading is None:
        raise ValueError("co-algebra is not graded")
    per_grade = {}
    witness = None
    for k in range(2, grading.top + 1):
        b = grading.basis_matrix(k)
        if b.ncols == 0:
            continue
        img = iterated_reduced_comult(c, u, k - 1, cap) @ b
        r = rank(img)
        per_grade[k] = (r, b.ncols)
        if r < b.ncols and witness is None:
            ker = kernel_basis(img).basis()[0]
            witness = (k, c.fmt(b.apply_sparse(ker)))
    strict = all(r == d for r, d in per_grade.values())
    # single condition: delta-bar injective on the sum of grades >= 2
    cols = []
    for k in range(2, grading.top + 1):
        cols.extend(grading.basis_matrix(k).columns())
    if cols:
        high = Matrix.from_columns(cols, c.dim)
        single = rank(reduced_comult(c, u) @ high) == high.ncols
    else:
        single = True
    return StrictReport(strict, per_grade, single, witness)


@dataclass
class FiltrationComparison:
    contained: dict[int, bool]
    equal: dict[int, bool]
    strict: bool
    dims: dict[int, tuple[int, int]]  # k -> (dim G_k, dim R_k)
    witness: tuple[int, str] | None = None

    @property
    def ok(self) -> bool:
        """G_k <= R_k everywhere, with equality exactly when the grading is strict."""
        if not all(self.contained.values()):
            return False
        return all(self.equal.values()) == self.strict


def coradical_equals_grading(c: Coalgebra, u: Sequence[object] | None = None, cap: int | None = DEFAULT_TENSOR_CAP) -> FiltrationComparison:
    g = grading_filtration(c)
    r = coradical_filtration(c, u, c.grading.top, cap)
    strict = check_strict(c, u, cap).strict
    contained, equal, dims = {}, {}, {}
    witness = None
    for k in range(len(g)):
        contained[k] = g[k].is_subspace_of(r[k])
        equal[k] = g[k] == r[k]
        dims[k] = (g[k].dim, r[k].dim)
        if not equal[k] and witness is None:
            extra = next(v for v in r[k].basis() if not g[k].contains(v))
            witness = (k, c.fmt(extra))
    return FiltrationComparison(contained, equal, strict, dims, witness)


def primitives(c: Coalgebra, u: Sequence[object] | None = None) -> Subspace:
    """{m : delta(m) = m (x) u + u (x) m}."""
    u = _unit_of(c, u)
    n = c.dim
    ucol = outer(u)
    ident = Matrix.identity(n)
    return kernel_basis(c.comult - kronecker(ident, ucol) - kronecker(ucol, ident))


# ---------------------------------------------------------------------------
# constructions


def tensor_coalgebra(c1: Coalgebra, c2: Coalgebra) -> Coalgebra:
    """M1 (x) M2 with the middle-swap co-multiplication and total grading."""
    n1, n2 = c1.dim, c2.dim
    d = kronecker(c1.comult, c2.comult)
    # ((i1 j1),(i2 j2)) -> ((i1 i2),(j1 j2))
    perm = [0] * (n1 * n1 * n2 * n2)
    for i1, j1, i2, j2 in product(range(n1), range(n1), range(n2), range(n2)):
        src = (i1 * n1 + j1) * n2 * n2 + i2 * n2 + j2
        dst = (i1 * n2 + i2) * n1 * n2 + j1 * n2 + j2
        perm[src] = dst
    comult = d.permute_rows(perm)
    counit = kronecker(c1.counit, c2.counit)
    unit = None
    if c1.unit is not None and c2.unit is not None:
        unit = tuple(a * b for a, b in product(c1.unit, c2.unit))
    grading = None
    space = c1.space.tensor(c2.space)
    if not space.graded and c1.grading is not None and c2.grading is not None:
        g1, g2 = c1.grading.projectors, c2.grading.projectors
        n = n1 * n2
        projs = []
        for k in range(len(g1) + len(g2) - 1):
            acc = Matrix.zeros(n, n)
            for i in range(len(g1)):
                if 0 <= k - i < len(g2):
                    acc = acc + kronecker(g1[i], g2[k - i])
            projs.append(acc)
        grading = Grading(tuple(projs))
    name = f"{c1.name}{TENSOR_SEP}{c2.name}" if c1.name or c2.name else ""
    return Coalgebra(space, comult, counit, unit, grading, c1.cocommutative and c2.cocommutative, name)


def tensor_power(c: Coalgebra, k: int) -> Coalgebra:
    out = c
    for _ in range(k - 1):
        out = tensor_coalgebra(out, c)
    return out


def is_coalgebra_morphism(f: Matrix, source: Coalgebra, target: Coalgebra) -> bool:
    if f.shape != (target.dim, source.dim):
        raise DimensionMismatch(f"map {f.shape} between dims {source.dim} -> {target.dim}")
    n = target.dim
    lhs = target.comult @ f
    rhs = kron_apply(f, 1, source.dim, source.comult)
    rhs = kron_apply(f, n, 1, rhs)
    return lhs == rhs and target.counit @ f == source.counit


class GroupTooLarge(RuntimeError):
    pass


def group_closure(generators: Sequence[Matrix], order_cap: int = 5040) -> list[Matrix]:
    if not generators:
        raise ValueError("need at least one generator (pass the identity for the trivial group)")
    n = generators[0].nrows
    ident = Matrix.identity(n)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = s @ g
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    nxt.append(h)
                    if len(order) > order_cap:
                        raise GroupTooLarge(f"group generated exceeds order cap {order_cap}")
        frontier = nxt
    return order


def invariant_subcoalgebra(c: Coalgebra, action: Sequence[Matrix], order_cap: int = 5040, name: str = "") -> Coalgebra:
    """Sub-co-algebra of invariants under a finite group of co-algebra automorphisms.

    The co-multiplication on the invariants is ``(e (x) e) o delta`` where
    ``e`` is the averaging idempotent.
    """
    for g in action:
        if g.shape != (c.dim, c.dim) or rank(g) != c.dim:
            raise NotACoalgebraMorphism("action matrix is not an automorphism")
        if not is_coalgebra_morphism(g, c, c):
            raise NotACoalgebraMorphism("action matrix is not a co-algebra automorphism")
    group = group_closure(list(action), order_cap)
    n = c.dim
    inv = Fraction(1, len(group))
    e = Matrix.zeros(n, n)
    e2 = Matrix.zeros(n * n, n * n)
    for g in group:
        e = e + g
        e2 = e2 + kronecker(g, g)
    e = e.scale(inv)
    e2 = e2.scale(inv)
    if c.comult @ e != e2 @ c.comult:
        raise NotACoalgebraMorphism("averaging idempotent does not intertwine the co-multiplication")
    # homogeneous basis of the image, grade by grade when graded
    cols: list[dict[int, Fraction]] = []
    grades: list[int] | None = None
    if c.grading is not None:
        for p in c.grading.projectors:
            if e @ p != p @ e:
                raise NotACoalgebraMorphism("action does not preserve the grading")
        grades = []
        for k, p in enumerate(c.grading.projectors):
            piece = Subspace.span_of_columns(e @ p).basis()
            cols.extend(piece)
            grades.extend([k] * len(piece))
    else:
        cols = Subspace.span_of_columns(e).basis()
    b = Matrix.from_columns(cols, n)
    proj = left_inverse(b) @ e
    m = b.ncols
    comult = kron_apply(proj, m, 1, kron_apply(proj, 1, n, c.comult @ b))
    counit = c.counit @ b
    unit = None
    if c.unit is not None and e.apply(list(c.unit)) == list(c.unit):
        unit = tuple(proj.apply(list(c.unit)))
    labels = []
    used = set()
    for col in cols:
        lead = c.labels[min(col)]
        lab = f"avg[{lead}]"
        k = 1
        while lab in used:
            k += 1
            lab = f"avg[{lead}]#{k}"
        used.add(lab)
        labels.append(lab)
    space = GradedSpace(tuple(labels), tuple(grades) if grades is not None else None)
    return Coalgebra(space, comult, counit, unit, None, c.cocommutative, name or f"{c.name}^G")


def transport(c: Coalgebra, forward: Matrix, backward: Matrix, target: Coalgebra) -> Grading:
    """Transport the grading of ``c`` along a co-algebra isomorphism onto ``target``."""
    if c.grading is None:
        raise ValueError("source co-algebra is not graded")
    if not is_coalgebra_morphism(forward, c, target):
        raise NotACoalgebraMorphism("forward map is not a co-algebra morphism")
    if not is_coalgebra_morphism(backward, target, c):
        raise NotACoalgebraMorphism("backward map is not a co-algebra morphism")
    if forward @ backward != Matrix.identity(target.dim) or backward @ forward != Matrix.identity(c.dim):
        raise NotACoalgebraMorphism("maps are not mutually inverse")
    return c.grading.conjugate(forward, backward)


def grade_projection(c: Coalgebra, k: int, grading: Grading | None = None) -> Matrix:
    """The projection M -> M_(k), in coordinates of the basis of M_(k)."""
    grading = grading or c.grading
    b = grading.basis_matrix(k)
    if b.ncols == 0:
        return Matrix.zeros(0, c.dim)
    return left_inverse(b) @ grading.projectors[k]


def relabel(c: Coalgebra, mapping: Mapping[str, str], name: str | None = None) -> Coalgebra:
    labels = tuple(mapping.get(l, l) for l in c.labels)
    space = GradedSpace(labels, c.space.grades)
    return Coalgebra(space, c.comult, c.counit, c.unit, c.grading, c.cocommutative, c.name if name is None else name)
