"""Zero-cycles on abelian varieties.

Two models are used side by side:

* the group algebra Q[Z^r] (:class:`GroupAlgebraElement`), where point
  classes are exactly group-like and the Pontryagin product is convolution;
* the truncated model Sym^{<=g}(W) (:class:`TruncatedAbelianModel`), where
  W is spanned by log-classes l_1..l_s and a point x in Z^s has class
  exp(l_x) with l_x = sum x_i l_i.  Kernels and filtrations are finite
  computations here.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

from . import lazy
from .coalgebra import (
    DEFAULT_TENSOR_CAP,
    Coalgebra,
    Subspace,
    coradical_filtration,
    grading_filtration,
    invariant_subcoalgebra,
    iterated_reduced_comult,
    relabel,
)
from .linalg import Matrix, are_orthogonal, is_idempotent, lagrange_projectors
from .symmetric import monomial_exponents, truncated_sym_coalg

Point = tuple[int, ...]


# ---------------------------------------------------------------------------
# the group algebra Q[Z^r]


class GroupAlgebraElement(Mapping):
    """Finite formal rational combination of points of Z^r."""

    __slots__ = ("_terms", "rank")

    def __init__(self, terms: Mapping[Point, object] | None = None, rank: int | None = None):
        clean = {}
        for p, c in (terms or {}).items():
            p = tuple(int(x) for x in p)
            c = Fraction(c)
            if c:
                clean[p] = clean.get(p, 0) + c
        self._terms = {p: c for p, c in clean.items() if c}
        if rank is None:
            rank = len(next(iter(self._terms))) if self._terms else 0
        if any(len(p) != rank for p in self._terms):
            raise ValueError("points of different ranks")
        self.rank = rank

    @classmethod
    def point(cls, x: Sequence[int]) -> "GroupAlgebraElement":
        return cls({tuple(x): 1}, len(x))

    @classmethod
    def origin(cls, r: int) -> "GroupAlgebraElement":
        return cls.point((0,) * r)

    def __getitem__(self, p: Point) -> Fraction:
        return self._terms[p]

    def __iter__(self) -> Iterator[Point]:
        return iter(sorted(self._terms))

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return GroupAlgebraElement(lazy.add_into(dict(self._terms), other), max(self.rank, other.rank))

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return GroupAlgebraElement(lazy.add_into(dict(self._terms), other, -1), max(self.rank, other.rank))

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement({p: -c for p, c in self._terms.items()}, self.rank)

    def __rmul__(self, c) -> "GroupAlgebraElement":
        c = Fraction(c)
        return GroupAlgebraElement({p: c * v for p, v in self._terms.items()}, self.rank)

    def __eq__(self, other) -> bool:
        if isinstance(other, GroupAlgebraElement):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def degree(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}[{','.join(map(str, p))}]" for p, c in sorted(self._terms.items()))
        return f"GroupAlgebraElement({body or '0'})"


def pontryagin(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    """Convolution: [x] * [y] = [x + y]."""
    out: dict[Point, Fraction] = {}
    for x, c in a.items():
        for y, d in b.items():
            z = tuple(i + j for i, j in zip(x, y))
            out[z] = out.get(z, 0) + c * d
    return GroupAlgebraElement(out, max(a.rank, b.rank))


def pontryagin_power(a: GroupAlgebraElement, n: int) -> GroupAlgebraElement:
    out = GroupAlgebraElement.origin(a.rank)
    for _ in range(n):
        out = pontryagin(out, a)
    return out


def group_algebra(r: int) -> lazy.LazyCoalgebra:
    """Q[Z^r] with every point group-like: delta[x] = [x] (x) [x], eps[x] = 1."""
    return lazy.LazyCoalgebra(lambda p: {(p, p): Fraction(1)}, lambda p: Fraction(1), name=f"Q[Z^{r}]")


@dataclass
class GroupLikeReport:
    x: Point
    k: int
    equal: bool
    support: int
    lhs: dict = field(repr=False, default_factory=dict)


def eq_redcomult_grouplike(r: int, x: Sequence[int], k: int) -> GroupLikeReport:
    """Compare delta-bar^k[x] with ([x] - [0])^(x)(k+1) by sparse expansion."""
    lc = group_algebra(r)
    u = GroupAlgebraElement.origin(r)
    px = GroupAlgebraElement.point(x)
    lhs = lazy.iterated_reduced_comult(lc, u, px, k)
    rhs = lazy.tensor_power(px - u, k + 1)
    return GroupLikeReport(tuple(x), k, lhs == rhs, len(rhs), lhs)


# ---------------------------------------------------------------------------
# the truncated model Sym^{<=g}(W)


@dataclass(frozen=True)
class TruncatedAbelianModel:
    g: int
    s: int
    points: tuple[Point, ...]
    coalgebra: Coalgebra
    exponents: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return self.coalgebra.dim

    @property
    def origin(self) -> list[Fraction]:
        return list(self.coalgebra.unit)

    def grade_indices(self, j: int) -> list[int]:
        return self.coalgebra.space.indices(j)


def build_abelian(g: int, s: int, points: Sequence[Sequence[int]] = (), cap: int | None = DEFAULT_TENSOR_CAP) -> TruncatedAbelianModel:
    if g < 1 or s < 1:
        raise ValueError("need g >= 1 and s >= 1")
    pts = tuple(tuple(int(v) for v in p) for p in points)
    if any(len(p) != s for p in pts):
        raise ValueError(f"points must have {s} coordinates")
    c = truncated_sym_coalg([f"l{i + 1}" for i in range(s)], g, cap)
    c = relabel(c, {"1": "[0]"}, name=f"abelian({g},{s})")
    return TruncatedAbelianModel(g, s, pts, c, tuple(monomial_exponents(s, g)))


def product_matrix(model: TruncatedAbelianModel) -> Matrix:
    """Pontryagin product M (x) M -> M: truncated multiplication of monomials."""
    exps = model.exponents
    pos = {a: i for i, a in enumerate(exps)}
    n = len(exps)
    triples = []
    for i, a in enumerate(exps):
        for j, b in enumerate(exps):
            c = tuple(x + y for x, y in zip(a, b))
            if c in pos:
                triples.append((pos[c], i * n + j, 1))
    return Matrix.from_triples(n, n * n, triples)


def star(model: TruncatedAbelianModel, v: Sequence[Fraction], w: Sequence[Fraction]) -> list[Fraction]:
    exps = model.exponents
    pos = {a: i for i, a in enumerate(exps)}
    out = [Fraction(0)] * len(exps)
    for i, x in enumerate(v):
        if not x:
            continue
        for j, y in enumerate(w):
            if not y:
                continue
            c = tuple(p + q for p, q in zip(exps[i], exps[j]))
            k = pos.get(c)
            if k is not None:
                out[k] += x * y
    return out


def star_power(model: TruncatedAbelianModel, v: Sequence[Fraction], n: int) -> list[Fraction]:
    out = model.origin
    for _ in range(n):
        out = star(model, out, v)
    return out


def ell(model: TruncatedAbelianModel, point_index: int) -> list[Fraction]:
    """The log-class l_x = sum x_i l_i of a declared point."""
    x = model.points[point_index]
    v = [Fraction(0)] * model.dim
    for i, xi in enumerate(x):
        v[model.coalgebra.space.index(f"l{i + 1}")] = Fraction(xi)
    return v


def exp_trunc(model: TruncatedAbelianModel, v: Sequence[Fraction]) -> list[Fraction]:
    """sum_{j <= g} v^{*j} / j!."""
    out = [Fraction(0)] * model.dim
    power = model.origin
    for j in range(model.g + 1):
        out = [a + b / factorial(j) for a, b in zip(out, power)]
        power = star(model, power, v)
    return out


def log_trunc(model: TruncatedAbelianModel, v: Sequence[Fraction]) -> list[Fraction]:
    """sum_{n >= 1} (-1)^{n-1}/n (v - [0])^{*n}; requires eps(v) = 1."""
    if model.coalgebra.eps(v) != 1:
        raise ValueError("log needs an element of co-unit 1")
    y = [a - b for a, b in zip(v, model.origin)]
    out = [Fraction(0)] * model.dim
    power = model.origin
    for n in range(1, model.g + 1):
        power = star(model, power, y)
        out = [a + Fraction((-1) ** (n - 1), n) * b for a, b in zip(out, power)]
    return out


def point_class(model: TruncatedAbelianModel, point_index: int) -> list[Fraction]:
    return exp_trunc(model, ell(model, point_index))


def log_point(model: TruncatedAbelianModel, point_index: int) -> list[Fraction]:
    return log_trunc(model, point_class(model, point_index))


def beauville_component(model: TruncatedAbelianModel, point_index: int, j: int) -> list[Fraction]:
    """Grade-j component of [x]: l_x^{*j} / j!."""
    if not 0 <= j <= model.g:
        raise ValueError(f"component index {j} outside 0..{model.g}")
    p = star_power(model, ell(model, point_index), j)
    return [a / factorial(j) for a in p]


def kunnemann_component(model: TruncatedAbelianModel, point_index: int, k: int) -> list[Fraction]:
    """(1/(2g-k)!) (log[x])^{*(2g-k)}; zero for k < g since the power truncates."""
    if not 0 <= k <= 2 * model.g:
        raise ValueError(f"projector index {k} outside 0..{2 * model.g}")
    e = 2 * model.g - k
    p = star_power(model, log_point(model, point_index), e)
    return [a / factorial(e) for a in p]


def induced_algebra_map(model_exps: Sequence[tuple[int, ...]], linear: Matrix) -> Matrix:
    """Multiplicative extension of a linear map on generators to truncated monomials."""
    exps = list(model_exps)
    pos = {a: i for i, a in enumerate(exps)}
    nv = len(exps[0]) if exps else 0
    images = []
    for v in range(nv):
        col = linear.column(v)
        images.append({tuple(1 if w == i else 0 for w in range(nv)): c for i, c in col.items()})
    triples = []
    for j, a in enumerate(exps):
        poly: dict[tuple[int, ...], Fraction] = {(0,) * nv: Fraction(1)}
        for v, e in enumerate(a):
            for _ in range(e):
                nxt: dict[tuple[int, ...], Fraction] = {}
                for m, c in poly.items():
                    for mm, d in images[v].items():
                        key = tuple(x + y for x, y in zip(m, mm))
                        if key in pos:
                            nxt[key] = nxt.get(key, 0) + c * d
                poly = nxt
        for m, c in poly.items():
            if c:
                triples.append((pos[m], j, c))
    return Matrix.from_triples(len(exps), len(exps), triples)


def mult_by_m(model: TruncatedAbelianModel, m: int) -> Matrix:
    """[m]_*: l |-> m l, extended multiplicatively (eigenvalue m^j on grade j)."""
    return induced_algebra_map(model.exponents, Matrix.identity(model.s).scale(m))


def dm_projector(model: TruncatedAbelianModel, m: int, k: int) -> Matrix:
    """Eigenprojector of [m]_* for eigenvalue m^k, as a Lagrange polynomial in [m]_*."""
    if m in (-1, 0, 1):
        raise ValueError("m must not be -1, 0 or 1")
    if not 0 <= k <= model.g:
        raise ValueError(f"k outside 0..{model.g}")
    return dm_projectors(model, m)[k]


def dm_projectors(model: TruncatedAbelianModel, m: int) -> list[Matrix]:
    if m in (-1, 0, 1):
        raise ValueError("m must not be -1, 0 or 1")
    return lagrange_projectors(mult_by_m(model, m), [m ** j for j in range(model.g + 1)])


def contravariant_index(model: TruncatedAbelianModel, j: int) -> int:
    """Covariant grade j sits in the contravariant piece of index 2g - j."""
    return 2 * model.g - j


@dataclass
class ProjectorFamilyReport:
    m: int
    idempotent: bool
    orthogonal: bool
    complete: bool
    images_match_grades: bool

    @property
    def ok(self) -> bool:
        return self.idempotent and self.orthogonal and self.complete and self.images_match_grades


def check_dm_family(model: TruncatedAbelianModel, m: int) -> ProjectorFamilyReport:
    projs = dm_projectors(model, m)
    n = model.dim
    total = Matrix.zeros(n, n)
    for p in projs:
        total = total + p
    orth = all(are_orthogonal(projs[i], projs[j]) for i in range(len(projs)) for j in range(i + 1, len(projs)))
    images = all(Subspace.span_of_columns(p) == model.coalgebra.grading.piece(k) for k, p in enumerate(projs))
    return ProjectorFamilyReport(m, all(is_idempotent(p) for p in projs), orth, total == Matrix.identity(n), images)


@dataclass
class VanishingReport:
    point: Point
    vanishes: bool  # delta-bar^g [x] == 0
    sharp: bool | None  # delta-bar^{g-1} [x] != 0 (None when l_x = 0)


def exterior_power_vanishing(model: TruncatedAbelianModel, point_index: int, cap: int | None = DEFAULT_TENSOR_CAP) -> VanishingReport:
    c = model.coalgebra
    x = point_class(model, point_index)
    top = iterated_reduced_comult(c, None, model.g, cap).apply(x)
    below = iterated_reduced_comult(c, None, model.g - 1, cap).apply(x)
    nonzero_ell = any(ell(model, point_index))
    sharp = any(below) if nonzero_ell else None
    return VanishingReport(model.points[point_index], not any(top), sharp)


@dataclass
class BeauvilleComparison:
    equal: dict[int, bool]
    dims: dict[int, int]

    @property
    def ok(self) -> bool:
        return all(self.equal.values())


def coradical_vs_beauville(model: TruncatedAbelianModel, cap: int | None = DEFAULT_TENSOR_CAP) -> BeauvilleComparison:
    r = coradical_filtration(model.coalgebra, None, model.g, cap)
    g = grading_filtration(model.coalgebra)
    return BeauvilleComparison({k: r[k] == g[k] for k in range(model.g + 1)}, {k: r[k].dim for k in range(model.g + 1)})


def pontryagin_is_graded(model: TruncatedAbelianModel) -> bool:
    """grade i * grade j lies in grade i + j (zero beyond g)."""
    exps = model.exponents
    grades = [sum(a) for a in exps]
    prod_m = product_matrix(model)
    n = len(exps)
    for r, col, _ in prod_m.items():
        i, j = divmod(col, n)
        if grades[r] != grades[i] + grades[j]:
            return False
    return True


# ---------------------------------------------------------------------------
# Kummer pattern: invariants of A^n under S_{n+1}


def kummer_generators(n: int) -> list[Matrix]:
    """S_{n+1} acting on A^n = {x_1 + ... + x_{n+1} = 0}, coordinates x_1..x_n."""
    gens = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(Matrix(n, n, {perm[j]: {j: 1} for j in range(n)}))
    # transposition (n, n+1): x_n |-> x_{n+1} = -(x_1 + ... + x_n)
    data = {i: {i: 1} for i in range(n - 1)}
    data[n - 1] = {j: -1 for j in range(n)}
    gens.append(Matrix(n, n, data))
    return gens


def kummer_model(g: int, s: int, n: int, cap: int | None = DEFAULT_TENSOR_CAP) -> tuple[Coalgebra, Coalgebra, list[Matrix]]:
    """Return (model of A^n, its S_{n+1}-invariant sub-co-algebra, action matrices).

    A^n is modeled by Sym^{<=ng}(W^n) with W^n = W (x) Q^n; the action is the
    multiplicative extension of (P (x) id_W) for each generator P.
    """
    names = [f"l{i + 1}_{a + 1}" for i in range(n) for a in range(s)]
    big = truncated_sym_coalg(names, n * g, cap)
    big = relabel(big, {"1": "[0]"}, name=f"abelian^{n}({g},{s})")
    exps = monomial_exponents(n * s, n * g)
    action = []
    for p in kummer_generators(n):
        lin = _kron_small(p, Matrix.identity(s))
        action.append(induced_algebra_map(exps, lin))
    inv = invariant_subcoalgebra(big, action, order_cap=factorial(n + 1), name=f"kummer({g},{s},{n})")
    return big, inv, action


def _kron_small(a: Matrix, b: Matrix) -> Matrix:
    from .linalg import kronecker

    return kronecker(a, b)
