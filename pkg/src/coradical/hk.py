"""Co-algebra models of zero-cycles on K3 surfaces, their Hilbert schemes, and
the Fano variety of lines on a cubic fourfold."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from math import factorial
from typing import Sequence

from .coalgebra import (
    DEFAULT_TENSOR_CAP,
    Coalgebra,
    Filtration,
    GradedSpace,
    grading_filtration,
    iterated_reduced_comult,
    relabel,
)
from .linalg import Matrix, NoSolution, Subspace, are_orthogonal, is_idempotent, kronecker, lagrange_projectors, solve
from .symmetric import monomial_exponents, truncated_sym_coalg

# ---------------------------------------------------------------------------
# K3 surfaces and Hilbert schemes of points


@dataclass(frozen=True)
class HilbModel:
    """Sym^{<=n} of a t-dimensional primitive space, unit o = empty monomial.

    Primitive generator ``a{i}`` models ``[x_i] - o`` for a point ``x_i`` of
    the surface; n = 1 is the K3 model.
    """

    n: int
    t: int
    coalgebra: Coalgebra

    @property
    def point_labels(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.t))

    @property
    def unit(self) -> list[Fraction]:
        return list(self.coalgebra.unit)


K3Model = HilbModel


def build_hilb(n: int, t: int, cap: int | None = DEFAULT_TENSOR_CAP) -> HilbModel:
    if n < 1 or t < 1:
        raise ValueError("need n >= 1 and t >= 1")
    c = truncated_sym_coalg([f"a{i + 1}" for i in range(t)], n, cap)
    c = relabel(c, {"1": "o"}, name=f"hilb({n},{t})")
    return HilbModel(n, t, c)


def build_k3(t: int, cap: int | None = DEFAULT_TENSOR_CAP) -> HilbModel:
    m = build_hilb(1, t, cap)
    return HilbModel(1, t, relabel(m.coalgebra, {}, name=f"k3({t})"))


def _point_indices(m: HilbModel, spec: Sequence[str | int]) -> list[int]:
    idx = []
    for s in spec:
        if s == "o":
            continue
        if isinstance(s, int):
            i = s
        elif isinstance(s, str) and s.startswith("x") and s[1:].isdigit():
            i = int(s[1:]) - 1
        else:
            raise KeyError(f"unknown point label {s!r}")
        if not 0 <= i < m.t:
            raise KeyError(f"unknown point label {s!r}")
        idx.append(i)
    if len(idx) > m.n:
        raise ValueError(f"point spec has {len(idx)} non-o slots but n = {m.n}")
    return idx


def voisin_level(spec: Sequence[str | int]) -> int:
    """Number of slots not occupied by o."""
    return sum(1 for s in spec if s != "o")


def hilb_point_class(m: HilbModel, spec: Sequence[str | int]) -> list[Fraction]:
    """Class of [x_1, ..., x_k, o, ..., o]: the product of (o + a_{x_i}).

    Its degree-j part is the j-th elementary symmetric polynomial in the
    a_{x_i}.
    """
    idx = _point_indices(m, spec)
    poly: dict[tuple[int, ...], Fraction] = {(0,) * m.t: Fraction(1)}
    for i in idx:
        nxt: dict[tuple[int, ...], Fraction] = {}
        for a, c in poly.items():
            nxt[a] = nxt.get(a, 0) + c
            b = tuple(e + (1 if j == i else 0) for j, e in enumerate(a))
            nxt[b] = nxt.get(b, 0) + c
        poly = nxt
    exps = monomial_exponents(m.t, m.n)
    pos = {a: i for i, a in enumerate(exps)}
    v = [Fraction(0)] * len(exps)
    for a, c in poly.items():
        v[pos[a]] += c
    return v


def point_specs(m: HilbModel, level: int) -> list[tuple[str, ...]]:
    """All point specs with exactly ``level`` non-o slots."""
    return [tuple(f"x{i + 1}" for i in w) for w in combinations_with_replacement(range(m.t), level)]


def voisin_filtration(m: HilbModel) -> Filtration:
    steps = []
    vecs: list[list[Fraction]] = []
    for k in range(m.n + 1):
        vecs.extend(hilb_point_class(m, s) for s in point_specs(m, k))
        steps.append(Subspace(m.coalgebra.dim, vecs))
    exhaustive = next((k for k, s in enumerate(steps) if s.dim == m.coalgebra.dim), None)
    return Filtration(tuple(steps), exhaustive)


def symmetrized_tensor(m: HilbModel, spec: Sequence[str | int]) -> dict[int, Fraction]:
    """sum over sigma of a_{sigma(1)} (x) ... (x) a_{sigma(k)} as a sparse vector in M^(x)k."""
    idx = _point_indices(m, spec)
    c = m.coalgebra
    dim = c.dim
    out: dict[int, Fraction] = {}
    for perm in permutations(range(len(idx))):
        flat = 0
        for p in perm:
            flat = flat * dim + c.space.index(f"a{idx[p] + 1}")
        out[flat] = out.get(flat, 0) + 1
    return out


@dataclass
class MuCheck:
    k: int
    mu: Matrix  # M_(1)^(x)k -> M
    mu_after_delta: bool  # mu o delta-bar^{k-1} = k! id on M_(k)
    delta_after_mu: bool  # delta-bar^{k-1} o mu = k! id on Sym^k M_(1)

    @property
    def ok(self) -> bool:
        return self.mu_after_delta and self.delta_after_mu


def mu_k(m: HilbModel, k: int, cap: int | None = DEFAULT_TENSOR_CAP) -> MuCheck:
    """Multiplication a_{i1} (x) ... (x) a_{ik} -> a_{i1}...a_{ik} and its two checks."""
    if not 1 <= k <= m.n:
        raise ValueError(f"need 1 <= k <= n = {m.n}")
    c = m.coalgebra
    dim, t = c.dim, m.t
    exps = monomial_exponents(t, m.n)
    pos = {a: i for i, a in enumerate(exps)}
    prim = [c.space.index(f"a{i + 1}") for i in range(t)]
    words = list(_words(t, k))
    triples = []
    for j, w in enumerate(words):
        a = tuple(w.count(i) for i in range(t))
        triples.append((pos[a], j, 1))
    mu = Matrix.from_triples(dim, len(words), triples)
    # delta-bar^{k-1} restricted to rows in M_(1)^(x)k
    red = iterated_reduced_comult(c, None, k - 1, cap)
    rows = [_flat(w, prim, dim) for w in words]
    red1 = red.submatrix(rows=rows)
    fact = factorial(k)
    grade_k = c.space.indices(k)
    # the rows outside M_(1)^(x)k must vanish on M_(k)
    support_ok = (red.submatrix(cols=grade_k).nnz == red1.submatrix(cols=grade_k).nnz)
    proj_k = Matrix(dim, dim, {i: {i: 1} for i in grade_k})
    mu_after = support_ok and mu @ red1 @ proj_k == proj_k.scale(fact)
    sym = _symmetrizer_words(t, k)
    delta_after = red1 @ mu @ sym == sym.scale(fact)
    return MuCheck(k, mu, mu_after, delta_after)


def _words(t: int, k: int):
    from itertools import product

    return product(range(t), repeat=k)


def _flat(w, prim, dim) -> int:
    flat = 0
    for i in w:
        flat = flat * dim + prim[i]
    return flat


def _symmetrizer_words(t: int, k: int) -> Matrix:
    words = list(_words(t, k))
    index = {w: i for i, w in enumerate(words)}
    triples = []
    c = Fraction(1, factorial(k))
    for j, w in enumerate(words):
        for p in permutations(range(k)):
            triples.append((index[tuple(w[q] for q in p)], j, c))
    return Matrix.from_triples(len(words), len(words), triples)


def hilb_filtrations_agree(m: HilbModel, cap: int | None = DEFAULT_TENSOR_CAP) -> dict[int, tuple[bool, bool]]:
    """k -> (S_k == G_k, G_k == R_k)."""
    from .coalgebra import coradical_filtration

    s = voisin_filtration(m)
    g = grading_filtration(m.coalgebra)
    r = coradical_filtration(m.coalgebra, None, m.n, cap)
    return {k: (s[k] == g[k], g[k] == r[k]) for k in range(m.n + 1)}


# ---------------------------------------------------------------------------
# Fano variety of lines


class MissingTableEntry(LookupError):
    pass


PHI_EIGENVALUES = (1, -2, 4)


@dataclass(frozen=True)
class FanoModel:
    """Zero-cycles on the Fano variety of lines.

    CH_0 side: o (grade 0), b{l} for each line (grade 1, modelling [l] - o)
    and t{T} for each triangle (grade 2, modelling [l1]+[l2]+[l3]-3o).
    CH^2 side: the surfaces S_o and S_l, with the relation
    S_l1 + S_l2 + S_l3 = 3 S_o per triangle and a partial intersection table.
    """

    lines: int
    triangles: tuple[tuple[int, int, int], ...]
    coalgebra: Coalgebra
    phi: Matrix
    table: dict = field(default_factory=dict, compare=False)

    def triangle_label(self, i: int) -> str:
        return f"t{i + 1}"


def _validate_triangles(lines: int, triangles) -> tuple[tuple[int, int, int], ...]:
    out = []
    for tri in triangles:
        tri = tuple(int(x) for x in tri)
        if len(tri) != 3 or len(set(tri)) != 3:
            raise ValueError(f"malformed triangle {tri}: need three distinct lines")
        if any(not 0 <= x < lines for x in tri):
            raise ValueError(f"triangle {tri} references an unknown line")
        key = tuple(sorted(tri))
        if key in {tuple(sorted(t)) for t in out}:
            raise ValueError(f"duplicate triangle {tri}")
        # two lines of a triangle determine the third
        for t in out:
            if len(set(t) & set(tri)) == 2:
                raise ValueError(f"triangles {t} and {tri} share two lines")
        out.append(tri)
    return tuple(out)


def build_fano(lines: int, triangles: Sequence[Sequence[int]]) -> FanoModel:
    tris = _validate_triangles(lines, triangles)
    labels = ["o"] + [f"b{l + 1}" for l in range(lines)] + [f"t{i + 1}" for i in range(len(tris))]
    grades = [0] + [1] * lines + [2] * len(tris)
    space = GradedSpace(tuple(labels), tuple(grades))
    dim = len(labels)
    o = 0
    triples = [(o * dim + o, o, 1)]
    for l in range(lines):
        b = 1 + l
        triples += [(b * dim + o, b, 1), (o * dim + b, b, 1)]
    for i, tri in enumerate(tris):
        t = 1 + lines + i
        triples += [(t * dim + o, t, 1), (o * dim + t, t, 1)]
        for p, q in permutations(tri, 2):
            triples.append(((1 + p) * dim + (1 + q), t, 1))
    comult = Matrix.from_triples(dim * dim, dim, triples)
    counit = Matrix(1, dim, {0: {0: 1}})
    unit = [1] + [0] * (dim - 1)
    phi = Matrix.diagonal([PHI_EIGENVALUES[g] for g in grades])
    c = Coalgebra(space, comult, counit, tuple(unit), None, True, f"fano({lines},{len(tris)})")
    return FanoModel(lines, tris, c, phi, _intersection_table(tris))


def _intersection_table(tris) -> dict:
    """Declared products of surfaces, valued in formal combinations of points."""
    table = {("S_o", "S_o"): {"o": Fraction(5)}}
    for tri in tris:
        for i, j in combinations(range(3), 2):
            k = 3 - i - j
            li, lj, lk = (f"l{tri[x] + 1}" for x in (i, j, k))
            key = tuple(sorted((f"S_{li}", f"S_{lj}")))
            table[key] = {"o": Fraction(6), lk: Fraction(1), li: Fraction(-1), lj: Fraction(-1)}
    return table


@dataclass
class FanoEigenprojectors:
    projectors: list[Matrix]
    idempotent: bool
    orthogonal: bool
    complete: bool
    images_match_grades: bool
    phi_compatible: bool
    eigenspace_bookkeeping: bool

    @property
    def ok(self) -> bool:
        return all(
            (self.idempotent, self.orthogonal, self.complete, self.images_match_grades, self.phi_compatible, self.eigenspace_bookkeeping)
        )


def fano_eigenprojectors(m: FanoModel) -> FanoEigenprojectors:
    projs = lagrange_projectors(m.phi, PHI_EIGENVALUES)
    n = m.coalgebra.dim
    c = m.coalgebra
    total = Matrix.zeros(n, n)
    for p in projs:
        total = total + p
    orth = all(are_orthogonal(projs[i], projs[j]) for i, j in combinations(range(3), 2))
    images = all(Subspace.span_of_columns(p) == c.grading.piece(k) for k, p in enumerate(projs))
    phi2 = kronecker(m.phi, m.phi)
    compat = c.comult @ m.phi == phi2 @ c.comult
    bookkeeping = True
    for lam, p in zip(PHI_EIGENVALUES, projs):
        img = c.comult @ p
        bookkeeping &= phi2 @ img == img.scale(lam)
    return FanoEigenprojectors(projs, all(is_idempotent(p) for p in projs), orth, total == Matrix.identity(n), images, compat, bookkeeping)


def _quad_key(a: str, b: str) -> tuple[str, str]:
    return tuple(sorted((a, b)))


def _format_combo(d: dict, order: Sequence[str] | None = None) -> str:
    keys = order if order is not None else sorted(d)
    parts = []
    for k in keys:
        c = d.get(k, 0)
        if c:
            name = k if isinstance(k, str) else "·".join(k)
            parts.append(f"{name}:{c}")
    return " ".join(parts) if parts else "0"


@dataclass
class FanoMuDeltaReport:
    triangle: tuple[int, int, int]
    steps: list[tuple[str, str]]
    result: dict[str, Fraction]
    factor: Fraction | None
    model_vector: list[Fraction]

    @property
    def ok(self) -> bool:
        return self.factor == 2


def fano_mu_delta_check(m: FanoModel, tri_index: int) -> FanoMuDeltaReport:
    """Replay the computation of mu o delta-bar on a triangle class.

    1. L_* l_i = S_o - S_{l_i};
    2. expand the sum of squares (S_o - S_{l_i})^2 as a quadratic form;
    3. add a multiple of the triangle relation so that only declared
       products remain (solved exactly; fails if impossible);
    4. evaluate the declared products from the intersection table.
    """
    tri = m.triangles[tri_index]
    lines = [f"l{x + 1}" for x in tri]
    syms = ["S_o"] + [f"S_{l}" for l in lines]
    steps = [(f"L_*{l}", f"S_o:1 S_{l}:-1") for l in lines]

    quad: dict[tuple[str, str], Fraction] = {}
    for l in lines:
        lin = {"S_o": Fraction(1), f"S_{l}": Fraction(-1)}
        for a, x in lin.items():
            for b, y in lin.items():
                key = _quad_key(a, b)
                quad[key] = quad.get(key, 0) + x * y
    quad = {k: v for k, v in quad.items() if v}
    steps.append(("expanded", _format_combo(quad)))

    # Unknown linear form L = sum_s c_s s; quad + rel * L must avoid undeclared monomials.
    relation = {"S_o": Fraction(-3), **{f"S_{l}": Fraction(1) for l in lines}}
    monomials = sorted({_quad_key(a, b) for a in syms for b in syms})
    undeclared = [mon for mon in monomials if mon not in m.table]
    rows, rhs = [], []
    for mon in undeclared:
        row = []
        for s in syms:
            coeff = Fraction(0)
            for r, rc in relation.items():
                if _quad_key(r, s) == mon:
                    coeff += rc
            row.append(coeff)
        rows.append(row)
        rhs.append(-quad.get(mon, Fraction(0)))
    try:
        lin_form = solve(Matrix.from_rows(rows, len(syms)), rhs) if rows else [Fraction(0)] * len(syms)
    except NoSolution:
        raise MissingTableEntry(f"triangle {tri}: the expression cannot be reduced to declared products") from None
    reduced = dict(quad)
    for r, rc in relation.items():
        for s, sc in zip(syms, lin_form):
            key = _quad_key(r, s)
            reduced[key] = reduced.get(key, 0) + rc * sc
    reduced = {k: v for k, v in reduced.items() if v}
    steps.append(("after relation", _format_combo(reduced)))

    result: dict[str, Fraction] = {}
    for mon, coeff in sorted(reduced.items()):
        if mon not in m.table:
            raise MissingTableEntry(f"no intersection table entry for {mon[0]}·{mon[1]}")
        value = m.table[mon]
        steps.append((f"{coeff}*{mon[0]}·{mon[1]}", _format_combo({k: coeff * v for k, v in value.items()})))
        for pt, v in value.items():
            result[pt] = result.get(pt, 0) + coeff * v
    result = {k: v for k, v in result.items() if v}
    steps.append(("result", _format_combo(result)))

    triangle_class = {"o": Fraction(-3), **{l: Fraction(1) for l in lines}}
    factor = None
    ratio = result.get(lines[0], Fraction(0))
    if all(result.get(k, 0) == ratio * v for k, v in triangle_class.items()) and set(result) <= set(triangle_class):
        factor = ratio
    c = m.coalgebra
    model_vec = [Fraction(0)] * c.dim
    if factor is not None:
        model_vec[c.space.index(m.triangle_label(tri_index))] = factor
    return FanoMuDeltaReport(tri, steps, result, factor, model_vec)


def fano_cohomological_degree(grade: int) -> int:
    """Grades 0, 1, 2 correspond to the cohomological indices 0, 2, 4."""
    return 2 * grade
