"""Truncated tensor and symmetric co-algebras, and co-generation maps into them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial, prod
from typing import Sequence

from .coalgebra import (
    DEFAULT_TENSOR_CAP,
    TENSOR_SEP,
    Coalgebra,
    GradedSpace,
    Subspace,
    _unit_of,
    check_cap,
    is_coalgebra_morphism,
    iterated_comult,
)
from .linalg import Matrix, kron_apply, rank


def _labels_of(space) -> list[str]:
    if isinstance(space, GradedSpace):
        return list(space.labels)
    if isinstance(space, int):
        return [f"x{i + 1}" for i in range(space)]
    return list(space)


def monomial_exponents(nvars: int, n: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= n, by degree then reverse-lex."""
    out = []
    for d in range(n + 1):
        block = [a for a in product(range(d, -1, -1), repeat=nvars) if sum(a) == d]
        out.extend(block)
    return out


def monomial_label(alpha: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, alpha):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def truncated_tensor_coalg(space, n: int, cap: int | None = DEFAULT_TENSOR_CAP, name: str = "") -> Coalgebra:
    """T^{<=n} N with deconcatenation co-product, graded by word length."""
    names = _labels_of(space)
    m = len(names)
    words = [w for k in range(n + 1) for w in product(range(m), repeat=k)]
    dim = len(words)
    check_cap(dim * dim, dim, cap, "truncated tensor co-algebra")
    index = {w: i for i, w in enumerate(words)}
    triples = []
    for j, w in enumerate(words):
        for cut in range(len(w) + 1):
            triples.append((index[w[:cut]] * dim + index[w[cut:]], j, 1))
    labels = tuple(TENSOR_SEP.join(names[i] for i in w) if w else "1" for w in words)
    gs = GradedSpace(labels, tuple(len(w) for w in words))
    comult = Matrix.from_triples(dim * dim, dim, triples)
    counit = Matrix(1, dim, {0: {0: 1}})
    unit = [0] * dim
    unit[0] = 1
    return Coalgebra(gs, comult, counit, tuple(unit), None, True, name or f"T<={n}")


def truncated_sym_coalg(space, n: int, cap: int | None = DEFAULT_TENSOR_CAP, name: str = "") -> Coalgebra:
    """Sym^{<=n} N on the monomial basis with the binomial co-product.

    delta(x^a) = sum over b <= a of C(a, b) x^b (x) x^(a-b).
    """
    names = _labels_of(space)
    exps = monomial_exponents(len(names), n)
    dim = len(exps)
    check_cap(dim * dim, dim, cap, "truncated symmetric co-algebra")
    index = {a: i for i, a in enumerate(exps)}
    triples = []
    for j, a in enumerate(exps):
        for b in product(*(range(e + 1) for e in a)):
            c = prod(comb(e, f) for e, f in zip(a, b))
            rest = tuple(e - f for e, f in zip(a, b))
            triples.append((index[b] * dim + index[rest], j, c))
    gs = GradedSpace(tuple(monomial_label(a, names) for a in exps), tuple(sum(a) for a in exps))
    comult = Matrix.from_triples(dim * dim, dim, triples)
    counit = Matrix(1, dim, {0: {0: 1}})
    unit = [0] * dim
    unit[0] = 1
    return Coalgebra(gs, comult, counit, tuple(unit), None, True, name or f"Sym<={n}")


def sym_exponents(c: Coalgebra) -> list[tuple[int, ...]]:
    """Recover exponent vectors from a co-algebra built by truncated_sym_coalg."""
    nvars = len(c.space.indices(1))
    return monomial_exponents(nvars, c.grading.top)[: c.dim]


def sym_to_tensor(nvars: int, n: int) -> Matrix:
    """Embedding Sym^{<=n} -> T^{<=n}, x^a |-> sum of all words with content a.

    Up to the factor k! this is the symmetrizer (1/k!) sum_sigma sigma applied
    to any word of content a; the coefficient a! per distinct word makes it a
    co-algebra morphism for the binomial co-product.
    """
    exps = monomial_exponents(nvars, n)
    words = [w for k in range(n + 1) for w in product(range(nvars), repeat=k)]
    index = {w: i for i, w in enumerate(words)}
    triples = []
    for j, a in enumerate(exps):
        weight = prod(factorial(e) for e in a)
        for w in words:
            if len(w) == sum(a) and all(w.count(v) == a[v] for v in range(nvars)):
                triples.append((index[w], j, weight))
    return Matrix.from_triples(len(words), len(exps), triples)


def symmetrizer(nvars: int, n: int) -> Matrix:
    """The idempotent (1/k!) sum_sigma sigma on each T^k, k <= n."""
    words = [w for k in range(n + 1) for w in product(range(nvars), repeat=k)]
    index = {w: i for i, w in enumerate(words)}
    triples = []
    for j, w in enumerate(words):
        k = len(w)
        c = Fraction(1, factorial(k))
        for sigma in permutations(range(k)):
            triples.append((index[tuple(w[s] for s in sigma)], j, c))
    return Matrix.from_triples(len(words), len(words), triples)


@dataclass
class SymIsoCheck:
    morphism: bool
    injective: bool
    image_is_symmetric: bool

    @property
    def ok(self) -> bool:
        return self.morphism and self.injective and self.image_is_symmetric


def check_sym_embedding(space, n: int) -> SymIsoCheck:
    names = _labels_of(space)
    s = truncated_sym_coalg(names, n)
    t = truncated_tensor_coalg(names, n)
    f = sym_to_tensor(len(names), n)
    img = Subspace.span_of_columns(f)
    sym_img = Subspace.span_of_columns(symmetrizer(len(names), n))
    return SymIsoCheck(is_coalgebra_morphism(f, s, t), rank(f) == s.dim, img == sym_img)


@dataclass
class CogenerationResult:
    matrix: Matrix
    target: Coalgebra
    injective: bool
    morphism: bool

    @property
    def image(self) -> Subspace:
        return Subspace.span_of_columns(self.matrix)

    def tower(self, v: Sequence[object]) -> list[Fraction]:
        return self.matrix.apply(v)


def cogeneration_map(
    c: Coalgebra,
    u: Sequence[object] | None,
    r: Matrix,
    n: int,
    target_labels: Sequence[str] | None = None,
    cap: int | None = DEFAULT_TENSOR_CAP,
) -> CogenerationResult:
    """T^{<=n} r = eps + r + r^(x)2 o delta + ... + r^(x)n o delta^(n-1).

    ``r`` is a matrix ``M -> N``; the target is T^{<=n} N.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    _unit_of(c, u)
    m = c.dim
    ndim = r.nrows
    if r.ncols != m:
        raise ValueError(f"r has {r.ncols} columns, expected {m}")
    names = list(target_labels) if target_labels is not None else [f"n{i + 1}" for i in range(ndim)]
    target = truncated_tensor_coalg(names, n, cap)
    blocks = [c.counit]
    for k in range(1, n + 1):
        check_cap(ndim ** k, m, cap, f"co-generation block {k}")
        t = iterated_comult(c, k - 1, cap)
        for pos in range(k):
            # replace factor ``pos`` (M) by N; factors left of it are already N
            t = kron_apply(r, ndim ** pos, m ** (k - 1 - pos), t)
        blocks.append(t)
    mat = blocks[0]
    for b in blocks[1:]:
        mat = mat.vstack(b)
    injective = rank(mat) == m
    morphism = is_coalgebra_morphism(mat, c, target)
    return CogenerationResult(mat, target, injective, morphism)
