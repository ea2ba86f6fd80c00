"""Finite incidence correspondences and transport of co-algebra structure.

A :class:`FiniteVariety` is a finite point set with declared rational
equivalences; its group of zero-cycles is the free span modulo those
relations.  A :class:`Cover` is a finite variety Gamma with maps to X and Y
in which every fibre has the same multiplicity-weighted size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .coalgebra import (
    Coalgebra,
    GradedSpace,
    Grading,
    NotACoalgebraMorphism,
    check_unital_grading,
    coradical_filtration,
    transport,
)
from .linalg import Matrix, Subspace, kronecker, left_inverse, rank

DEFAULT_PRODUCT_CAP = 20_000


class RelationNotPreserved(ValueError):
    pass


class InvalidCover(ValueError):
    pass


class ProductTooLarge(RuntimeError):
    pass


class PreconditionFailed(ValueError):
    pass


@dataclass(frozen=True)
class FiniteVariety:
    points: tuple[str, ...]
    relations: Subspace
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate point labels")
        if self.relations.ambient_dim != len(self.points):
            raise ValueError("relations live in the wrong ambient space")
        for r in self.relations.basis():
            if sum(r.values()) != 0:
                raise ValueError(f"relation of nonzero degree in {self.name or 'variety'}")

    @classmethod
    def make(cls, points: Sequence[str], relations: Sequence[Mapping[str, object]] = (), name: str = "") -> "FiniteVariety":
        pts = tuple(points)
        index = {p: i for i, p in enumerate(pts)}
        vecs = []
        for rel in relations:
            try:
                vecs.append({index[p]: Fraction(c) for p, c in rel.items()})
            except KeyError as exc:
                raise ValueError(f"relation mentions unknown point {exc.args[0]!r}") from None
        return cls(pts, Subspace(len(pts), vecs), name)

    @property
    def size(self) -> int:
        return len(self.points)

    def index(self, p: str) -> int:
        return self.points.index(p)

    @property
    def basis_points(self) -> list[int]:
        """Indices of the points whose classes form the chosen basis of CH_0."""
        piv = set(self.relations.pivots)
        return [i for i in range(self.size) if i not in piv]

    @property
    def chow_dim(self) -> int:
        return self.size - self.relations.dim

    def chow_labels(self) -> list[str]:
        return [self.points[i] for i in self.basis_points]

    def projection(self) -> Matrix:
        """Free span -> CH_0 in the basis of ``basis_points``."""
        pos = {p: k for k, p in enumerate(self.basis_points)}
        cols = []
        for i in range(self.size):
            red = self.relations.reduce({i: 1})
            cols.append({pos[j]: c for j, c in red.items()})
        return Matrix.from_columns(cols, self.chow_dim)

    def lift(self) -> Matrix:
        """CH_0 -> free span, sending each basis class to its point."""
        return Matrix(self.size, self.chow_dim, {p: {k: 1} for k, p in enumerate(self.basis_points)})

    def degree(self) -> Matrix:
        return Matrix(1, self.chow_dim, {0: {k: 1 for k in range(self.chow_dim)}})

    def with_relations(self, extra: Sequence[Mapping[int, Fraction]]) -> "FiniteVariety":
        return FiniteVariety(self.points, Subspace(self.size, self.relations.basis() + list(extra)), self.name)


def product_variety(a: FiniteVariety, b: FiniteVariety, cap: int = DEFAULT_PRODUCT_CAP) -> FiniteVariety:
    """Point set a x b with relations rel (x) full + full (x) rel."""
    if a.size * b.size > cap:
        raise ProductTooLarge(f"product would have {a.size * b.size} points (cap {cap})")
    nb = b.size
    pts = tuple(f"({p},{q})" for p, q in product(a.points, b.points))
    rels = []
    for r in a.relations.basis():
        for j in range(nb):
            rels.append({i * nb + j: c for i, c in r.items()})
    for r in b.relations.basis():
        for i in range(a.size):
            rels.append({i * nb + j: c for j, c in r.items()})
    return FiniteVariety(pts, Subspace(len(pts), rels), f"{a.name}x{b.name}")


def free_pushforward(src: FiniteVariety, tgt: FiniteVariety, f: Sequence[int]) -> Matrix:
    return Matrix.from_triples(tgt.size, src.size, [(f[i], i, 1) for i in range(src.size)])


def quotient_map(src: FiniteVariety, tgt: FiniteVariety, free: Matrix, what: str = "map") -> Matrix:
    """Descend a map of free spans to CH_0, checking that relations go to relations."""
    for r in src.relations.basis():
        img = free.apply_sparse(r)
        if not tgt.relations.contains(img):
            raise RelationNotPreserved(f"{what} does not send relations of {src.name or 'source'} to relations")
    return tgt.projection() @ free @ src.lift()


def point_map_pushforward(src: FiniteVariety, tgt: FiniteVariety, f: Sequence[int], what: str = "pushforward") -> Matrix:
    return quotient_map(src, tgt, free_pushforward(src, tgt, f), what)


@dataclass(frozen=True)
class Cover:
    """Gamma with generically finite maps phi: Gamma -> X and psi: Gamma -> Y.

    ``phi[i] = (j, m)`` sends gamma point i to X point j with multiplicity m.
    Gamma's relations are saturated with the pullbacks of those of X and Y.
    """

    gamma: FiniteVariety
    x: FiniteVariety
    y: FiniteVariety
    phi: tuple[tuple[int, int], ...]
    psi: tuple[tuple[int, int], ...]
    deg_phi: int = field(init=False)
    deg_psi: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple((int(a), int(b)) for a, b in self.phi))
        object.__setattr__(self, "psi", tuple((int(a), int(b)) for a, b in self.psi))
        if len(self.phi) != self.gamma.size or len(self.psi) != self.gamma.size:
            raise InvalidCover("phi and psi must be defined on every point of Gamma")
        object.__setattr__(self, "deg_phi", _fibre_degree(self.phi, self.x, "phi"))
        object.__setattr__(self, "deg_psi", _fibre_degree(self.psi, self.y, "psi"))
        extra = [self._free_pull(self.phi, self.x).apply_sparse(r) for r in self.x.relations.basis()]
        extra += [self._free_pull(self.psi, self.y).apply_sparse(r) for r in self.y.relations.basis()]
        if extra:
            object.__setattr__(self, "gamma", self.gamma.with_relations(extra))
        # the pulled-back relations must push forward to relations on both sides
        for side in ("phi", "psi"):
            try:
                pushforward(self, side)
            except RelationNotPreserved as exc:
                raise InvalidCover(f"incompatible relations: {exc}") from None

    @classmethod
    def make(cls, gamma: FiniteVariety, x: FiniteVariety, y: FiniteVariety,
             phi: Mapping[str, tuple[str, int]], psi: Mapping[str, tuple[str, int]]) -> "Cover":
        try:
            ph = tuple((x.index(phi[g][0]), phi[g][1]) for g in gamma.points)
            ps = tuple((y.index(psi[g][0]), psi[g][1]) for g in gamma.points)
        except (KeyError, ValueError) as exc:
            raise InvalidCover(f"bad cover map entry: {exc}") from None
        return cls(gamma, x, y, ph, ps)

    def _free_pull(self, f, tgt: FiniteVariety) -> Matrix:
        return Matrix.from_triples(self.gamma.size, tgt.size, [(i, j, m) for i, (j, m) in enumerate(f)])

    def _side(self, side: str):
        if side == "phi":
            return self.phi, self.x
        if side == "psi":
            return self.psi, self.y
        raise ValueError("side must be 'phi' or 'psi'")

    def fibre(self, side: str, target_point: int) -> list[int]:
        f, _ = self._side(side)
        return [i for i, (j, _) in enumerate(f) if j == target_point]


def _fibre_degree(f, tgt: FiniteVariety, name: str) -> int:
    sums = [0] * tgt.size
    for j, m in f:
        if not 0 <= j < tgt.size:
            raise InvalidCover(f"{name} maps to an unknown point")
        if m <= 0:
            raise InvalidCover(f"{name} multiplicities must be positive")
        sums[j] += m
    if not sums or len(set(sums)) != 1 or sums[0] == 0:
        raise InvalidCover(f"{name} fibres have multiplicity sums {sums}; need a constant positive degree")
    return sums[0]


def pushforward(c: Cover, side: str) -> Matrix:
    f, tgt = c._side(side)
    return point_map_pushforward(c.gamma, tgt, [j for j, _ in f], f"{side}_*")


def pullback(c: Cover, side: str) -> Matrix:
    f, tgt = c._side(side)
    return quotient_map(tgt, c.gamma, c._free_pull(f, tgt), f"{side}^*")


def projection_formula_holds(c: Cover, side: str) -> bool:
    _, tgt = c._side(side)
    deg = c.deg_phi if side == "phi" else c.deg_psi
    return pushforward(c, side) @ pullback(c, side) == Matrix.identity(tgt.chow_dim).scale(deg)


@dataclass
class ConditionReport:
    holds: bool
    witness: str | None = None


def check_condition_i(c: Cover) -> ConditionReport:
    """Points on a common psi-fibre have the same phi-image in CH_0(X)."""
    proj = c.x.projection()
    for yp in range(c.y.size):
        fib = c.fibre("psi", yp)
        classes = [proj.column(c.phi[g][0]) for g in fib]
        for g, cl in zip(fib[1:], classes[1:]):
            if cl != classes[0]:
                w = (f"psi-fibre over {c.y.points[yp]}: {c.gamma.points[fib[0]]} -> {c.x.points[c.phi[fib[0]][0]]}, "
                     f"{c.gamma.points[g]} -> {c.x.points[c.phi[g][0]]}")
                return ConditionReport(False, w)
    return ConditionReport(True)


def check_condition_ii(c: Cover) -> ConditionReport:
    """phi_* psi^* psi_* = deg(psi) phi_* on CH_0(Gamma)."""
    phi_push = pushforward(c, "phi")
    lhs = phi_push @ pullback(c, "psi") @ pushforward(c, "psi")
    rhs = phi_push.scale(c.deg_psi)
    if lhs == rhs:
        return ConditionReport(True)
    bad = min(j for _, j, _ in (lhs - rhs).items())
    return ConditionReport(False, f"differs on the class of {c.gamma.chow_labels()[bad]}")


@dataclass
class GammaMaps:
    gamma: Matrix  # CH_0(X) -> CH_0(Y)
    gamma_prime: Matrix  # CH_0(Y) -> CH_0(X)
    left_inverse: bool
    split_injective: bool
    split_surjective: bool

    @property
    def ok(self) -> bool:
        return self.left_inverse and self.split_injective and self.split_surjective


def gamma_maps(c: Cover) -> GammaMaps:
    """gamma = (1/deg phi) psi_* phi^*, gamma' = (1/deg psi) phi_* psi^*."""
    if not check_condition_i(c).holds:
        raise PreconditionFailed("condition (i) fails; gamma' o gamma need not be the identity")
    g = (pushforward(c, "psi") @ pullback(c, "phi")).scale(Fraction(1, c.deg_phi))
    gp = (pushforward(c, "phi") @ pullback(c, "psi")).scale(Fraction(1, c.deg_psi))
    n = c.x.chow_dim
    return GammaMaps(g, gp, gp @ g == Matrix.identity(n), rank(g) == n, rank(gp) == n)


def diagonal(x: FiniteVariety, cap: int = DEFAULT_PRODUCT_CAP) -> tuple[FiniteVariety, Matrix]:
    xx = product_variety(x, x, cap)
    return xx, point_map_pushforward(x, xx, [i * x.size + i for i in range(x.size)], "diagonal")


def product_cover(c: Cover, cap: int = DEFAULT_PRODUCT_CAP) -> Cover:
    gg = product_variety(c.gamma, c.gamma, cap)
    xx = product_variety(c.x, c.x, cap)
    yy = product_variety(c.y, c.y, cap)
    phi, psi = [], []
    for (a, ma), (b, mb) in product(c.phi, c.phi):
        phi.append((a * c.x.size + b, ma * mb))
    for (a, ma), (b, mb) in product(c.psi, c.psi):
        psi.append((a * c.y.size + b, ma * mb))
    return Cover(gg, xx, yy, tuple(phi), tuple(psi))


def comult_square(c: Cover, cap: int = DEFAULT_PRODUCT_CAP) -> bool:
    """(gamma' (x) gamma') o delta_Y o gamma == delta_X on CH_0(X)."""
    g = gamma_maps(c)
    _, dx = diagonal(c.x, cap)
    _, dy = diagonal(c.y, cap)
    pc = product_cover(c, cap)
    gp2 = (pushforward(pc, "phi") @ pullback(pc, "psi")).scale(Fraction(1, pc.deg_psi))
    return gp2 @ dy @ g.gamma == dx


@dataclass
class ComposeResult:
    cover: Cover | None
    note: str = ""
    condition_i: bool | None = None


def fiber_compose(c1: Cover, c2: Cover) -> ComposeResult:
    """Gamma x_Y Gamma' as a cover of (X, Z); multiplicities multiply."""
    if c1.y.points != c2.x.points:
        raise ValueError("covers do not share the middle variety")
    pts, phi, psi = [], [], []
    for i, (yi, mpsi) in enumerate(c1.psi):
        for j, (yj, mphi2) in enumerate(c2.phi):
            if yi != yj:
                continue
            pts.append(f"({c1.gamma.points[i]},{c2.gamma.points[j]})")
            phi.append((c1.phi[i][0], c1.phi[i][1] * mphi2))
            psi.append((c2.psi[j][0], mpsi * c2.psi[j][1]))
    if not pts:
        return ComposeResult(None, "empty fibre product")
    gamma = FiniteVariety(tuple(pts), Subspace.zero(len(pts)), f"{c1.gamma.name}x_{c1.y.name}{c2.gamma.name}")
    out = Cover(gamma, c1.x, c2.y, tuple(phi), tuple(psi))
    return ComposeResult(out, "", check_condition_i(out).holds)


# ---------------------------------------------------------------------------
# zero-cycle co-algebras and transport


def zero_cycle_coalgebra(x: FiniteVariety, unit_point: str | None = None, cap: int = DEFAULT_PRODUCT_CAP) -> Coalgebra:
    """CH_0(X) with co-multiplication from the diagonal and co-unit the degree."""
    xx, dx = diagonal(x, cap)
    n = x.chow_dim
    # CH_0(X) (x) CH_0(X) -> CH_0(X x X), then invert
    lift = x.lift()
    ident = xx.projection() @ kronecker(lift, lift)
    comult = left_inverse(ident) @ dx
    unit = None
    if unit_point is not None:
        unit = tuple(x.projection().column(x.index(unit_point)).get(k, Fraction(0)) for k in range(n))
    return Coalgebra(GradedSpace(tuple(x.chow_labels())), comult, x.degree(), unit, None, True, f"CH0({x.name})")


@dataclass
class TransportReport:
    grading: Grading
    grading_ok: bool
    filtrations_correspond: bool


def transport_grading(source: Coalgebra, forward: Matrix, backward: Matrix, target: Coalgebra) -> TransportReport:
    """Move the grading of ``source`` to ``target`` along a co-algebra isomorphism."""
    grading = transport(source, forward, backward, target)
    tgt_unit = forward.apply(list(source.unit)) if source.unit is not None else None
    graded_target = target.with_unit(tgt_unit).with_grading(grading)
    ok = check_unital_grading(graded_target).ok
    top = grading.top
    r_src = coradical_filtration(source, None, top)
    r_tgt = coradical_filtration(graded_target, None, top)
    corr = all(
        Subspace(target.dim, [forward.apply_sparse(v) for v in r_src[k].basis()]) == r_tgt[k] for k in range(top + 1)
    )
    return TransportReport(grading, ok, corr)


__all__ = [
    "ComposeResult",
    "Cover",
    "FiniteVariety",
    "GammaMaps",
    "InvalidCover",
    "NotACoalgebraMorphism",
    "PreconditionFailed",
    "ProductTooLarge",
    "RelationNotPreserved",
    "check_condition_i",
    "check_condition_ii",
    "comult_square",
    "fiber_compose",
    "gamma_maps",
    "product_variety",
    "pullback",
    "pushforward",
    "transport_grading",
    "zero_cycle_coalgebra",
]
