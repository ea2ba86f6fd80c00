"""Verification suites run by the command-line front end."""

from __future__ import annotations

import time
from contextlib import contextmanager
from fractions import Fraction

from . import abelian, coalgebra as co, hk, incidence, lazy
from .coalgebra import DEFAULT_TENSOR_CAP, Coalgebra
from .linalg import kernel_basis, rank
from .modelfile import ModelDefinition, ModelError, build_incidence, build_raw_coalgebra, parse_points, parse_triangles
from .report import Report
from .symmetric import cogeneration_map

COALGEBRA_KINDS = ("k3", "hilb", "fano", "abelian-trunc", "raw-coalgebra")


@contextmanager
def timed(report: Report):
    start = len(report.checks)
    t0 = time.perf_counter()
    yield
    dt = (time.perf_counter() - t0) * 1000
    new = report.checks[start:]
    for c in new:
        c.time_ms = dt / len(new)


class Context:
    """A loaded model: the definition plus whatever objects were built from it."""

    def __init__(self, d: ModelDefinition, cap: int | None = DEFAULT_TENSOR_CAP):
        self.d = d
        self.cap = cap
        self.coalgebra: Coalgebra | None = None
        self.hilb = self.fano = self.abelian = None
        self.points: list[tuple[int, ...]] = []
        self.covers = {}
        self.composes = []
        k = d.kind
        if k == "k3":
            self.hilb = hk.build_k3(d.get_int("t"), cap)
            self.coalgebra = self.hilb.coalgebra
        elif k == "hilb":
            self.hilb = hk.build_hilb(d.get_int("n"), d.get_int("t"), cap)
            self.coalgebra = self.hilb.coalgebra
        elif k == "fano":
            lines = d.get_int("lines")
            self.fano = hk.build_fano(lines, parse_triangles(d, lines))
            self.coalgebra = self.fano.coalgebra
        elif k == "abelian-trunc":
            g, s = d.get_int("g"), d.get_int("s")
            self.abelian = abelian.build_abelian(g, s, parse_points(d, s), cap)
            self.coalgebra = self.abelian.coalgebra
        elif k == "abelian-lazy":
            self.rank = d.get_int("r")
            self.kmax = d.get_int("kmax", 3)
            self.points = parse_points(d, self.rank)
            if not self.points:
                raise ModelError("abelian-lazy needs a [points] section")
        elif k == "incidence":
            _, self.covers, self.composes = build_incidence(d)
        elif k == "raw-coalgebra":
            self.coalgebra = build_raw_coalgebra(d, cap)

    @property
    def label(self) -> str:
        if self.d.name:
            return self.d.name
        if self.coalgebra is not None and self.coalgebra.name:
            return self.coalgebra.name
        return self.d.source or self.d.kind


def _fmt_dims(dims) -> str:
    return ",".join(str(x) for x in dims)


# ---------------------------------------------------------------------------
# generic co-algebra suites


def run_validate(ctx: Context, report: Report) -> None:
    c = ctx.coalgebra
    with timed(report):
        ax = co.check_axioms(c)
        report.add("axioms.counit", ax.counit_ok, witness=ax.witnesses.get("counit"))
        report.add("axioms.coassociativity", ax.coassoc_ok, witness=ax.witnesses.get("coassoc"))
        report.add("axioms.cocommutativity", ax.cocomm_ok, witness=ax.witnesses.get("cocomm"))
    with timed(report):
        if c.unit is not None:
            report.add("unit", co.is_unit(c, c.unit), f"u = {c.fmt(c.unit)}")
        if c.grading is not None:
            g = co.check_unital_grading(c)
            blocks = " ".join(f"M_({k})={c.grading.piece(k).dim}" for k in range(c.grading.top + 1))
            w = "; ".join(f"({cond}) {text}" for cond, text in g.violations) or None
            report.add("grading.unital", g.ok, blocks, witness=w)


def _unital(ctx: Context) -> bool:
    c = ctx.coalgebra
    return c.unit is not None and c.grading is not None and co.check_unital_grading(c).ok


def run_coradical(ctx: Context, report: Report, kmax: int | None = None) -> None:
    c = ctx.coalgebra
    if c.unit is None:
        report.add("coradical.unit", False, witness="co-algebra has no unit")
        return
    top = c.grading.top if c.grading is not None else None
    if kmax is None:
        kmax = top if top is not None else 3
    with timed(report):
        r = co.coradical_filtration(c, None, kmax, ctx.cap)
        report.add(
            "coradical.filtration",
            r.is_ascending() and r[0].dim == 1,
            f"dim R_k (k=0..{kmax}) = {_fmt_dims(r.dims())}",
            f"exhaustive at k = {r.exhaustive_at}" if r.exhaustive_at is not None else "not exhaustive within kmax",
        )
    with timed(report):
        ok = all(co.reduced_identity_holds(c, None, k, ctx.cap) for k in range(min(kmax, 3) + 1))
        report.add("reduced.pbar_identity", ok, "delta-bar^k = pbar^(k+1) o delta^k o pbar")
        ok = all(co.left_and_right_expansions_agree(c, None, k, ctx.cap) for k in range(1, min(kmax, 3) + 1))
        report.add("reduced.expansion_independence", ok)
    if top is None or not _unital(ctx):
        return
    with timed(report):
        red = co.reduced_comult(c)
        m1 = c.grading.basis_matrix(1)
        report.add("reduced.zero_on_grade1", (red @ m1).is_zero())
        g = co.grading_filtration(c)
        ok = all((co.iterated_reduced_comult(c, None, k, ctx.cap) @ g[k].matrix.transpose()).is_zero() for k in range(top + 1))
        report.add("reduced.kills_G_k", ok, "delta-bar^k G_k = 0 for all k")
        report.add("reduced.top_vanishing", co.iterated_reduced_comult(c, None, top, ctx.cap).is_zero(), f"delta-bar^{top} = 0")


def run_strict(ctx: Context, report: Report) -> None:
    c = ctx.coalgebra
    if not _unital(ctx):
        report.add("strict.precondition", False, witness="no verified unital grading")
        return
    with timed(report):
        s = co.check_strict(c, None, ctx.cap)
        per = " ".join(f"k={k}:rank {r}/{d}" for k, (r, d) in sorted(s.per_grade.items()))
        w = f"grade {s.witness[0]} kernel vector {s.witness[1]}" if s.witness else None
        report.add("strict", s.strict, per or "no grades >= 2", witness=w)
        report.add("strict.consistency", s.consistent, "per-grade and single-condition verdicts agree")
    with timed(report):
        cmp = co.coradical_equals_grading(c, None, ctx.cap)
        dims = " ".join(f"k={k}:G{g}/R{r}" for k, (g, r) in sorted(cmp.dims.items()))
        report.add("filtration.G_in_R", all(cmp.contained.values()), dims)
        w = f"k={cmp.witness[0]} R-vector outside G: {cmp.witness[1]}" if cmp.witness else None
        report.add("filtration.G_eq_R", all(cmp.equal.values()), witness=w)
        report.add("filtration.equality_iff_strict", cmp.ok)
    with timed(report):
        prim = co.primitives(c)
        report.add("primitives.equal_grade1", prim == c.grading.piece(1), f"dim P = {prim.dim}, dim M_(1) = {c.grading.piece(1).dim}")


def run_cogen(ctx: Context, report: Report, n: int | None = None) -> None:
    c = ctx.coalgebra
    if not _unital(ctx):
        report.add("cogeneration.precondition", False, witness="no verified unital grading")
        return
    top = c.grading.top
    n = n or max(top, 1)
    with timed(report):
        r = co.grade_projection(c, 1)
        names = [c.labels[min(v)] for v in c.grading.piece(1).basis()]
        res = cogeneration_map(c, None, r, n, names, ctx.cap)
        strict = co.check_strict(c, None, ctx.cap).strict
        w = None
        if not res.injective:
            w = c.fmt(kernel_basis(res.matrix).basis()[0])
        report.add("cogeneration.injective", res.injective, f"n = {n}, rank {rank(res.matrix)}/{c.dim}", witness=w)
        report.add("cogeneration.morphism", res.morphism)
        if n >= top:
            report.add("cogeneration.matches_strict", res.injective == strict)


# ---------------------------------------------------------------------------
# model-specific suites


def run_hilb(ctx: Context, report: Report) -> None:
    m = ctx.hilb
    with timed(report):
        agree = hk.hilb_filtrations_agree(m, ctx.cap)
        v = hk.voisin_filtration(m)
        report.add("hilb.voisin_eq_grading", all(a for a, _ in agree.values()), f"dim S_k = {_fmt_dims(v.dims())}")
        report.add("hilb.grading_eq_coradical", all(b for _, b in agree.values()))
    with timed(report):
        for k in range(1, m.n + 1):
            mu = hk.mu_k(m, k, ctx.cap)
            report.add(f"hilb.mu_{k}", mu.ok, f"mu o delta-bar^{k - 1} = {k}! id: {mu.mu_after_delta}; converse: {mu.delta_after_mu}")
    with timed(report):
        ok = True
        bad = None
        for k in range(1, m.n + 1):
            red = co.iterated_reduced_comult(m.coalgebra, None, k - 1, ctx.cap)
            for spec in hk.point_specs(m, k):
                got = red.apply_sparse(dict(enumerate(hk.hilb_point_class(m, spec))))
                if got != hk.symmetrized_tensor(m, spec):
                    ok = False
                    bad = bad or " ".join(spec)
        report.add("hilb.point_class_tensor", ok, "delta-bar^{k-1}[x1..xk,o..o] = sum_sigma a_sigma(1) (x) ... (x) a_sigma(k)", witness=bad)


def run_fano(ctx: Context, report: Report) -> None:
    m = ctx.fano
    with timed(report):
        e = hk.fano_eigenprojectors(m)
        report.add("fano.eigenprojectors", e.idempotent and e.orthogonal and e.complete,
                   "idempotent, orthogonal, sum to identity")
        report.add("fano.eigenprojector_images", e.images_match_grades)
        report.add("fano.phi_compatible", e.phi_compatible and e.eigenspace_bookkeeping,
                   "delta o phi = (phi (x) phi) o delta; eigenvalues 1, -2, 4 -> grades 0, 2, 4")
    with timed(report):
        for i, tri in enumerate(m.triangles):
            try:
                r = hk.fano_mu_delta_check(m, i)
            except hk.MissingTableEntry as exc:
                report.add(f"fano.mu_delta[{m.triangle_label(i)}]", False, witness=str(exc))
                continue
            tri_s = ",".join(f"l{x + 1}" for x in tri)
            report.add(f"fano.mu_delta[{m.triangle_label(i)}]", r.ok, f"triangle ({tri_s}) factor {r.factor}",
                       f"result {dict(r.steps)['result']}")


def run_abelian_trunc(ctx: Context, report: Report) -> None:
    m = ctx.abelian
    with timed(report):
        fams = {mm: abelian.check_dm_family(m, mm) for mm in (2, 3, 5)}
        report.add("abelian.dm_projectors", all(f.ok for f in fams.values()), "m in {2,3,5}: idempotent, orthogonal, complete, images = grades")
        p = {mm: abelian.dm_projectors(m, mm) for mm in (2, 3, 5)}
        report.add("abelian.dm_independent_of_m", p[2] == p[3] == p[5])
        mb3 = abelian.mult_by_m(m, 3)
        eig = all(
            (mb3 @ m.coalgebra.grading.projectors[j]) == m.coalgebra.grading.projectors[j].scale(3 ** j)
            for j in range(m.g + 1)
        )
        report.add("abelian.mult_by_3_eigenvalues", eig, "[3]_* = 3^j on grade j (contravariant index 2g-j)")
    with timed(report):
        comp_ok, log_ok, kun_ok = True, True, True
        for i in range(len(m.points)):
            x = abelian.point_class(m, i)
            for mm in (2, 3, 5):
                for j in range(m.g + 1):
                    comp_ok &= abelian.dm_projector(m, mm, j).apply(x) == abelian.beauville_component(m, i, j)
            log_ok &= abelian.log_point(m, i) == abelian.ell(m, i)
            for k in range(2 * m.g + 1):
                want = abelian.beauville_component(m, i, 2 * m.g - k) if k >= m.g else [Fraction(0)] * m.dim
                kun_ok &= abelian.kunnemann_component(m, i, k) == want
        report.add("abelian.dm_matches_beauville", comp_ok, f"{len(m.points)} points")
        report.add("abelian.log_exp", log_ok)
        report.add("abelian.kunnemann_components", kun_ok, "pi^k[x] = (log[x])^{*(2g-k)}/(2g-k)!, zero for k < g")
    with timed(report):
        van_ok, sharp_ok = True, True
        w = None
        for i in range(len(m.points)):
            v = abelian.exterior_power_vanishing(m, i, ctx.cap)
            van_ok &= v.vanishes
            if v.sharp is False:
                sharp_ok = False
                w = w or str(v.point)
        report.add("abelian.exterior_power_vanishing", van_ok, f"delta-bar^{m.g}[x] = 0")
        report.add("abelian.sharpness", sharp_ok, f"delta-bar^{m.g - 1}[x] != 0 when l_x != 0", witness=w)
    with timed(report):
        b = abelian.coradical_vs_beauville(m, ctx.cap)
        report.add("abelian.coradical_eq_beauville", b.ok, f"dim R_k = {_fmt_dims(b.dims.values())}")
        report.add("abelian.pontryagin_graded", abelian.pontryagin_is_graded(m))


def run_abelian_lazy(ctx: Context, report: Report) -> None:
    r = ctx.rank
    lc = abelian.group_algebra(r)
    with timed(report):
        ok = all(lazy.is_unit(lc, abelian.GroupAlgebraElement.point(p)) for p in ctx.points)
        report.add("lazy.points_are_units", ok)
    with timed(report):
        for p in ctx.points:
            res = [abelian.eq_redcomult_grouplike(r, p, k) for k in range(ctx.kmax + 1)]
            sizes = ",".join(str(x.support) for x in res)
            report.add(f"lazy.redcomult_grouplike[{','.join(map(str, p))}]", all(x.equal for x in res),
                       f"k=0..{ctx.kmax}, support sizes {sizes}")
    with timed(report):
        # a combination of degree 1: delta-bar^k is linear and sends it to sum a_i ([x_i]-[0])^(k+1)
        n = len(ctx.points)
        coeffs = [Fraction(1, n)] * n if n else []
        u = abelian.GroupAlgebraElement.origin(r)
        x = abelian.GroupAlgebraElement({}, r)
        for a, p in zip(coeffs, ctx.points):
            x = x + a * abelian.GroupAlgebraElement.point(p)
        ok = True
        for k in range(1, ctx.kmax + 1):
            lhs = lazy.iterated_reduced_comult(lc, u, x, k)
            rhs: dict = {}
            for a, p in zip(coeffs, ctx.points):
                lazy.add_into(rhs, lazy.tensor_power(abelian.GroupAlgebraElement.point(p) - u, k + 1), a)
            ok &= lhs == rhs
        report.add("lazy.multiple_linearity", ok, "delta-bar^k(sum a_i [x_i]) = sum a_i ([x_i]-[0])^(k+1)")


def run_incidence(ctx: Context, report: Report) -> None:
    for name, c in sorted(ctx.covers.items()):
        with timed(report):
            try:
                c1 = incidence.check_condition_i(c)
                c2 = incidence.check_condition_ii(c)
            except incidence.RelationNotPreserved as exc:
                report.add(f"cover[{name}].well_defined", False, witness=str(exc))
                continue
            report.add(f"cover[{name}].condition_i", c1.holds, f"deg phi = {c.deg_phi}, deg psi = {c.deg_psi}", witness=c1.witness)
            report.add(f"cover[{name}].condition_ii", c2.holds, witness=c2.witness)
            report.add(f"cover[{name}].conditions_equivalent", c1.holds == c2.holds)
            pf = incidence.projection_formula_holds(c, "phi") and incidence.projection_formula_holds(c, "psi")
            report.add(f"cover[{name}].projection_formula", pf)
            if c1.holds:
                g = incidence.gamma_maps(c)
                report.add(f"cover[{name}].gamma_left_inverse", g.ok, "gamma' o gamma = id; gamma split injective; gamma' split surjective")
                try:
                    sq = incidence.comult_square(c)
                    report.add(f"cover[{name}].comult_square", sq)
                except incidence.RelationNotPreserved as exc:
                    report.add(f"cover[{name}].comult_square", False, witness=str(exc))
    for a, b in ctx.composes:
        with timed(report):
            res = incidence.fiber_compose(ctx.covers[a], ctx.covers[b])
            if res.cover is None:
                report.add(f"compose[{a},{b}]", True, res.note)
                continue
            comp = res.cover
            degs = (comp.deg_phi == ctx.covers[a].deg_phi * ctx.covers[b].deg_phi
                    and comp.deg_psi == ctx.covers[a].deg_psi * ctx.covers[b].deg_psi)
            report.add(f"compose[{a},{b}].degrees", degs, f"deg phi = {comp.deg_phi}, deg psi = {comp.deg_psi}")
            inputs_pass = incidence.check_condition_i(ctx.covers[a]).holds and incidence.check_condition_i(ctx.covers[b]).holds
            if inputs_pass:
                report.add(f"compose[{a},{b}].condition_i", res.condition_i, "composite of passing covers passes")


# ---------------------------------------------------------------------------


def require(ctx: Context, kinds: tuple[str, ...], command: str) -> None:
    if ctx.d.kind not in kinds:
        raise ModelError(f"command {command!r} does not apply to kind {ctx.d.kind!r}")


def suite(ctx: Context, report: Report, kmax: int | None = None) -> None:
    k = ctx.d.kind
    if k in COALGEBRA_KINDS:
        run_validate(ctx, report)
        run_coradical(ctx, report, kmax)
        if ctx.coalgebra.grading is not None:
            run_strict(ctx, report)
            run_cogen(ctx, report)
    if k in ("k3", "hilb"):
        run_hilb(ctx, report)
    elif k == "fano":
        run_fano(ctx, report)
    elif k == "abelian-trunc":
        run_abelian_trunc(ctx, report)
    elif k == "abelian-lazy":
        run_abelian_lazy(ctx, report)
    elif k == "incidence":
        run_incidence(ctx, report)
