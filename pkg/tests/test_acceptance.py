"""Acceptance criteria, one check per criterion, all at exact tolerance.

Run with ``pytest tests/test_acceptance.py -v`` (a PASS/FAIL line per
criterion is printed in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
from itertools import permutations

import pytest

from coradical import abelian, coalgebra as co, hk, incidence
from coradical.modelfile import build_incidence, build_raw_coalgebra, bundled_models, bundled_path, load
from coradical.symmetric import cogeneration_map

ABELIAN_POINTS = [(1, 0), (0, 1), (1, 1), (2, -1), (-3, 2), (4, 3)]


def axioms_and_grading(c) -> bool:
    return co.check_axioms(c).ok and co.check_unital_grading(c).ok


def criterion_1():
    """Axiom suites on k3, hilb, fano and abelian-trunc builders."""
    models = [hk.build_k3(t).coalgebra for t in (1, 2, 3)]
    models += [hk.build_hilb(n, t, cap=None).coalgebra for n in (1, 2, 3) for t in (1, 2, 3)]
    models += [hk.build_fano(3, [(0, 1, 2)]).coalgebra, hk.build_fano(6, [(0, 1, 2), (2, 3, 4), (0, 4, 5)]).coalgebra]
    models += [abelian.build_abelian(g, s, cap=None).coalgebra for g in (1, 2, 3) for s in (1, 2, 3)]
    bad = [c.name for c in models if not axioms_and_grading(c)]
    return not bad, f"{len(models)} models, failures: {bad or 'none'}"


def criterion_2():
    """Co-radical filtration equals grading filtration; the counterexample separates them."""
    ok = True
    for c in (hk.build_hilb(3, 2).coalgebra, abelian.build_abelian(2, 2).coalgebra):
        r, g = co.coradical_filtration(c), co.grading_filtration(c)
        ok &= all(r[k] == g[k] for k in range(c.grading.top + 1))
    ns = build_raw_coalgebra(load(bundled_path("nonstrict.model")))
    r1, g1 = co.coradical_filtration(ns)[1], co.grading_filtration(ns)[1]
    cmp = co.coradical_equals_grading(ns)
    proper = g1.is_subspace_of(r1) and g1.dim < r1.dim
    witness = cmp.witness
    ok &= proper and witness is not None and witness[0] == 1 and not g1.contains(
        [1 if lab == "z" else 0 for lab in ns.labels]
    )
    return ok, f"counterexample G_1 dim {g1.dim} < R_1 dim {r1.dim}, witness {witness}"


def criterion_3():
    """Point-class identity and the two mu^k identities on hilb(3,2)."""
    m = hk.build_hilb(3, 2)
    c = m.coalgebra
    ok = True
    for k in (1, 2, 3):
        red = co.iterated_reduced_comult(c, None, k - 1)
        for spec in hk.point_specs(m, k):
            idx = [c.labels.index(f"a{s[1:]}") for s in spec]
            want = {}
            for perm in permutations(idx):
                flat = 0
                for i in perm:
                    flat = flat * c.dim + i
                want[flat] = want.get(flat, 0) + 1
            ok &= red.apply_sparse(dict(enumerate(hk.hilb_point_class(m, spec)))) == want
        ok &= hk.mu_k(m, k).ok
    return ok, "k = 1, 2, 3"


def random_fano_configs(count: int, seed: int = 20240611):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        lines = rng.randint(3, 9)
        tris: list[tuple[int, int, int]] = []
        for _ in range(rng.randint(1, 4)):
            t = tuple(rng.sample(range(lines), 3))
            if all(len(set(t) & set(s)) < 2 for s in tris):
                tris.append(t)
        out.append((lines, tris))
    return out


def criterion_4():
    """Fano: factor exactly 2 on every triangle; eigenprojectors."""
    configs = random_fano_configs(25)
    ok, triangles = True, 0
    for lines, tris in configs:
        m = hk.build_fano(lines, tris)
        ok &= hk.fano_eigenprojectors(m).ok
        for i in range(len(tris)):
            ok &= hk.fano_mu_delta_check(m, i).factor == 2
            triangles += 1
    return ok, f"{len(configs)} configurations, {triangles} triangles"


def criterion_5():
    """Abelian g=2, r=2: projector families, [3]_*, vanishing, sharpness."""
    m = abelian.build_abelian(2, 2, ABELIAN_POINTS)
    ok = all(abelian.check_dm_family(m, mm).ok for mm in (2, 3, 5))
    ok &= abelian.dm_projectors(m, 2) == abelian.dm_projectors(m, 3) == abelian.dm_projectors(m, 5)
    for i in range(len(ABELIAN_POINTS)):
        x = abelian.point_class(m, i)
        for mm in (2, 3, 5):
            for j in range(3):
                ok &= abelian.dm_projector(m, mm, j).apply(x) == abelian.beauville_component(m, i, j)
        v = abelian.exterior_power_vanishing(m, i)
        ok &= v.vanishes and v.sharp is True
    mb3 = abelian.mult_by_m(m, 3)
    for j, p in enumerate(m.coalgebra.grading.projectors):
        ok &= mb3 @ p == p.scale(3 ** j)
    return ok, f"{len(ABELIAN_POINTS)} points, m in {{2, 3, 5}}"


def criterion_6():
    """Group algebra of Z^2: delta-bar^k[x] = ([x]-[0])^(k+1) with 2^(k+1) terms."""
    ok = True
    for x in [(1, 0), (0, 1), (2, -3), (-1, -1)]:
        for k in range(5):
            r = abelian.eq_redcomult_grouplike(2, x, k)
            ok &= r.equal and r.support == 2 ** (k + 1) and len(r.lhs) == 2 ** (k + 1)
    return ok, "4 points, k = 0..4"


def criterion_7():
    """delta-bar^n is the zero matrix on hilb(n<=3) and abelian-trunc(g<=3)."""
    ok = True
    for n in (1, 2, 3):
        for t in (1, 2, 3):
            c = hk.build_hilb(n, t, cap=None).coalgebra
            ok &= co.iterated_reduced_comult(c, None, n, cap=None).is_zero()
    for g in (1, 2, 3):
        for s in (1, 2, 3):
            c = abelian.build_abelian(g, s, cap=None).coalgebra
            ok &= co.iterated_reduced_comult(c, None, g, cap=None).is_zero()
    return ok, "18 models, tensor cap lifted"


def criterion_8():
    """Incidence: passing and failing covers, composition."""
    _, covers, composes = build_incidence(load(bundled_path("incidence_pass.model")))
    ok = True
    for c in covers.values():
        r1, r2 = incidence.check_condition_i(c), incidence.check_condition_ii(c)
        ok &= r1.holds and r2.holds
        ok &= incidence.gamma_maps(c).ok and incidence.comult_square(c)
    for a, b in composes:
        res = incidence.fiber_compose(covers[a], covers[b])
        ok &= res.cover is not None and res.condition_i is True
    _, bad, _ = build_incidence(load(bundled_path("incidence_fail.model")))
    r1, r2 = incidence.check_condition_i(bad["split"]), incidence.check_condition_ii(bad["split"])
    ok &= not r1.holds and not r2.holds and r1.witness is not None
    return ok, f"{len(covers)} passing covers, {len(composes)} composition; failing witness: {r1.witness}"


def criterion_9():
    """Co-generation with r = projection to grade 1 is bijective; towers separate points."""
    ok = True
    cases = [hk.build_hilb(n, t).coalgebra for n, t in ((1, 3), (2, 2), (3, 2))]
    cases += [abelian.build_abelian(g, s).coalgebra for g, s in ((1, 2), (2, 2), (3, 1))]
    for c in cases:
        res = cogeneration_map(c, None, co.grade_projection(c, 1), c.grading.top)
        ok &= res.injective and res.morphism and res.image.dim == c.dim
    m = hk.build_hilb(3, 2)
    towers = {tuple(cogeneration_map(m.coalgebra, None, co.grade_projection(m.coalgebra, 1), 3).tower(
        hk.hilb_point_class(m, spec))) for k in range(4) for spec in hk.point_specs(m, k)}
    n_points = sum(len(hk.point_specs(m, k)) for k in range(4))
    ab = abelian.build_abelian(2, 2, ABELIAN_POINTS)
    res = cogeneration_map(ab.coalgebra, None, co.grade_projection(ab.coalgebra, 1), 2)
    ab_towers = {tuple(res.tower(abelian.point_class(ab, i))) for i in range(len(ABELIAN_POINTS))}
    ok &= len(towers) == n_points and len(ab_towers) == len(ABELIAN_POINTS)
    return ok, f"{len(cases)} models; {n_points} hilb points, {len(ABELIAN_POINTS)} abelian points separated"


def _suite_bytes(name: str, fmt: str, hash_seed: str) -> bytes:
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    proc = subprocess.run(
        [sys.executable, "-m", "coradical.cli", "suite", str(bundled_path(name)), f"--report={fmt}"],
        capture_output=True, env=env, check=False,
    )
    return f"{proc.returncode}\n".encode() + proc.stdout + proc.stderr


def criterion_10():
    """suite on the bundled corpus produces byte-identical reports across two runs."""
    ok = True
    names = bundled_models()
    for name in names:
        for fmt in ("text", "structured"):
            ok &= _suite_bytes(name, fmt, "1") == _suite_bytes(name, fmt, "2")
    return ok, f"{len(names)} bundled files, text and structured, separate processes"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]

RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number):
    ok, detail = CRITERIA[number - 1]()
    RESULTS[number] = (ok, detail)
    assert ok, detail


def summary_lines() -> list[str]:
    return [
        f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {CRITERIA[n - 1].__doc__.strip()}  [{detail}]"
        for n, (ok, detail) in sorted(RESULTS.items())
    ]


if __name__ == "__main__":
    for i, fn in enumerate(CRITERIA, start=1):
        RESULTS[i] = fn()
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
