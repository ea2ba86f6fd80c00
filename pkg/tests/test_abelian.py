from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, settings, strategies as st

from coradical import coalgebra as co
from coradical.abelian import (
    beauville_component,
    build_abelian,
    check_dm_family,
    coradical_vs_beauville,
    dm_projector,
    dm_projectors,
    ell,
    exp_trunc,
    exterior_power_vanishing,
    kummer_generators,
    kummer_model,
    kunnemann_component,
    log_point,
    log_trunc,
    mult_by_m,
    point_class,
    pontryagin_is_graded,
    star,
)
from coradical.coalgebra import group_closure

POINTS = [(1, 0), (0, 1), (1, 1), (2, -1), (-3, 2)]


@pytest.fixture(scope="module")
def model():
    return build_abelian(2, 2, POINTS)


def expected_point_class(m, x):
    # exp(l_x) truncated: coefficient of l^a is x^a / a!
    return [Fraction(prod(xi ** ai for xi, ai in zip(x, a)), prod(factorial(ai) for ai in a)) for a in m.exponents]


def test_point_class_is_truncated_exponential(model):
    for i, x in enumerate(POINTS):
        assert point_class(model, i) == expected_point_class(model, x)
        assert log_point(model, i) == ell(model, i)


def test_star_of_point_classes_is_point_of_sum(model):
    # [x] * [y] = [x + y] in the truncated model
    a, b = point_class(model, 0), point_class(model, 1)
    assert star(model, a, b) == point_class(model, 2)


def test_exp_log_inverse(model):
    v = ell(model, 3)
    assert log_trunc(model, exp_trunc(model, v)) == v


def test_axioms_and_grading(model):
    c = model.coalgebra
    assert co.check_axioms(c).ok and co.check_unital_grading(c).ok
    assert pontryagin_is_graded(model)


@pytest.mark.parametrize("m", [2, 3, 5, -2])
def test_dm_family(model, m):
    assert check_dm_family(model, m).ok


def test_dm_independent_of_m(model):
    assert dm_projectors(model, 2) == dm_projectors(model, 3) == dm_projectors(model, 5)


def test_dm_rejects_degenerate_m(model):
    for m in (-1, 0, 1):
        with pytest.raises(ValueError):
            dm_projector(model, m, 0)


def test_dm_on_points_is_beauville(model):
    for i, x in enumerate(POINTS):
        v = point_class(model, i)
        for j in range(3):
            comp = dm_projector(model, 3, j).apply(v)
            assert comp == beauville_component(model, i, j)
            # the oracle keeps the degree-j monomials of exp(l_x)
            want = [c if sum(a) == j else 0 for c, a in zip(expected_point_class(model, x), model.exponents)]
            assert comp == want


def test_mult_by_3_eigenvalues(model):
    mb = mult_by_m(model, 3)
    for idx, a in enumerate(model.exponents):
        col = mb.column(idx)
        assert col == {idx: Fraction(3) ** sum(a)}


def test_kunnemann_components(model):
    for i in range(len(POINTS)):
        for k in range(5):
            got = kunnemann_component(model, i, k)
            if k < 2:
                assert not any(got)
            else:
                assert got == beauville_component(model, i, 4 - k)


def test_vanishing_and_sharpness(model):
    for i in range(len(POINTS)):
        r = exterior_power_vanishing(model, i)
        assert r.vanishes and r.sharp


def test_origin_has_no_sharpness_claim():
    m = build_abelian(2, 1, [(0,)])
    r = exterior_power_vanishing(m, 0)
    assert r.vanishes and r.sharp is None


def test_coradical_is_beauville(model):
    r = coradical_vs_beauville(model)
    assert r.ok and list(r.dims.values()) == [1, 3, 6]


def test_kummer_invariants_not_strict():
    big, inv, action = kummer_model(1, 1, 2)
    assert big.dim == 6 and inv.dim == 2
    assert len(group_closure(action)) == 6
    assert co.check_axioms(inv).ok and co.check_unital_grading(inv).ok
    assert inv.space.grades == (0, 2)
    assert not co.check_strict(inv).strict


@pytest.mark.parametrize("n", [2, 3])
def test_kummer_generators_generate_symmetric_group(n):
    assert len(group_closure(kummer_generators(n))) == factorial(n + 1)


@given(st.integers(1, 3), st.integers(1, 2),
       st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=3))
@settings(max_examples=15, deadline=None)
def test_vanishing_property(g, s, raw):
    pts = [tuple(p[:s]) for p in raw]
    m = build_abelian(g, s, pts, cap=None)
    for i, x in enumerate(pts):
        r = exterior_power_vanishing(m, i, cap=None)
        assert r.vanishes
        assert r.sharp is (None if not any(x) else True)
