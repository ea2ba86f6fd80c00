from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from coradical import coalgebra as co
from coradical.linalg import Matrix, rank
from coradical.symmetric import (
    check_sym_embedding,
    cogeneration_map,
    monomial_exponents,
    monomial_label,
    truncated_sym_coalg,
    truncated_tensor_coalg,
)


def test_monomial_counts():
    for t in range(1, 4):
        for n in range(4):
            assert len(monomial_exponents(t, n)) == comb(n + t, t)


def test_monomial_labels():
    names = ["a", "b"]
    assert monomial_label((0, 0), names) == "1"
    assert monomial_label((2, 0), names) == "a^2"
    assert monomial_label((1, 1), names) == "a*b"


def test_tensor_coalgebra_deconcatenation():
    c = truncated_tensor_coalg(["a", "b"], 2)
    assert c.dim == 1 + 2 + 4
    rep = co.check_axioms(c)
    assert rep.counit_ok and rep.coassoc_ok
    # deconcatenation is not co-commutative once words of length 2 appear
    assert not rep.cocomm_ok
    assert co.check_unital_grading(c).ok
    assert co.check_strict(c).strict


@pytest.mark.parametrize("t,n", [(1, 3), (2, 2), (2, 3), (3, 2)])
def test_sym_embeds_in_tensor(t, n):
    r = check_sym_embedding([f"a{i}" for i in range(t)], n)
    assert r.morphism and r.injective and r.image_is_symmetric


def test_cogeneration_on_sym():
    c = truncated_sym_coalg(["a", "b"], 3)
    r = co.grade_projection(c, 1)
    res = cogeneration_map(c, None, r, 3, ["a", "b"])
    assert res.injective and res.morphism
    assert rank(res.matrix) == c.dim


def test_cogeneration_too_short_is_not_injective():
    c = truncated_sym_coalg(["a"], 3)
    res = cogeneration_map(c, None, co.grade_projection(c, 1), 2)
    assert not res.injective
    assert rank(res.matrix) == 3  # a^3 is lost without the third tensor factor


def test_cogeneration_rejects_bad_shape():
    c = truncated_sym_coalg(["a"], 2)
    with pytest.raises(ValueError):
        cogeneration_map(c, None, Matrix.identity(2), 2)


@given(st.integers(1, 2), st.integers(1, 3))
@settings(max_examples=10, deadline=None)
def test_tower_separates_points(t, n):
    c = truncated_sym_coalg([f"a{i}" for i in range(t)], n)
    res = cogeneration_map(c, None, co.grade_projection(c, 1), n)
    cols = {tuple(res.tower(c.space.basis_vector(l))) for l in c.labels}
    assert len(cols) == c.dim
