from fractions import Fraction
from itertools import product

from hypothesis import given, settings, strategies as st

from coradical import lazy
from coradical.abelian import GroupAlgebraElement as E, eq_redcomult_grouplike, group_algebra, pontryagin


def test_units_of_group_algebra():
    lc = group_algebra(2)
    assert lazy.is_unit(lc, E.point((3, -1)))
    assert not lazy.is_unit(lc, E.point((1, 0)) + E.point((0, 1)))


def test_reduced_comult_of_point_by_hand():
    lc = group_algebra(1)
    x, o = E.point((1,)), E.origin(1)
    got = lazy.reduced_comult(lc, o, x)
    # ([1] - [0]) (x) ([1] - [0])
    want = {((1,), (1,)): 1, ((1,), (0,)): -1, ((0,), (1,)): -1, ((0,), (0,)): 1}
    assert got == {k: Fraction(v) for k, v in want.items()}


def test_origin_is_killed():
    lc = group_algebra(2)
    o = E.origin(2)
    for k in range(4):
        assert lazy.iterated_reduced_comult(lc, o, o, k) == {}


def test_expansion_by_binomial_formula():
    # ([x]-[0])^(x)(k+1) has 2^(k+1) terms with signs (-1)^(number of [0] factors)
    x, o = (2, 5), (0, 0)
    for k in range(5):
        r = eq_redcomult_grouplike(2, x, k)
        assert r.equal and r.support == 2 ** (k + 1)
        for word in product((x, o), repeat=k + 1):
            assert r.lhs[word] == (-1) ** word.count(o)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3),
       st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_linearity_on_degree_one_combinations(points, k):
    lc = group_algebra(2)
    o = E.origin(2)
    n = len(points)
    x = E({}, 2)
    for p in points:
        x = x + Fraction(1, n) * E.point(p)
    lhs = lazy.iterated_reduced_comult(lc, o, x, k)
    rhs = {}
    for p in points:
        lazy.add_into(rhs, lazy.tensor_power(E.point(p) - o, k + 1), Fraction(1, n))
    assert lhs == {a: b for a, b in rhs.items() if b}


def test_pontryagin_is_group_law():
    a, b = E.point((1, 2)), E.point((-1, 3))
    assert pontryagin(a, b) == E.point((0, 5))
