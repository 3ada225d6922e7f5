from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from hypermatch.core import KGraph, PreconditionError
from hypermatch.extremal import (
    check_f_shift_ineq,
    check_f_superadditivity,
    closeness,
    f_bound,
    is_close,
    make_D,
    make_HD,
    make_HS,
    make_S,
    s_distance_lower_bound,
)


def test_f_values():
    assert f_bound(9, 3, 3) == 56
    assert f_bound(100, 3, 3) == comb(100, 3) - comb(98, 3) == 9604
    assert f_bound(5, 2, 3) == 10     # n = km - 1 is allowed
    with pytest.raises(PreconditionError):
        f_bound(4, 2, 3)


def test_constructions_by_definition():
    n, m, k = 9, 3, 3
    S = make_S(n, m, k)
    D = make_D(n, m, k)
    allk = list(combinations(range(1, n + 1), k))
    assert set(S.edges) == {e for e in allk if set(e) & set(range(1, m))}
    assert set(D.edges) == {e for e in allk if max(e) <= k * m - 1}
    assert (len(S), len(D)) == (49, 56)


def test_aux_constructions():
    HS = make_HS(6, 2, 3)
    assert len(HS) == 2 * len(make_S(6, 2, 3)) and HS.r == 0
    assert len(make_HD(6, 2, 3)) == 2 * 10


def test_closeness():
    S = make_S(9, 3, 3)
    assert closeness(S, S) == 0
    assert closeness(S, KGraph(9, 3)) == Fraction(49, 729)
    assert closeness(KGraph(9, 3), S) == 0
    assert is_close(S, S.without_edges([(1, 2, 3)]), Fraction(1, 729))
    assert not is_close(S, S.without_edges([(1, 2, 3)]), Fraction(1, 730))
    with pytest.raises(PreconditionError):
        closeness(S, KGraph(8, 3))


def test_aux_closeness_uses_aux_vertex_count():
    a, b = make_HS(6, 2, 3), make_HD(6, 2, 3)
    missing = len(a.edge_set - b.edge_set)
    assert closeness(a, b) == Fraction(missing, 8 ** 4)


def test_superadditivity_examples():
    assert check_f_superadditivity(9, 3, 3)
    assert check_f_superadditivity(100, 20, 3)
    with pytest.raises(PreconditionError):
        check_f_superadditivity(9, 1, 3)


def test_shift_inequalities_examples():
    assert check_f_shift_ineq(30, 5, 2, "first")
    assert check_f_shift_ineq(30, 5, 2, "second")
    with pytest.raises(PreconditionError):
        check_f_shift_ineq(10, 3, 2, "second")   # f(10, 5, 3) is undefined
    with pytest.raises(ValueError):
        check_f_shift_ineq(30, 5, 2, "third")


def test_s_distance_bound_example():
    assert s_distance_lower_bound(9, 3, 3) == Fraction(3 * 2 * comb(2, 2), 3)
