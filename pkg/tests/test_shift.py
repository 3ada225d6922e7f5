import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.core import Family, KGraph, PreconditionError, build, is_stable
from hypermatch.extremal import f_bound, make_D, make_S
from hypermatch.matcher import nu, rainbow
from hypermatch.shift import (
    degree_cap,
    degree_cap_check,
    is_saturated,
    PeelResult,
    PeelStep,
    lift_rainbow,
    peel_step,
    peel_full_degree,
    rainbow_free_preserved,
    saturate,
    shift_ij,
    stabilize,
    stabilize_graph,
)

from oracles import all_k_sets, brute_shift
from test_core import kgraphs


def test_shift_examples():
    F = Family.of([build(4, 3, [(2, 3, 4)])])
    assert shift_ij(F, 1, 2)[0].edges == ((1, 3, 4),)
    G = Family.of([build(4, 3, [(1, 3, 4), (2, 3, 4)])])
    assert shift_ij(G, 1, 2) == G
    with pytest.raises(PreconditionError):
        shift_ij(F, 2, 2)


def test_stabilize_examples():
    assert stabilize_graph(build(4, 3, [(2, 3, 4)])).edges == ((1, 2, 3),)
    F = Family.copies(make_S(8, 2, 3), 2)
    assert stabilize(F) is F


@settings(max_examples=100, deadline=None)
@given(kgraphs(max_n=7), st.data())
def test_shift_matches_definition(H, data):
    i = data.draw(st.integers(1, H.n - 1))
    j = data.draw(st.integers(i + 1, H.n))
    out = shift_ij(Family.of([H]), i, j)[0]
    assert set(out.edges) == brute_shift(H.edges, i, j)
    assert len(out) == len(H)


@settings(max_examples=100, deadline=None)
@given(kgraphs(max_n=8))
def test_stabilize_single_graph(H):
    G = stabilize_graph(H)
    assert is_stable(G) and len(G) == len(H)
    assert nu(G) <= nu(H)


def test_stabilize_families_seeded():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(6, 9)
        m = rng.randint(1, 3)
        F = Family.of(KGraph(n, 3, tuple(rng.sample(all_k_sets(n, 3), rng.randint(0, 20))))
                      for _ in range(m))
        G = stabilize(F)
        assert G.sizes() == F.sizes()
        assert all(is_stable(M) for M in G)
        assert stabilize(G) == G
        assert rainbow_free_preserved(F, G)


def test_saturate_examples():
    F = Family.copies(make_S(6, 2, 3), 2)
    assert saturate(F) == F
    assert is_saturated(F)
    one = Family.of([KGraph(5, 3)])
    assert saturate(one) == one
    with pytest.raises(PreconditionError):
        saturate(Family.copies(KGraph.complete(6, 3), 2))


def test_is_saturated_examples():
    assert not is_saturated(Family.copies(KGraph(6, 3), 2))
    assert not is_saturated(Family.copies(KGraph.complete(6, 3), 2))
    assert is_saturated(Family.copies(make_S(7, 2, 3), 2))


def test_saturate_random_k2():
    rng = random.Random(2)
    done = 0
    while done < 30:
        n = rng.randint(4, 8)
        F = Family.of(KGraph(n, 2, tuple(rng.sample(all_k_sets(n, 2), rng.randint(0, 4))))
                      for _ in range(2))
        if rainbow(F) is not None:
            continue
        G = saturate(F)
        assert rainbow(G) is None and is_saturated(G)
        assert all(is_stable(M) for M in G)
        assert all(a >= b for a, b in zip(G.sizes(), F.sizes()))
        assert saturate(G) == G
        assert degree_cap_check(G).ok
        done += 1


def test_degree_cap_values():
    assert degree_cap(8, 2, 2) == 7 - 5
    rep = degree_cap_check(Family.copies(make_S(9, 3, 3), 3))
    assert rep.ok and rep.full == comb(8, 2)


def test_degree_cap_untrusted_on_damaged_family():
    F = Family.copies(make_S(8, 2, 3).without_edges([(1, 7, 8)]), 2)
    rep = degree_cap_check(F)
    assert not rep.saturated and not rep.ok
    assert degree_cap_check(F, trust_saturated=True).trusted


def test_peel_on_copies_of_s():
    F = Family.copies(make_S(6, 2, 3), 2)
    res = peel_full_degree(F)
    assert len(res.log) == 1
    step = res.log[0]
    assert (step.vertex, step.member, step.n) == (1, 0, 6)
    assert res.family.m == 1 and res.family.n == 5


def test_peel_without_full_degree_is_one_saturation():
    F = Family.copies(make_D(7, 2, 3), 2)
    res = peel_full_degree(F)
    assert res.log == [] and res.family == saturate(F)


def test_peel_keeps_size_bound():
    F = Family.copies(make_S(9, 3, 3), 3)
    res = peel_full_degree(F)
    assert len(res.log) == 2 and res.family.m == 1
    assert res.size_bound_kept(F)
    # peeling a rainbow-free family never creates a rainbow matching
    assert all(rainbow(P) is None for P in res.peeled)


def test_peel_rejects_family_with_rainbow():
    G = Family.copies(make_S(9, 2, 3), 2).replace(1, make_S(9, 2, 3).with_edges([(7, 8, 9)]))
    assert rainbow(G) is not None
    with pytest.raises(PreconditionError):
        peel_full_degree(G)


@pytest.mark.parametrize("member,vertex", [(0, 1), (1, 1), (2, 9)])
def test_lift_one_step(member, vertex):
    # a hand-made result: lifting is what the peeling argument runs in reverse
    K = KGraph.complete(9, 3)
    F = Family.of([K, make_S(9, 2, 3).with_edges([(4, 5, 6), (7, 8, 9)]), K])
    peeled = peel_step(F, member, vertex)
    res = PeelResult(peeled, [PeelStep(0, vertex, member, member, 9)], [F], [peeled])
    R = rainbow(peeled)
    assert R is not None
    lifted = lift_rainbow(res, 0, R)
    lifted.validate(F)
    assert any(i == member and vertex in e for i, e in lifted.pairs)


def test_peel_output_bound_when_input_exceeds_f():
    # m copies of S(n,m,k) sit at exactly f, so the bound is vacuous there;
    # the check must report True in that case
    F = Family.copies(make_S(12, 2, 3), 2)
    assert len(F[0]) <= f_bound(12, 2, 3)
    assert peel_full_degree(F).size_bound_kept(F)
