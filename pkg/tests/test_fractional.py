import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.core import Family, KGraph, PreconditionError, build
from hypermatch.extremal import make_S
from hypermatch.fractional import (
    FracMatching,
    distribute_to_u,
    extend_complete3,
    has_perfect_fractional,
    max_fractional,
    patch_weights,
    perfect_fractional_hstar,
    project_aux,
    solve_matching_lp,
)
from hypermatch.matcher import nu, reduce_Hstar

from oracles import brute_fractional_2graph
from test_core import kgraphs

C5 = build(5, 2, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
FANO = build(7, 3, [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)])


def test_known_values():
    lp = solve_matching_lp(C5)
    assert lp.value == Fraction(5, 2) and sum(lp.cover.values()) == Fraction(5, 2)
    assert max_fractional(FANO)[0] == Fraction(7, 3)
    assert max_fractional(KGraph(4, 2))[0] == 0
    ok, w = has_perfect_fractional(KGraph.complete(6, 3))
    assert ok and w.is_perfect(range(1, 7))
    assert has_perfect_fractional(C5)[0]          # all weights 1/2
    assert not has_perfect_fractional(build(4, 2, [(1, 2), (1, 3), (1, 4)]))[0]


@settings(max_examples=60, deadline=None)
@given(kgraphs(max_n=6, ks=(2,)).filter(lambda H: len(H) <= 9))
def test_lp_matches_half_integral_oracle(H):
    assert max_fractional(H)[0] == brute_fractional_2graph(H.n, H.edges)


@settings(max_examples=60, deadline=None)
@given(kgraphs(max_n=7, ks=(3,)))
def test_lp_sandwich(H):
    value, w = max_fractional(H)
    assert w.is_valid()
    assert nu(H) <= value <= Fraction(H.n, 3)


def test_extend_examples():
    w = extend_complete3(6, {})
    assert w.is_perfect(range(1, 7)) and w.total == 2
    loads = {v: Fraction(1, 2) for v in range(1, 6)}
    w = extend_complete3(9, loads)
    assert w.is_perfect(range(1, 10))
    assert all(x >= 0 for x in w.weights.values())


def test_patch_formula_at_full_loads():
    p = patch_weights(1, 1)
    assert p["aaa"] == Fraction(1, 3)
    assert p["a1a2b1"] == p["a1a2b2"] == p["a3a4b2"] == 0


@pytest.mark.parametrize("nv,loads,msg", [
    (7, {}, "divisible"),
    (9, {1: Fraction(1)}, "load"),
    (6, {1: Fraction(1, 2), 2: Fraction(1, 2), 3: Fraction(1, 2)}, "zero-load"),
])
def test_extend_rejects(nv, loads, msg):
    with pytest.raises(PreconditionError, match=msg):
        extend_complete3(nv, loads)


def _random_matching(rng, nv, keep_zero):
    """A random valid fractional matching on triples avoiding the top vertices."""
    pool = list(range(1, nv - keep_zero + 1))
    load = {v: Fraction(0) for v in range(1, nv + 1)}
    weights = {}
    for _ in range(rng.randint(0, 6)):
        if len(pool) < 3:
            break
        e = tuple(sorted(rng.sample(pool, 3)))
        room = min(1 - load[v] for v in e) - Fraction(1, 97)
        if room <= 0:
            continue
        x = room * Fraction(rng.randint(1, 9), 10)
        weights[e] = weights.get(e, 0) + x
        for v in e:
            load[v] += x
    return FracMatching(weights)


def test_extend_on_random_matchings():
    rng = random.Random(3)
    for nv in (6, 9, 12):
        for _ in range(60):
            start = _random_matching(rng, nv, 4)
            w = extend_complete3(nv, start)
            assert w.is_perfect(range(1, nv + 1))
            assert all(w.weights[e] >= x for e, x in start.weights.items())


def test_project_examples():
    F = Family.copies(KGraph.complete(6, 3), 2)
    H = reduce_Hstar(F)
    assert project_aux(H, FracMatching({})).loads() == {}
    proj = project_aux(H, FracMatching({(1, 2, 3, H.v(1)): Fraction(1)}))
    assert proj.loads() == {1: 1, 2: 1, 3: 1}
    with pytest.raises(PreconditionError):
        project_aux(H, FracMatching({(1, 2, 3, 4): Fraction(1)}))


def test_project_handshake():
    rng = random.Random(8)
    F = Family.copies(KGraph.complete(9, 3), 2)
    H = reduce_Hstar(F)
    edges = [e for e in H.edges if e[-1] in H.v_labels]
    for _ in range(50):
        w = FracMatching({e: Fraction(1, rng.randint(20, 40)) for e in rng.sample(edges, 10)})
        proj = project_aux(H, w)
        assert sum(proj.loads().values()) == 3 * w.total


def test_distribute_examples():
    assert distribute_to_u({(1, 2, 3): 1, (4, 5, 6): 1}, 2) == [{(1, 2, 3): 1}, {(4, 5, 6): 1}]
    half = Fraction(1, 2)
    res = {(1, 2, 3): half, (1, 2, 4): half, (3, 4, 5): half, (4, 5, 6): half}
    parcels = distribute_to_u(res, 2)
    assert [sum(p.values()) for p in parcels] == [1, 1]
    assert distribute_to_u({}, 0) == []
    with pytest.raises(PreconditionError):
        distribute_to_u({(1, 2, 3): half}, 1)


@settings(max_examples=80)
@given(st.lists(st.fractions(min_value=0, max_value=3, max_denominator=12), min_size=1, max_size=8))
def test_distribute_reassembles(xs):
    total = sum(xs, Fraction(0))
    xs[-1] += (-total) % 1    # round the mass up to an integer
    residual = {(i, i + 1, i + 2): x for i, x in enumerate(xs, start=1)}
    count = int(sum(xs))
    parcels = distribute_to_u(residual, count)
    assert all(sum(p.values()) == 1 and min(p.values()) > 0 for p in parcels)
    back = {}
    for p in parcels:
        for e, x in p.items():
            back[e] = back.get(e, 0) + x
    assert back == {e: x for e, x in residual.items() if x}


def test_pipeline_reaches_load_one():
    F = Family.copies(KGraph.complete(12, 3), 2)
    H = reduce_Hstar(F)
    third, half = Fraction(1, 3), Fraction(1, 2)
    w_v = FracMatching({(1, 2, 3, H.v(1)): half, (4, 5, 6, H.v(1)): half,
                        (1, 5, 7, H.v(2)): third, (2, 6, 8, H.v(2)): third,
                        (3, 4, 7, H.v(2)): third})
    full = perfect_fractional_hstar(H, w_v)
    assert full.is_perfect(range(1, H.n_vertices + 1))
    assert all(e in H.edge_set for e in full.weights)
    with pytest.raises(PreconditionError):
        perfect_fractional_hstar(reduce_Hstar(Family.copies(make_S(13, 2, 3), 2)), FracMatching({}))
