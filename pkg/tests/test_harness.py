from fractions import Fraction
from math import comb
from random import Random

import pytest

from hypermatch.core import Family, KGraph, PreconditionError, is_stable
from hypermatch.extremal import closeness, make_D, make_S
from hypermatch.harness import (
    Closeness,
    Status,
    TrialConfig,
    Verdict,
    absorb,
    build_absorbing,
    classify_near_extremal,
    derive_seed,
    near_D_rainbow,
    near_d_width,
    random_stable_graph,
    sample_balanced,
    stability_probe,
    validate_verdict,
    verify_erdos,
    verify_rainbow,
)
from hypermatch.matcher import reduce_Hstar


def test_derive_seed_is_fixed_and_spread():
    assert derive_seed(0, 0) == derive_seed(0, 0)
    seeds = {derive_seed(1, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert all(0 <= s < 2 ** 64 for s in seeds)
    assert derive_seed(1, 0) != derive_seed(2, 0)


@pytest.mark.parametrize("kwargs", [
    dict(n=5, m=2, k=3),
    dict(n=9, m=3, k=3, gamma=Fraction(1, 500), gamma_prime=Fraction(1, 50)),
    dict(n=9, m=3, k=3, epsilon=Fraction(1, 2), c=Fraction(1, 10)),
    dict(n=9, m=3, k=3, c=1),
])
def test_config_rejects(kwargs):
    with pytest.raises(PreconditionError):
        TrialConfig(**kwargs)


def test_random_stable_graph():
    rng = Random(4)
    for _ in range(100):
        n = rng.randint(6, 10)
        size = rng.randint(0, comb(n, 3))
        H = random_stable_graph(n, 3, size, rng)
        assert is_stable(H) and len(H) == size
    with pytest.raises(PreconditionError):
        random_stable_graph(6, 3, 21, rng)


def test_verify_small_confirmed_and_deterministic():
    cfg = TrialConfig(9, 3, 3, trials=40, seed=3)
    a, b = verify_erdos(cfg), verify_erdos(cfg)
    assert a.status is Status.CONFIRMED
    assert (a.stats, a.witnesses) == (b.stats, b.witnesses)
    r1, r2 = verify_rainbow(TrialConfig(7, 2, 3, trials=30, seed=9)), verify_rainbow(TrialConfig(7, 2, 3, trials=30, seed=9))
    assert r1.status is Status.CONFIRMED and r1.stats == r2.stats
    assert r1.stats["stable_shortcut_mismatch"] == 0


def test_verify_k2_large_n():
    v = verify_rainbow(TrialConfig(25, 2, 2, trials=5, seed=1))
    assert v.status is Status.CONFIRMED and v.stats["random_failed"] == 0


def test_verdict_validator_rejects_bogus_witness():
    cfg = TrialConfig(9, 3, 3)
    fake = Verdict("erdos", Status.COUNTEREXAMPLE, cfg, witnesses=[make_S(9, 3, 3)])
    assert not validate_verdict(fake)    # |S| = 49 is not above f = 56
    fake = Verdict("rainbow", Status.COUNTEREXAMPLE, cfg,
                   witnesses=[Family.copies(KGraph.complete(9, 3), 3)])
    assert not validate_verdict(fake)
    assert validate_verdict(Verdict("erdos", Status.CONFIRMED, cfg))


def _clique_family():
    G = make_S(12, 2, 3).with_edges(KGraph.complete(12, 3, on=range(1, 7)).edges)
    return Family.copies(G, 2)


def test_build_absorbing_examples():
    F = _clique_family()
    assert build_absorbing(F, 0) == []
    assert build_absorbing(F, 2) == [(1, 2, 3, 15), (4, 5, 6, 16)]
    K = Family.copies(KGraph.complete(9, 3, on=range(1, 7)), 2)
    assert build_absorbing(K, 1) == [(1, 2, 3, 12)]
    with pytest.raises(PreconditionError):
        build_absorbing(F, 3)
    bad = Family.copies(make_S(12, 2, 3), 2)
    with pytest.raises(PreconditionError, match="missing edge"):
        build_absorbing(bad, 2)


def test_absorb_examples():
    F = _clique_family()
    M = build_absorbing(F, 2)
    assert absorb(F, M, []) == sorted(M)
    out = absorb(F, M, [13, 10, 11, 12])
    assert sorted(x for e in out for x in e) == [1, 2, 3, 4, 5, 6, 10, 11, 12, 13, 15, 16]
    with pytest.raises(PreconditionError, match="unbalanced"):
        absorb(F, M, [13, 10, 11])
    with pytest.raises(PreconditionError):
        absorb(F, M, [13, 14, 7, 8, 9, 10, 11, 12])


def test_near_d_width():
    assert near_d_width(9, 3, Fraction(1, 10 ** 30)) == 1
    assert near_d_width(9, 3, Fraction(1, 100)) == 3
    assert near_d_width(9, 3, 0) == 0


def test_near_d_examples():
    n, m = 10, 3
    res = near_D_rainbow(Family.copies(make_D(n, m, 3), m), Fraction(1, 10 ** 40))
    assert not res.ok
    assert all(e == (1, 2, 9) for _, e in res.missing)
    full = Family.copies(KGraph.complete(n, 3, on=range(1, 3 * m + 1)), m)
    res = near_D_rainbow(full, Fraction(1, 10 ** 40))
    assert res.ok
    res.matching.validate(full)
    # member 0 takes the first pattern edge when every member is close to D
    damaged = full.replace(0, full[0].without_edges([(1, 2, 9)]))
    res = near_D_rainbow(damaged, Fraction(1, 10 ** 40))
    assert not res.ok and res.missing == [(0, (1, 2, 9))]
    with pytest.raises(PreconditionError):
        near_D_rainbow(Family.copies(KGraph.complete(9, 2), 2), Fraction(1, 100))


def test_classify_examples():
    eps = Fraction(1, 10 ** 6)
    assert classify_near_extremal(make_S(9, 3, 3), 3, eps) is Closeness.S_CLOSE
    assert classify_near_extremal(make_D(9, 3, 3), 3, eps) is Closeness.D_CLOSE
    empty = KGraph(9, 3)
    cut = min(closeness(make_S(9, 3, 3), empty), closeness(make_D(9, 3, 3), empty))
    assert classify_near_extremal(empty, 3, cut - Fraction(1, 10 ** 9)) is Closeness.NEITHER
    assert classify_near_extremal(empty, 3, 1) is Closeness.BOTH


def test_stability_probe():
    # at n=30, m=4 the window only admits S itself, and S is far from D
    rep = stability_probe(30, 4, Fraction(1, 1000), 6, seed=2)
    assert not rep["vacuous"]
    assert rep["S_CLOSE"] == 2 and rep["out_of_window"] == 2
    assert rep["sampled"] == sum(rep[c.value] for c in Closeness)
    assert rep["NEITHER"] == len(rep["neither_witnesses"])
    # with a looser eps the small D is within reach of everything
    loose = stability_probe(40, 3, Fraction(1, 4), 6, seed=2)
    assert loose["BOTH"] == loose["sampled"] > 0
    tiny = stability_probe(9, 3, Fraction(9, 10), 3, seed=0)
    assert tiny["vacuous"]


def test_sample_balanced():
    F = Family.copies(KGraph.complete(9, 3), 2)
    H = reduce_Hstar(F)
    n = H.base_n
    sizes = []
    for seed in range(1000):
        s = sample_balanced(H, Fraction(1, 2), seed)
        base = [x for x in s.balanced if x <= n]
        assert len(base) == 3 * (len(s.balanced) - len(base))
        assert s.balanced <= s.raw
        sizes.append(sum(1 for x in s.raw if x <= n))
    mean = Fraction(sum(sizes), len(sizes))
    sd = (n * Fraction(1, 4) / len(sizes)) ** Fraction(1, 2)
    assert abs(mean - Fraction(n, 2)) <= 5 * sd
    full = sample_balanced(H, Fraction(999999, 1000000), 1)
    assert full.raw == full.balanced == frozenset(range(1, H.n_vertices + 1))
