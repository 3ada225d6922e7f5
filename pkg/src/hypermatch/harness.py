"""Verification sweeps, absorbing matchings, and the near-extremal toolkit.

Everything random is driven by ``random.Random`` seeded per trial through
``derive_seed``, so results do not depend on how trials are scheduled.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, repeat
from math import comb
from random import Random
from typing import Callable, Iterable

from .core import (
    Edge,
    Family,
    KGraph,
    PreconditionError,
    down_closure,
    immediate_predecessors,
    is_matching,
    is_stable,
)
from .extremal import closeness, f_bound, make_D, make_S
from .matcher import (
    AuxGraph,
    RainbowMatching,
    find_matching,
    rainbow,
)
from .shift import stabilize

MASK64 = (1 << 64) - 1


def derive_seed(seed: int, index: int) -> int:
    """splitmix64 of (seed, index): a 64-bit seed for trial ``index``."""
    z = (seed * 0x9E3779B97F4A7C15 + (index + 1) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("HYPERMATCH_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of a sweep.

    The asymptotic constants are plain knobs here; their defaults are only
    there so experiments run, they carry no meaning.
    """

    n: int
    m: int
    k: int = 3
    trials: int = 100
    seed: int = 0
    epsilon: Fraction = Fraction(1, 100)
    gamma: Fraction = Fraction(1, 50)
    gamma_prime: Fraction = Fraction(1, 500)
    c: Fraction = Fraction(1, 10)

    def __post_init__(self):
        for name in ("epsilon", "gamma", "gamma_prime", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if min(self.n, self.m, self.k) < 1:
            raise PreconditionError("n, m, k must be positive")
        if self.n < self.k * self.m:
            raise PreconditionError(f"need n >= km, got n={self.n}, m={self.m}, k={self.k}")
        if self.trials < 0:
            raise PreconditionError("trials must be non-negative")
        if not 0 < self.gamma_prime < self.gamma:
            raise PreconditionError("need 0 < gamma' < gamma")
        if not 0 < self.epsilon < self.c < 1:
            raise PreconditionError("need 0 < epsilon < c < 1")


class Status(str, enum.Enum):
    CONFIRMED = "CONFIRMED"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class Verdict:
    kind: str                 # "erdos" or "rainbow"
    status: Status
    cfg: TrialConfig
    stats: dict[str, int] = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None


# -- random structures --------------------------------------------------------

def _has_successor(e: Edge, have: set, n: int) -> bool:
    for pos, b in enumerate(e):
        ceil = e[pos + 1] if pos + 1 < len(e) else n + 1
        if b + 1 < ceil and e[:pos] + (b + 1,) + e[pos + 1:] in have:
            return True
    return False


def trim_stable(edges: Iterable[Edge], n: int, size: int, rng: Random) -> set[Edge]:
    """Delete uniformly chosen dominance-maximal edges until ``size`` remain."""
    have = set(edges)
    maxlist = [e for e in sorted(have) if not _has_successor(e, have, n)]
    where = {e: i for i, e in enumerate(maxlist)}
    while len(have) > size:
        idx = rng.randrange(len(maxlist))
        e = maxlist[idx]
        last = maxlist.pop()
        if idx < len(maxlist):
            maxlist[idx] = last
            where[last] = idx
        del where[e]
        have.discard(e)
        for p in immediate_predecessors(e):
            if p in have and p not in where and not _has_successor(p, have, n):
                where[p] = len(maxlist)
                maxlist.append(p)
    return have


def random_stable_graph(n: int, k: int, size: int, rng: Random) -> KGraph:
    """A stable k-graph on [n] with exactly ``size`` edges.

    Draws ``size`` distinct k-sets, closes them downward, then trims back by
    deleting maximal edges.
    """
    total = comb(n, k)
    if not 0 <= size <= total:
        raise PreconditionError(f"size must lie in 0..{total}, got {size}")
    seeds = rng.sample(list(combinations(range(1, n + 1), k)), size)
    return KGraph(n, k, tuple(trim_stable(down_closure(seeds), n, size, rng)))


def random_graph(n: int, k: int, size: int, rng: Random) -> KGraph:
    return KGraph(n, k, tuple(rng.sample(list(combinations(range(1, n + 1), k)), size)))


# -- counterexample validation ------------------------------------------------

def validate_erdos_witness(H: KGraph, m: int) -> bool:
    """H has more than f(n,m,k) edges and no matching of size m."""
    return len(H) > f_bound(H.n, m, H.k) and find_matching(H, m) is None


def validate_rainbow_witness(F: Family) -> bool:
    """Every member exceeds f(n,m,k) and F admits no rainbow matching."""
    bound = f_bound(F.n, F.m, F.k)
    return all(s > bound for s in F.sizes()) and rainbow(F) is None


def validate_verdict(v: Verdict) -> bool:
    """A COUNTEREXAMPLE verdict must carry only independently valid witnesses."""
    if v.status is not Status.COUNTEREXAMPLE:
        return True
    if not v.witnesses:
        return False
    if v.kind == "erdos":
        return all(validate_erdos_witness(H, v.cfg.m) for H in v.witnesses)
    return all(validate_rainbow_witness(F) for F in v.witnesses)


# -- sweeps -------------------------------------------------------------------

def _run(fn: Callable, cfg: TrialConfig, count: int, workers: int) -> list:
    if workers <= 1 or count < 2 * workers:
        return [fn(cfg, i) for i in range(count)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, repeat(cfg), range(count), chunksize=max(1, count // (8 * workers))))


def _erdos_perturbations(n: int, m: int, k: int):
    for tag, base in (("S", make_S(n, m, k)), ("D", make_D(n, m, k))):
        absent = base.absent_edges()
        for e in absent:
            yield tag, base.with_edges([e])
        for t in (2, 3):
            if len(absent) >= t:
                yield f"{tag}+{t}", base.with_edges(absent[:t])


def _erdos_trial(cfg: TrialConfig, i: int):
    rng = Random(derive_seed(cfg.seed, i))
    lo, hi = f_bound(cfg.n, cfg.m, cfg.k) + 1, comb(cfg.n, cfg.k)
    H = random_stable_graph(cfg.n, cfg.k, rng.randint(lo, hi), rng)
    return find_matching(H, cfg.m) is not None, H


def verify_erdos(cfg: TrialConfig, workers: int | None = None) -> Verdict:
    """Look for k-graphs with more than f(n,m,k) edges and no m-matching.

    Runs the single-edge (and 2-, 3-edge) augmentations of S and D, then
    ``cfg.trials`` random stable graphs above the threshold.
    """
    workers = default_workers() if workers is None else workers
    n, m, k = cfg.n, cfg.m, cfg.k
    stats: dict[str, int] = {"perturb_checked": 0, "perturb_failed": 0,
                             "random_checked": 0, "random_failed": 0}
    witnesses = []
    t0 = time.perf_counter()
    for _tag, H in _erdos_perturbations(n, m, k):
        stats["perturb_checked"] += 1
        if find_matching(H, m) is None:
            stats["perturb_failed"] += 1
            # augmentations below the threshold are probes, not counterexamples
            if validate_erdos_witness(H, m):
                witnesses.append(H)
    t1 = time.perf_counter()
    for ok, H in _run(_erdos_trial, cfg, cfg.trials, workers):
        stats["random_checked"] += 1
        if not ok:
            stats["random_failed"] += 1
            if validate_erdos_witness(H, m):
                witnesses.append(H)
    t2 = time.perf_counter()
    witnesses.sort(key=lambda H: H.edges)
    status = Status.COUNTEREXAMPLE if witnesses else Status.CONFIRMED
    if not witnesses and (stats["perturb_failed"] or stats["random_failed"]):
        status = Status.INCONCLUSIVE
    return Verdict("erdos", status, cfg, stats, witnesses,
                   {"perturb_s": t1 - t0, "random_s": t2 - t1})


def _rainbow_perturbations(n: int, m: int, k: int):
    for tag, base in (("S", make_S(n, m, k)), ("D", make_D(n, m, k))):
        F = Family.copies(base, m)
        for e in base.absent_edges():
            yield f"{tag}:all", Family.copies(base.with_edges([e]), m)
            for i in range(m):
                yield f"{tag}:one", F.with_edge(i, e)


def _rainbow_trial(cfg: TrialConfig, i: int):
    rng = Random(derive_seed(cfg.seed, i))
    lo, hi = f_bound(cfg.n, cfg.m, cfg.k) + 1, comb(cfg.n, cfg.k)
    F = Family.of(random_graph(cfg.n, cfg.k, rng.randint(lo, hi), rng) for _ in range(cfg.m))
    via_stable = rainbow(stabilize(F)) is not None
    direct = rainbow(F) is not None
    return direct, via_stable, F


def verify_rainbow(cfg: TrialConfig, workers: int | None = None) -> Verdict:
    """Look for families with every |F_i| > f(n,m,k) and no rainbow matching.

    Random families are stabilized first; a rainbow matching of the stable
    family certifies one for the original (shifting cannot create rainbow
    matchings), but a counterexample is only reported when the original
    family itself is checked to have none.
    """
    workers = default_workers() if workers is None else workers
    n, m, k = cfg.n, cfg.m, cfg.k
    stats = {"perturb_checked": 0, "perturb_failed": 0, "random_checked": 0,
             "random_failed": 0, "certified_by_stable": 0, "stable_shortcut_mismatch": 0}
    witnesses = []
    t0 = time.perf_counter()
    for _tag, F in _rainbow_perturbations(n, m, k):
        stats["perturb_checked"] += 1
        if rainbow(F) is None:
            stats["perturb_failed"] += 1
            if validate_rainbow_witness(F):
                witnesses.append(F)
    t1 = time.perf_counter()
    for direct, via_stable, F in _run(_rainbow_trial, cfg, cfg.trials, workers):
        stats["random_checked"] += 1
        stats["certified_by_stable"] += via_stable
        if via_stable and not direct:
            stats["stable_shortcut_mismatch"] += 1
        if not direct:
            stats["random_failed"] += 1
            if validate_rainbow_witness(F):
                witnesses.append(F)
    t2 = time.perf_counter()
    witnesses.sort(key=lambda F: [G.edges for G in F])
    status = Status.COUNTEREXAMPLE if witnesses else Status.CONFIRMED
    if not witnesses and (stats["perturb_failed"] or stats["random_failed"]
                          or stats["stable_shortcut_mismatch"]):
        status = Status.INCONCLUSIVE
    return Verdict("rainbow", status, cfg, stats, witnesses,
                   {"perturb_s": t1 - t0, "random_s": t2 - t1})


# -- absorbing matchings ------------------------------------------------------

def _in_hstar(F: Family, e: Edge) -> bool:
    n, m, k = F.n, F.m, F.k
    label, base = e[-1], e[:-1]
    if len(base) != k or not all(1 <= x <= n for x in base) or len(set(base)) != k:
        return False
    if n < label <= n + m:
        return base in F[label - n - 1].edge_set
    return n + m < label <= n + m + (n // k - m)


def build_absorbing(F: Family, t: int) -> list[Edge]:
    """M = {{k(j-1)+1, ..., kj, u_j} : j in [t]} inside H*(F).

    Also checks that every member contains all k-subsets of [kt], which is
    what lets M absorb small balanced sets later.
    """
    n, m, k = F.n, F.m, F.k
    if n < k * m:
        raise PreconditionError(f"need n >= km, got n={n}, m={m}, k={k}")
    r = n // k - m
    if not 0 <= t <= r:
        raise PreconditionError(f"need 0 <= t <= r = {r}, got t={t}")
    for i, G in enumerate(F):
        for e in combinations(range(1, k * t + 1), k):
            if e not in G.edge_set:
                raise PreconditionError(
                    f"member {i + 1} is missing edge {e} inside [{k * t}]", (i, e))
    return [tuple(range(k * (j - 1) + 1, k * j + 1)) + (n + m + j,) for j in range(1, t + 1)]


def absorb(F: Family, M: list[Edge], S: Iterable[int]) -> list[Edge]:
    """A perfect matching of H*(F)[V(M) + S].

    ``S`` uses the H* vertex numbering (v_i = n+i, u_j = n+m+j). Each label
    in S is matched with the next k low vertices of [kt]; the u-labels of M
    then take the leftover base vertices k at a time.
    """
    n, m, k = F.n, F.m, F.k
    r = n // k - m
    t = len(M)
    S = sorted(set(S))
    expected = set(range(1, k * t + 1)) | {n + m + j for j in range(1, t + 1)}
    VM = {x for e in M for x in e}
    if VM != expected or len(VM) != t * (k + 1):
        raise PreconditionError("M is not the standard absorbing matching")
    if not all(1 <= x <= n + m + r for x in S):
        raise PreconditionError("S has vertices outside H*(F)")
    if VM & set(S):
        raise PreconditionError("S meets V(M)")
    labels = [x for x in S if x > n]
    base = [x for x in S if x <= n]
    if k * len(labels) != len(base):
        raise PreconditionError(f"unbalanced S: {len(labels)} labels vs {len(base)} base vertices")
    if len(labels) >= t:
        raise PreconditionError(f"S has {len(labels)} labels, need fewer than t={t}")
    M1 = [tuple(range(k * i + 1, k * i + k + 1)) + (x,) for i, x in enumerate(labels)]
    rest = sorted(set(range(k * len(labels) + 1, k * t + 1)) | set(base))
    M2 = [tuple(rest[k * (j - 1): k * j]) + (n + m + j,) for j in range(1, t + 1)]
    out = sorted(M1 + M2)
    covered = [x for e in out for x in e]
    if not is_matching(out) or set(covered) != VM | set(S):
        raise AssertionError("absorption did not produce a perfect matching")
    for e in out:
        if not _in_hstar(F, e):
            raise PreconditionError(f"{e} is not an edge of H*(F)", e)
    return out


# -- near-extremal structure --------------------------------------------------

class Closeness(str, enum.Enum):
    S_CLOSE = "S_CLOSE"
    D_CLOSE = "D_CLOSE"
    BOTH = "BOTH"
    NEITHER = "NEITHER"


def classify_near_extremal(H: KGraph, m: int, eps) -> Closeness:
    if H.k != 3:
        raise PreconditionError(f"classification is for 3-graphs, got k={H.k}")
    if H.n < 3 * m:
        raise PreconditionError(f"need n >= 3m, got n={H.n}, m={m}")
    eps = Fraction(eps)
    s = closeness(make_S(H.n, m, 3), H) <= eps
    d = closeness(make_D(H.n, m, 3), H) <= eps
    if s and d:
        return Closeness.BOTH
    return Closeness.S_CLOSE if s else Closeness.D_CLOSE if d else Closeness.NEITHER


def near_d_width(n: int, m: int, eps) -> int:
    """ceil(6 eps^(1/6) n), clamped to [0, m], computed exactly."""
    eps = Fraction(eps)
    target = 6 ** 6 * n ** 6 * eps
    return next((b for b in range(m + 1) if b ** 6 >= target), m)


@dataclass
class NearDResult:
    b: int
    non_close: list[int]                    # members not sqrt(eps)-close to D
    slots: list[int]                        # slots[i-1] = member using pattern edge i
    claim: dict[int, list[tuple[int, Edge, bool]]]
    missing: list[tuple[int, Edge]]
    matching: RainbowMatching | None

    @property
    def ok(self) -> bool:
        return self.matching is not None

    @property
    def hypothesis_ok(self) -> bool:
        return len(self.non_close) <= self.b


def near_D_rainbow(F: Family, eps) -> NearDResult:
    """Try the explicit rainbow matching {2i-1, 2i, 3m-i+1}, i in [m].

    Members that are not sqrt(eps)-close to D(n,m,3) take the first slots.
    A missing pattern edge is reported, not raised.
    """
    if F.k != 3:
        raise PreconditionError(f"needs a family of 3-graphs, got k={F.k}")
    n, m = F.n, F.m
    if n < 3 * m:
        raise PreconditionError(f"need n >= 3m, got n={n}, m={m}")
    eps = Fraction(eps)
    b = near_d_width(n, m, eps)
    D = make_D(n, m, 3)
    # sqrt(eps)-close  <=>  closeness^2 <= eps
    non_close = [i for i, G in enumerate(F) if closeness(D, G) ** 2 > eps]
    claim = {}
    for i, G in enumerate(F):
        rows = []
        for j in range(b + 1):
            e = (2 * j + 1, 2 * j + 2, 3 * m - j)
            if len(set(e)) == 3 and max(e) <= n and e == tuple(sorted(e)):
                rows.append((j, e, e in G.edge_set))
        claim[i] = rows
    slots = non_close + [i for i in range(m) if i not in non_close]
    missing = []
    pairs = []
    for slot, member in enumerate(slots, start=1):
        e = (2 * slot - 1, 2 * slot, 3 * m - slot + 1)
        if e in F[member].edge_set:
            pairs.append((member, e))
        else:
            missing.append((member, e))
    R = None
    if not missing:
        R = RainbowMatching(tuple(sorted(pairs)))
        R.validate(F)
    return NearDResult(b, non_close, slots, claim, missing, R)


def stability_probe(n: int, m: int, eps, trials: int, seed: int) -> dict:
    """Classify stable 3-graphs with nu < m and e > f(n,m,3) - eps^4 n^3.

    Trials rotate through three sources: stable subgraphs of S, stable
    subgraphs of D (maximal edges deleted at random), and random stable
    graphs of a size in the window kept only when nu < m. NEITHER outcomes
    are collected with their graphs; they are observations, not failures.
    """
    if n < 3 * m:
        raise PreconditionError(f"need n >= 3m, got n={n}, m={m}")
    eps = Fraction(eps)
    f = f_bound(n, m, 3)
    threshold = f - eps ** 4 * n ** 3
    report: dict = {
        "n": n, "m": m, "eps": eps, "trials": trials, "seed": seed,
        "f": f, "threshold": threshold, "vacuous": f <= eps ** 4 * n ** 3,
        "out_of_window": 0, "rejected": 0, "sampled": 0,
    }
    for cls in Closeness:
        report[cls.value] = 0
    neither = []
    bases = {"S": make_S(n, m, 3), "D": make_D(n, m, 3)}
    for i in range(trials):
        rng = Random(derive_seed(seed, i))
        source = ("S", "D", "random")[i % 3]
        if source in bases:
            G = bases[source]
            lowest = max(0, int(threshold) + 1)   # smallest admissible edge count
            if len(G) < lowest:
                report["out_of_window"] += 1
                continue
            size = rng.randint(lowest, len(G))
            H = KGraph(n, 3, tuple(trim_stable(G.edges, n, size, rng)))
        else:
            lowest = max(0, int(threshold) + 1)
            if lowest > f:
                report["out_of_window"] += 1
                continue
            H = random_stable_graph(n, 3, rng.randint(lowest, f), rng)
            if find_matching(H, m) is not None:
                report["rejected"] += 1
                continue
        assert is_stable(H) and len(H) > threshold
        report["sampled"] += 1
        cls = classify_near_extremal(H, m, eps)
        report[cls.value] += 1
        if cls is Closeness.NEITHER:
            neither.append(H)
    report["neither_witnesses"] = neither
    return report


# -- balanced random subsets ----------------------------------------------------

@dataclass(frozen=True)
class BalancedSample:
    raw: frozenset[int]        # R: every vertex kept independently with prob p
    balanced: frozenset[int]   # R': |R' cap [n]| = k |R' cap (V u U)|


def _bernoulli(rng: Random, p: Fraction) -> bool:
    return rng.randrange(p.denominator) < p.numerator


def sample_balanced(H: AuxGraph, p, seed: int) -> BalancedSample:
    p = Fraction(p)
    if not 0 < p < 1:
        raise PreconditionError(f"need 0 < p < 1, got {p}")
    rng = Random(seed)
    R = [x for x in range(1, H.n_vertices + 1) if _bernoulli(rng, p)]
    base = [x for x in R if x <= H.base_n]
    labels = [x for x in R if x > H.base_n]
    k = H.k
    if len(base) >= k * len(labels):
        drop = set(rng.sample(base, len(base) - k * len(labels)))
    else:
        drop = set(rng.sample(base, len(base) % k))
        ell = len(base) - len(drop)
        drop |= set(rng.sample(labels, len(labels) - ell // k))
    kept = frozenset(x for x in R if x not in drop)
    return BalancedSample(frozenset(R), kept)
