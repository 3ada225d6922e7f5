"""Exact matching solvers and the rainbow-to-matching reduction.

Every answer here is exact: a search either exhibits a witness or exhausts
the (pruned) tree. Witnesses are re-validated before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .core import (
    Edge,
    Family,
    HypergraphError,
    KGraph,
    PreconditionError,
    edge_mask,
    is_matching,
    mask_vertices,
)


class _Packer:
    """Branch-and-bound search for k-uniform matchings over bitmask edges.

    Branches on the lowest free vertex: each edge whose smallest vertex is
    that vertex, then the option of leaving it uncovered. ``_fail[free]``
    stores the smallest matching size already shown to be impossible inside
    ``free``; infeasibility for s implies infeasibility for every s' > s.
    """

    def __init__(self, nverts: int, k: int, masks: Iterable[int]):
        self.k = k
        self.by_low: list[list[int]] = [[] for _ in range(nverts + 1)]
        for e in masks:
            low = (e & -e).bit_length() - 1
            self.by_low[low].append(e)
        self._fail: dict[int, int] = {}
        self.nodes = 0

    def find(self, free: int, need: int) -> list[int] | None:
        if need <= 0:
            return []
        if free.bit_count() < need * self.k:
            return None
        if self._fail.get(free, need + 1) <= need:
            return None
        self.nodes += 1
        low = free & -free
        for e in self.by_low[low.bit_length() - 1]:
            if e & free == e:
                rest = self.find(free & ~e, need - 1)
                if rest is not None:
                    return [e] + rest
        rest = self.find(free & ~low, need)
        if rest is not None:
            return rest
        known = self._fail.get(free)
        if known is None or need < known:
            self._fail[free] = need
        return None


def _greedy(masks: Sequence[int]) -> list[int]:
    used = 0
    out = []
    for e in masks:
        if not e & used:
            out.append(e)
            used |= e
    return out


def _as_edges(masks: Iterable[int]) -> list[Edge]:
    return sorted(tuple(mask_vertices(e)) for e in masks)


def find_matching(H: KGraph, size: int) -> list[Edge] | None:
    """A matching of exactly ``size`` edges in H, or None if there is none."""
    if size <= 0:
        return []
    packer = _Packer(H.n, H.k, H.masks)
    found = packer.find((1 << H.n) - 1, size)
    return None if found is None else _as_edges(found)


def has_matching_of_size(H: KGraph, size: int) -> bool:
    return find_matching(H, size) is not None


def max_matching(H: KGraph) -> list[Edge]:
    """A maximum matching of H (lexicographically sorted edge list)."""
    packer = _Packer(H.n, H.k, H.masks)
    full = (1 << H.n) - 1
    best = _greedy(H.masks)
    while True:
        better = packer.find(full, len(best) + 1)
        if better is None:
            break
        best = better
    witness = _as_edges(best)
    if not is_matching(witness) or any(e not in H.edge_set for e in witness):
        raise AssertionError("solver produced an invalid matching")
    return witness


def nu(H: KGraph) -> int:
    return len(max_matching(H))


def has_perfect_matching(H: KGraph) -> tuple[bool, list[Edge] | None]:
    if H.n % H.k:
        return False, None
    witness = find_matching(H, H.n // H.k)
    return witness is not None, witness


@dataclass(frozen=True)
class RainbowMatching:
    """Pairs (member index, edge), one per member; member indices are 0-based."""

    pairs: tuple[tuple[int, Edge], ...]

    @property
    def edges(self) -> list[Edge]:
        return [e for _, e in self.pairs]

    def validate(self, F: Family) -> None:
        idx = [i for i, _ in self.pairs]
        if sorted(idx) != list(range(F.m)):
            raise AssertionError(f"rainbow matching must use each member once, got {idx}")
        for i, e in self.pairs:
            if e not in F[i].edge_set:
                raise AssertionError(f"edge {e} is not in member {i}")
        if not is_matching(self.edges):
            raise AssertionError("rainbow edges are not pairwise disjoint")


def _rainbow_search(members: Sequence[Sequence[int]], nverts: int, k: int,
                    forbidden: int = 0) -> list[int] | None:
    """One edge per member, pairwise disjoint and avoiding ``forbidden``.

    Returns the chosen masks in the order of ``members`` or None. Members are
    branched on in ascending size order; failed (depth, used) states are
    memoised.
    """
    m = len(members)
    order = sorted(range(m), key=lambda i: (len(members[i]), i))
    lists = [members[i] for i in order]
    failed: set[tuple[int, int]] = set()
    chosen = [0] * m

    def go(d: int, used: int) -> bool:
        if d == m:
            return True
        if (m - d) * k > nverts - used.bit_count():
            return False
        if (d, used) in failed:
            return False
        for e in lists[d]:
            if not e & used:
                chosen[d] = e
                if go(d + 1, used | e):
                    return True
        failed.add((d, used))
        return False

    if not go(0, forbidden):
        return None
    out = [0] * m
    for d, i in enumerate(order):
        out[i] = chosen[d]
    return out


def rainbow(F: Family) -> RainbowMatching | None:
    """A rainbow matching for F, or None when F admits none."""
    found = _rainbow_search([G.masks for G in F], F.n, F.k)
    if found is None:
        return None
    R = RainbowMatching(tuple((i, tuple(mask_vertices(e))) for i, e in enumerate(found)))
    R.validate(F)
    return R


def rainbow_with_edge(F: Family, i: int, edge: Sequence[int]) -> RainbowMatching | None:
    """A rainbow matching of F(e, F_i) that uses e for member i, if any.

    When F itself has no rainbow matching this decides whether F(e, F_i) has
    one, because any rainbow matching of the augmented family must use e.
    """
    e = tuple(sorted(edge))
    others = [G.masks for j, G in enumerate(F) if j != i]
    found = _rainbow_search(others, F.n, F.k, forbidden=edge_mask(e))
    if found is None:
        return None
    it = iter(found)
    pairs = tuple((j, e if j == i else tuple(mask_vertices(next(it)))) for j in range(F.m))
    R = RainbowMatching(pairs)
    R.validate(F.with_edge(i, e))
    return R


# -- auxiliary (k+1)-graphs ---------------------------------------------------

@dataclass(frozen=True)
class AuxGraph:
    """H(F) or H*(F): a (k+1)-graph on [n] plus label vertices.

    Labels are embedded as integers: v_i is ``base_n + i`` and u_j is
    ``base_n + m + j``. Every edge is a sorted (k+1)-tuple whose last entry
    is its unique label vertex. For H(F) ``r`` is 0 since U is not part of
    its vertex set.
    """

    base_n: int
    k: int
    m: int
    r: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.m < 1 or self.r < 0:
            raise HypergraphError(f"need m >= 1 and r >= 0, got m={self.m}, r={self.r}")
        canon = []
        for e in self.edges:
            e = tuple(sorted(e))
            if len(e) != self.k + 1 or len(set(e)) != len(e):
                raise HypergraphError(f"aux edge {e}: expected {self.k + 1} distinct vertices")
            if not all(1 <= v <= self.base_n for v in e[:-1]):
                raise HypergraphError(f"aux edge {e}: base part must lie in 1..{self.base_n}")
            if not self.base_n < e[-1] <= self.n_vertices:
                raise HypergraphError(f"aux edge {e}: needs exactly one label vertex")
            canon.append(e)
        object.__setattr__(self, "edges", tuple(sorted(set(canon))))

    @property
    def n_vertices(self) -> int:
        return self.base_n + self.m + self.r

    @property
    def v_labels(self) -> list[int]:
        return [self.base_n + i for i in range(1, self.m + 1)]

    @property
    def u_labels(self) -> list[int]:
        return [self.base_n + self.m + j for j in range(1, self.r + 1)]

    def v(self, i: int) -> int:
        return self.base_n + i

    def u(self, j: int) -> int:
        return self.base_n + self.m + j

    def label_name(self, x: int) -> str:
        if x <= self.base_n:
            return str(x)
        if x <= self.base_n + self.m:
            return f"v{x - self.base_n}"
        return f"u{x - self.base_n - self.m}"

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def as_kgraph(self) -> KGraph:
        return KGraph(self.n_vertices, self.k + 1, self.edges)


def reduce_H(F: Family) -> AuxGraph:
    n, k, m = F.n, F.k, F.m
    if n < k * m:
        raise PreconditionError(f"reduction needs n >= km, got n={n}, k={k}, m={m}")
    edges = tuple(e + (n + i,) for i, G in enumerate(F, start=1) for e in G.edges)
    return AuxGraph(n, k, m, 0, edges)


def reduce_Hstar(F: Family) -> AuxGraph:
    n, k, m = F.n, F.k, F.m
    if n < k * m:
        raise PreconditionError(f"reduction needs n >= km, got n={n}, k={k}, m={m}")
    r = n // k - m
    edges = [e + (n + i,) for i, G in enumerate(F, start=1) for e in G.edges]
    base = list(combinations(range(1, n + 1), k))
    for j in range(1, r + 1):
        edges.extend(e + (n + m + j,) for e in base)
    H = AuxGraph(n, k, m, r, tuple(edges))
    assert len(H) == sum(F.sizes()) + r * comb(n, k)
    return H


def aux_nu(H: AuxGraph) -> int:
    return nu(H.as_kgraph())


@dataclass(frozen=True)
class EquivalenceReport:
    has_rainbow: bool
    nu_H: int
    nu_Hstar: int
    m: int
    r: int

    @property
    def consistent(self) -> bool:
        return self.has_rainbow == (self.nu_H >= self.m) == (self.nu_Hstar == self.m + self.r)


def aux_matching_report(F: Family) -> EquivalenceReport:
    H, Hs = reduce_H(F), reduce_Hstar(F)
    return EquivalenceReport(rainbow(F) is not None, aux_nu(H), aux_nu(Hs), F.m, Hs.r)


def aux_matching_equiv(F: Family) -> bool:
    """rainbow(F) exists <=> nu(H(F)) >= m <=> nu(H*(F)) = m + r, on this F."""
    return aux_matching_report(F).consistent
