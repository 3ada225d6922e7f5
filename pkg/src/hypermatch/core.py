"""Uniform hypergraphs on [n], families of them, and the dominance order.

Vertices are 1-based everywhere in the public API. Internally each edge also
has a bitmask form (bit ``v - 1`` set for vertex ``v``); Python ints are
arbitrary width so there is no separate small-n fast path to maintain.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, ...]


class HypergraphError(ValueError):
    """Invalid edge or vertex data."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def edge_mask(edge: Iterable[int]) -> int:
    mask = 0
    for v in edge:
        mask |= 1 << (v - 1)
    return mask


def mask_vertices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


def _canonical_edge(raw: Sequence[int], n: int, k: int) -> Edge:
    try:
        edge = tuple(sorted(int(v) for v in raw))
    except (TypeError, ValueError):
        raise HypergraphError(f"edge {raw!r}: non-integer vertex") from None
    if len(edge) != k:
        raise HypergraphError(f"edge {tuple(raw)}: expected {k} vertices, got {len(edge)}")
    if len(set(edge)) != k:
        raise HypergraphError(f"edge {tuple(raw)}: repeated vertex")
    for v in edge:
        if not 1 <= v <= n:
            raise HypergraphError(f"edge {tuple(raw)}: vertex {v} out of range 1..{n}")
    return edge


@dataclass(frozen=True)
class KGraph:
    """A k-uniform hypergraph on vertex set {1..n}.

    ``edges`` is kept as a lexicographically sorted tuple of strictly
    increasing k-tuples, so two KGraphs compare equal iff they have the same
    n, k and edge set.
    """

    n: int
    k: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.k < 1:
            raise HypergraphError(f"uniformity must be positive, got k={self.k}")
        if self.n < 0:
            raise HypergraphError(f"vertex count must be non-negative, got n={self.n}")
        canon = sorted({_canonical_edge(e, self.n, self.k) for e in self.edges})
        object.__setattr__(self, "edges", tuple(canon))

    @classmethod
    def build(cls, n: int, k: int, edges: Iterable[Sequence[int]] = ()) -> KGraph:
        return cls(n, k, tuple(tuple(e) for e in edges))

    @classmethod
    def complete(cls, n: int, k: int, on: Iterable[int] | None = None) -> KGraph:
        """All k-subsets of ``on`` (default: all of [n]) as a graph on [n]."""
        ground = range(1, n + 1) if on is None else sorted(on)
        return cls(n, k, tuple(combinations(ground, k)))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(edge_mask(e) for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge) -> bool:
        return tuple(sorted(edge)) in self.edge_set

    def __iter__(self):
        return iter(self.edges)

    def with_edges(self, extra: Iterable[Sequence[int]]) -> KGraph:
        return KGraph(self.n, self.k, self.edges + tuple(tuple(e) for e in extra))

    def without_edges(self, drop: Iterable[Sequence[int]]) -> KGraph:
        gone = {tuple(sorted(e)) for e in drop}
        return KGraph(self.n, self.k, tuple(e for e in self.edges if e not in gone))

    def absent_edges(self) -> list[Edge]:
        """k-subsets of [n] that are not edges, in lexicographic order."""
        have = self.edge_set
        return [e for e in combinations(range(1, self.n + 1), self.k) if e not in have]


def build(n: int, k: int, edges: Iterable[Sequence[int]] = ()) -> KGraph:
    return KGraph.build(n, k, edges)


def degree(H: KGraph, T: Iterable[int] = ()) -> int:
    """Number of edges of H containing every vertex of T."""
    T = set(T)
    if len(T) > H.k:
        raise HypergraphError(f"|T| = {len(T)} exceeds uniformity {H.k}")
    for v in T:
        if not 1 <= v <= H.n:
            raise HypergraphError(f"vertex {v} out of range 1..{H.n}")
    if not T:
        return len(H.edges)
    t = edge_mask(T)
    return sum(1 for e in H.masks if e & t == t)


def degrees(H: KGraph) -> list[int]:
    """Vertex degrees as a list indexed by vertex (index 0 unused)."""
    deg = [0] * (H.n + 1)
    for e in H.edges:
        for v in e:
            deg[v] += 1
    return deg


def max_degree(H: KGraph) -> int:
    return max(degrees(H), default=0)


def max_codegree(H: KGraph) -> int:
    counts: dict[tuple[int, int], int] = {}
    for e in H.edges:
        for pair in combinations(e, 2):
            counts[pair] = counts.get(pair, 0) + 1
    return max(counts.values(), default=0)


def induced(H: KGraph, S: Iterable[int]) -> tuple[KGraph, dict[int, int]]:
    """H[S] relabelled onto 1..|S| in increasing order, plus the old->new map."""
    keep = sorted(set(S))
    for v in keep:
        if not 1 <= v <= H.n:
            raise HypergraphError(f"vertex {v} out of range 1..{H.n}")
    relabel = {v: i for i, v in enumerate(keep, start=1)}
    edges = tuple(tuple(relabel[v] for v in e) for e in H.edges if all(v in relabel for v in e))
    return KGraph(len(keep), H.k, edges), relabel


def remove(H: KGraph, S: Iterable[int]) -> tuple[KGraph, dict[int, int]]:
    """H - S, i.e. the graph induced on the complement of S."""
    drop = set(S)
    return induced(H, (v for v in range(1, H.n + 1) if v not in drop))


def dominance_leq(e: Sequence[int], f: Sequence[int]) -> bool:
    """Coordinatewise order on sorted tuples: e <= f iff a_i <= b_i for all i."""
    if len(e) != len(f):
        raise HypergraphError(f"arity mismatch: {tuple(e)} vs {tuple(f)}")
    return all(a <= b for a, b in zip(sorted(e), sorted(f)))


def immediate_predecessors(f: Edge) -> list[Edge]:
    """Tuples covered by f in the dominance order: lower one coordinate by 1."""
    out = []
    for pos, b in enumerate(f):
        floor = f[pos - 1] if pos else 0
        if b - 1 > floor:
            out.append(f[:pos] + (b - 1,) + f[pos + 1:])
    return out


def is_stable(H: KGraph) -> bool:
    # a set is a downset iff it is closed under immediate predecessors
    have = H.edge_set
    return all(p in have for f in H.edges for p in immediate_predecessors(f))


def down_closure(edges: Iterable[Edge]) -> set[Edge]:
    """Smallest stable edge set containing ``edges``."""
    seen = set()
    stack = [tuple(sorted(e)) for e in edges]
    while stack:
        e = stack.pop()
        if e in seen:
            continue
        seen.add(e)
        stack.extend(p for p in immediate_predecessors(e) if p not in seen)
    return seen


def maximal_edges(H: KGraph) -> list[Edge]:
    """Edges with no immediate successor inside H; deleting one keeps H stable."""
    have = H.edge_set
    out = []
    for e in H.edges:
        covered = False
        for pos, b in enumerate(e):
            ceil = e[pos + 1] if pos + 1 < len(e) else H.n + 1
            if b + 1 < ceil and e[:pos] + (b + 1,) + e[pos + 1:] in have:
                covered = True
                break
        if not covered:
            out.append(e)
    return out


@dataclass(frozen=True)
class Family:
    """An ordered family F_1..F_m of k-graphs on the same vertex set [n]."""

    members: tuple[KGraph, ...]

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise HypergraphError("a family needs at least one member")
        n, k = members[0].n, members[0].k
        for i, F in enumerate(members, start=1):
            if (F.n, F.k) != (n, k):
                raise HypergraphError(
                    f"member {i} lives on (n={F.n}, k={F.k}), expected (n={n}, k={k})")

    @classmethod
    def of(cls, members: Iterable[KGraph]) -> Family:
        return cls(tuple(members))

    @classmethod
    def copies(cls, H: KGraph, m: int) -> Family:
        return cls((H,) * m)

    @property
    def n(self) -> int:
        return self.members[0].n

    @property
    def k(self) -> int:
        return self.members[0].k

    @property
    def m(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i: int) -> KGraph:
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    def sizes(self) -> list[int]:
        return [len(F) for F in self.members]

    def replace(self, i: int, F: KGraph) -> Family:
        members = list(self.members)
        members[i] = F
        return Family(tuple(members))

    def with_edge(self, i: int, edge: Sequence[int]) -> Family:
        """The augmented family F(e, F_i) (0-based member index)."""
        return self.replace(i, self.members[i].with_edges([edge]))


def is_matching(edges: Iterable[Sequence[int]]) -> bool:
    seen: set[int] = set()
    for e in edges:
        for v in e:
            if v in seen:
                return False
            seen.add(v)
    return True
