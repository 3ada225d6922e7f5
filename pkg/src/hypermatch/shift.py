"""Shifting, saturation, and full-degree peeling for families of k-graphs.

The shifting operator is the usual (i, j)-compression, applied to all
members of a family at once. Schedules are deterministic so that fixpoint
and rerun comparisons are meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .core import Family, KGraph, PreconditionError, mask_vertices, remove
from .extremal import f_bound
from .matcher import RainbowMatching, rainbow, rainbow_with_edge


class _Members:
    """Bitmask edge sets of every member, indexed by vertex."""

    def __init__(self, F: Family):
        self.sets = [set(G.masks) for G in F]
        self.by_vertex = [[set() for _ in range(F.n + 1)] for _ in F]
        for S, index in zip(self.sets, self.by_vertex):
            for e in S:
                for v in mask_vertices(e):
                    index[v].add(e)

    def shift(self, i: int, j: int) -> bool:
        """(i, j)-compression of every member in place; True if anything moved."""
        bi = 1 << (i - 1)
        swap = bi | (1 << (j - 1))
        changed = False
        for S, index in zip(self.sets, self.by_vertex):
            movers = [e for e in index[j] if not e & bi and e ^ swap not in S]
            if not movers:
                continue
            changed = True
            for e in movers:
                f = e ^ swap
                S.discard(e)
                S.add(f)
                for v in mask_vertices(e):
                    index[v].discard(e)
                for v in mask_vertices(f):
                    index[v].add(f)
        return changed


def _to_family(F: Family, members: _Members) -> Family:
    return Family.of(KGraph(F.n, F.k, tuple(tuple(mask_vertices(e)) for e in S))
                     for S in members.sets)


def shift_ij(F: Family, i: int, j: int) -> Family:
    """Replace j by i in every edge where the result is not already an edge.

    Applied to all members in lockstep; membership is judged against each
    member before the shift, so edge counts are preserved.
    """
    if not 1 <= i < j <= F.n:
        raise PreconditionError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={F.n}")
    members = _Members(F)
    if not members.shift(i, j):
        return F
    return _to_family(F, members)


def stabilize(F: Family) -> Family:
    """Shift until every member is stable.

    Sweeps the pairs (i, j) lexicographically and restarts after each shift
    that changed something. The total of all vertex labels over all edges
    drops with every effective shift, so this terminates.
    """
    n = F.n
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    members = _Members(F)
    moved = False
    while any(members.shift(i, j) for i, j in pairs):
        moved = True
    return _to_family(F, members) if moved else F


def stabilize_graph(H: KGraph) -> KGraph:
    return stabilize(Family.of([H]))[0]


def rainbow_free_preserved(F: Family, F_stable: Family | None = None) -> bool:
    """Either F has a rainbow matching or its stabilization has none."""
    if F_stable is None:
        F_stable = stabilize(F)
    return rainbow(F) is not None or rainbow(F_stable) is None


def _saturate_sweep(F: Family) -> Family:
    # Adding edges only makes rainbow matchings easier, so a rejected
    # candidate stays rejected and a single pass is already saturated.
    members = list(F.members)
    for i in range(F.m):
        for e in members[i].absent_edges():
            current = Family.of(members)
            if rainbow_with_edge(current, i, e) is None:
                members[i] = members[i].with_edges([e])
    return Family.of(members)


def saturate(F: Family) -> Family:
    """A stable, saturated family containing (after shifting) F's edges.

    Alternates a saturating sweep (candidates in (member, edge) lexicographic
    order) with stabilize until a whole pass changes nothing. Member sizes
    never decrease and are bounded, so the loop terminates.
    """
    witness = rainbow(F)
    if witness is not None:
        raise PreconditionError("family already admits a rainbow matching", witness)
    while True:
        G = stabilize(_saturate_sweep(F))
        if G == F:
            return F
        F = G


def is_saturated(F: Family) -> bool:
    """No rainbow matching, but every single-edge augmentation has one."""
    if rainbow(F) is not None:
        return False
    return all(rainbow_with_edge(F, i, e) is not None
               for i, G in enumerate(F) for e in G.absent_edges())


def degree_cap(n: int, m: int, k: int) -> int:
    rest = n - 1 - k * (m - 1)
    return comb(n - 1, k - 1) - (comb(rest, k - 1) if rest >= 0 else 0)


@dataclass
class DegreeCapReport:
    """Outcome of the saturated-family degree audit.

    ``violations`` lists (member index, vertex, degree), 0-based members.
    When ``saturated`` is False the audit says nothing about the family.
    """

    violations: list[tuple[int, int, int]]
    cap: int
    full: int
    saturated: bool
    trusted: bool

    @property
    def ok(self) -> bool:
        return self.saturated and not self.violations


def degree_cap_check(F: Family, trust_saturated: bool = False) -> DegreeCapReport:
    n, m, k = F.n, F.m, F.k
    cap, full = degree_cap(n, m, k), comb(n - 1, k - 1)
    saturated = True if trust_saturated else is_saturated(F)
    violations = []
    for i, G in enumerate(F):
        deg = [0] * (n + 1)
        for e in G.edges:
            for v in e:
                deg[v] += 1
        for v in range(1, n + 1):
            if not (deg[v] <= cap or deg[v] == full):
                violations.append((i, v, deg[v]))
    return DegreeCapReport(violations, cap, full, saturated, trust_saturated)


@dataclass(frozen=True)
class PeelStep:
    iteration: int
    vertex: int           # label in the family being peeled at this step
    member: int           # 0-based index in that family
    original_member: int  # 0-based index in the input family
    n: int                # vertex count before the step


@dataclass
class PeelResult:
    """Output of peel_full_degree.

    ``saturated[t]`` is the stable saturated family examined at step t and
    ``peeled[t]`` the smaller family produced from it (before the next
    saturation). The final family is ``saturated[-1]``.
    """

    family: Family
    log: list[PeelStep] = field(default_factory=list)
    saturated: list[Family] = field(default_factory=list)
    peeled: list[Family] = field(default_factory=list)

    def size_bound_kept(self, original: Family) -> bool:
        """If all |F_i| > f(n,m,k) held on input, it still holds on output."""
        n, m, k = original.n, original.m, original.k
        if not all(s > f_bound(n, m, k) for s in original.sizes()):
            return True
        out = self.family
        return all(s > f_bound(out.n, out.m, out.k) for s in out.sizes())


def _full_degree_pair(F: Family) -> tuple[int, int] | None:
    full = comb(F.n - 1, F.k - 1)
    for i, G in enumerate(F):
        deg = [0] * (F.n + 1)
        for e in G.edges:
            for v in e:
                deg[v] += 1
        for v in range(1, F.n + 1):
            if deg[v] == full:
                return i, v
    return None


def peel_step(F: Family, member: int, vertex: int) -> Family:
    """Drop ``member`` and delete ``vertex`` from all other members."""
    if F.m < 2:
        raise PreconditionError("cannot drop the only member of a family")
    return Family.of(remove(G, [vertex])[0] for j, G in enumerate(F) if j != member)


def peel_full_degree(F: Family) -> PeelResult:
    """Saturate, then drop a member with a full-degree vertex, until none remain.

    At each step the first (member, vertex) pair in lexicographic order with
    d(v) = C(n-1, k-1) is used: v is deleted from every other member, that
    member is dropped, and the remaining vertices are relabelled onto [n-1].
    m drops by one per step, so there are at most m - 1 steps.
    """
    witness = rainbow(F)
    if witness is not None:
        raise PreconditionError("family already admits a rainbow matching", witness)
    result = PeelResult(F)
    origin = list(range(F.m))
    iteration = 0
    while True:
        F = saturate(F)
        result.saturated.append(F)
        hit = _full_degree_pair(F)
        if hit is None:
            result.family = F
            return result
        i, v = hit
        result.log.append(PeelStep(iteration, v, i, origin[i], F.n))
        F = peel_step(F, i, v)
        result.peeled.append(F)
        del origin[i]
        iteration += 1


def lift_rainbow(result: PeelResult, step: int, R: RainbowMatching) -> RainbowMatching:
    """Turn a rainbow matching of ``result.peeled[step]`` into one of
    ``result.saturated[step]``.

    The dropped member gets its peeled vertex plus the k-1 smallest unused
    vertices, which is an edge because that vertex had full degree. Lifting
    only goes one step at a time: the saturation between steps adds and
    shifts edges, so a matching of a later family need not be one of an
    earlier peeled family.
    """
    entry = result.log[step]
    R.validate(result.peeled[step])
    fam = result.saturated[step]
    v = entry.vertex

    def back(x: int) -> int:
        return x if x < v else x + 1

    pairs = [(j if j < entry.member else j + 1, tuple(back(x) for x in e)) for j, e in R.pairs]
    used = {x for _, e in pairs for x in e} | {v}
    free = [x for x in range(1, entry.n + 1) if x not in used]
    pairs.append((entry.member, tuple(sorted([v] + free[:fam.k - 1]))))
    lifted = RainbowMatching(tuple(sorted(pairs)))
    lifted.validate(fam)
    return lifted
