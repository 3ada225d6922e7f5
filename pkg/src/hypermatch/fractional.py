"""Fractional matchings in exact rational arithmetic.

Two independent routes live here: a dense simplex (Bland's rule, Fractions
only) for the maximum fractional matching LP, and the constructive
iteration that turns partial vertex loads on a complete 3-graph into a
perfect fractional matching.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .core import Edge, KGraph, PreconditionError
from .matcher import AuxGraph

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class FracMatching:
    """Edge weights plus an optional fixed load per vertex.

    ``preload`` is load a vertex already carries from weight that is not in
    ``weights`` (for instance when only vertex loads of an earlier stage are
    known). ``loads()`` includes it.
    """

    weights: dict[Edge, Fraction] = field(default_factory=dict)
    preload: dict[int, Fraction] = field(default_factory=dict)

    def loads(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = defaultdict(Fraction, self.preload)
        for e, w in self.weights.items():
            for v in e:
                out[v] += w
        return dict(out)

    def load(self, v: int) -> Fraction:
        return self.loads().get(v, ZERO)

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), ZERO)

    def support(self) -> dict[Edge, Fraction]:
        return {e: w for e, w in sorted(self.weights.items()) if w}

    def is_valid(self) -> bool:
        if any(w < 0 for w in self.weights.values()):
            return False
        if any(x < 0 for x in self.preload.values()):
            return False
        return all(x <= 1 for x in self.loads().values())

    def is_perfect(self, vertices: Iterable[int]) -> bool:
        loads = self.loads()
        return self.is_valid() and all(loads.get(v, ZERO) == 1 for v in vertices)


# -- exact simplex ------------------------------------------------------------

class ExactSimplex:
    """max c.x subject to A x <= b, x >= 0, with b >= 0 (origin feasible).

    Dense tableau over Fractions; Bland's rule for entering and leaving
    variables, so degenerate pivots cannot cycle.
    """

    def __init__(self, A: list[list[Fraction]], b: list[Fraction], c: list[Fraction]):
        if any(x < 0 for x in b):
            raise ValueError("right-hand side must be non-negative")
        self.rows = len(A)
        self.cols = len(c)
        width = self.cols + self.rows
        self.T = []
        for i, row in enumerate(A):
            slack = [ZERO] * self.rows
            slack[i] = ONE
            self.T.append([Fraction(x) for x in row] + slack + [Fraction(b[i])])
        self.obj = [Fraction(x) for x in c] + [ZERO] * self.rows
        self.value = ZERO
        self.basis = list(range(self.cols, width))
        self.pivots = 0

    def _pivot(self, r: int, j: int) -> None:
        row = self.T[r]
        p = row[j]
        if p != 1:
            self.T[r] = row = [x / p for x in row]
        for i, other in enumerate(self.T):
            if i != r and other[j]:
                f = other[j]
                self.T[i] = [x - f * y for x, y in zip(other, row)]
        f = self.obj[j]
        if f:
            self.obj = [x - f * y for x, y in zip(self.obj, row[:-1])]
            self.value += f * row[-1]
        self.basis[r] = j
        self.pivots += 1

    def solve(self) -> None:
        while True:
            entering = next((j for j, x in enumerate(self.obj) if x > 0), None)
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.T):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise ArithmeticError("LP is unbounded")
            self._pivot(best[1], entering)

    def primal(self) -> list[Fraction]:
        x = [ZERO] * (self.cols + self.rows)
        for i, j in enumerate(self.basis):
            x[j] = self.T[i][-1]
        return x[:self.cols]

    def dual(self) -> list[Fraction]:
        return [-self.obj[self.cols + i] for i in range(self.rows)]


@dataclass
class MatchingLP:
    value: Fraction
    matching: FracMatching
    cover: dict[int, Fraction]   # optimal fractional vertex cover (the dual)


def solve_matching_lp(H: KGraph) -> MatchingLP:
    """Maximum fractional matching with a dual vertex-cover certificate.

    Raises AssertionError if the certificate does not close the gap.
    """
    vertices = list(range(1, H.n + 1))
    A = [[ONE if v in e else ZERO for e in H.edges] for v in vertices]
    lp = ExactSimplex(A, [ONE] * len(vertices), [ONE] * len(H.edges))
    lp.solve()
    x = lp.primal()
    y = lp.dual()
    w = FracMatching({e: xe for e, xe in zip(H.edges, x) if xe})
    cover = {v: yv for v, yv in zip(vertices, y) if yv}
    if not w.is_valid():
        raise AssertionError("simplex returned an infeasible fractional matching")
    if any(yv < 0 for yv in y):
        raise AssertionError("dual certificate has a negative entry")
    for e in H.edges:
        if sum((cover.get(v, ZERO) for v in e), ZERO) < 1:
            raise AssertionError(f"dual certificate does not cover edge {e}")
    if w.total != lp.value or sum(cover.values(), ZERO) != lp.value:
        raise AssertionError("primal and dual values differ")
    return MatchingLP(lp.value, w, cover)


def max_fractional(H: KGraph) -> tuple[Fraction, FracMatching]:
    res = solve_matching_lp(H)
    return res.value, res.matching


def has_perfect_fractional(H: KGraph) -> tuple[bool, FracMatching | None]:
    value, w = max_fractional(H)
    if value * H.k == H.n:
        return True, w
    return False, None


# -- constructive extension on a complete 3-graph ------------------------------

def _initial_loads(nv: int, initial) -> tuple[dict[Edge, Fraction], dict[int, Fraction]]:
    if isinstance(initial, FracMatching):
        weights = {tuple(sorted(e)): Fraction(w) for e, w in initial.weights.items() if w}
        for e in weights:
            if len(e) != 3 or not all(1 <= v <= nv for v in e):
                raise PreconditionError(f"edge {e} is not a triple of [{nv}]")
        return weights, {v: Fraction(x) for v, x in initial.preload.items()}
    return {}, {v: Fraction(x) for v, x in dict(initial).items()}


def extend_complete3(nv: int, initial: FracMatching | Mapping[int, Fraction]) -> FracMatching:
    """Raise edge weights on the complete 3-graph on [nv] until every load is 1.

    ``initial`` is either a fractional matching on triples of [nv] or bare
    vertex loads. The four highest-labelled zero-load vertices are held back
    as a_1..a_4; the rest are filled greedily (highest load first, lowest
    label on ties, lexicographically least triple through it) until at most
    two remain, which the closing patch on a_1..a_4 finishes off.

    The result keeps the initial weights (or the bare loads as ``preload``)
    and adds the new weight on top, so ``result.weights[e] - initial[e]``
    is the added part.
    """
    if nv % 3:
        raise PreconditionError(f"nv must be divisible by 3, got {nv}")
    weights, preload = _initial_loads(nv, initial)
    for v in preload:
        if not 1 <= v <= nv:
            raise PreconditionError(f"load given for vertex {v} outside 1..{nv}")
    load = {v: preload.get(v, ZERO) for v in range(1, nv + 1)}
    for e, w in weights.items():
        if w < 0:
            raise PreconditionError(f"negative weight on {e}")
        for v in e:
            load[v] += w
    for v, x in load.items():
        if x < 0 or x >= 1:
            raise PreconditionError(f"initial load of vertex {v} is {x}, need 0 <= load < 1")
    zeros = [v for v in range(1, nv + 1) if load[v] == 0]
    if len(zeros) < 4:
        raise PreconditionError(f"need at least 4 zero-load vertices, found {len(zeros)}")
    a1, a2, a3, a4 = zeros[-4:]
    reserved = {a1, a2, a3, a4}

    def bump(e: Edge, amount: Fraction) -> None:
        if amount:
            e = tuple(sorted(e))
            weights[e] = weights.get(e, ZERO) + amount
            for x in e:
                load[x] += amount

    working = [v for v in range(1, nv + 1) if v not in reserved]
    while len(working) > 2:
        v = max(working, key=lambda x: (load[x], -x))
        partners = [x for x in working if x != v][:2]
        bump((v, *partners), 1 - load[v])
        working = [x for x in working if load[x] != 1]
        assert all(load[x] <= 1 for x in load)

    # At most two unsaturated vertices are left; top up with saturated ones.
    filled = [x for x in range(1, nv + 1) if x not in reserved and x not in working]
    b = sorted(working + filled[:2 - len(working)], key=lambda x: (-load[x], x))
    b1, b2 = b
    w1, w2 = load[b1], load[b2]
    half = (w1 - w2) / 2
    bump((a1, a2, b1), 1 - w1)
    bump((a1, a2, b2), half)
    bump((a3, a4, b2), 1 - w1 + half)
    for triple in combinations((a1, a2, a3, a4), 3):
        bump(triple, (w1 + w2) / 6)

    out = FracMatching(dict(sorted(weights.items())), preload)
    if not out.is_perfect(range(1, nv + 1)):
        raise AssertionError("extension did not reach load 1 everywhere")
    return out


def patch_weights(w1, w2) -> dict[str, Fraction]:
    """The closing patch as a function of the two leftover loads w(b1) >= w(b2)."""
    w1, w2 = Fraction(w1), Fraction(w2)
    half = (w1 - w2) / 2
    return {
        "a1a2b1": 1 - w1,
        "a1a2b2": half,
        "a3a4b2": 1 - w1 + half,
        "aaa": (w1 + w2) / 6,
    }


def project_aux(H: AuxGraph, w: FracMatching) -> FracMatching:
    """Push weight on v-label edges down to the base k-sets they contain.

    The result's weight on a k-set f of [n] is the sum of w over the edges
    f + {v_i}; its ``loads()`` are the induced base vertex loads.
    """
    v_lo, v_hi = H.base_n, H.base_n + H.m
    per_label: dict[int, Fraction] = defaultdict(Fraction)
    out: dict[Edge, Fraction] = defaultdict(Fraction)
    for e, x in w.weights.items():
        e = tuple(sorted(e))
        if e not in H.edge_set:
            raise PreconditionError(f"{e} is not an edge of the auxiliary graph")
        label = e[-1]
        if not v_lo < label <= v_hi:
            raise PreconditionError(f"{e} does not go through a v-label")
        if x < 0:
            raise PreconditionError(f"negative weight on {e}")
        per_label[label] += x
        out[e[:-1]] += x
    for label, total in per_label.items():
        if total > 1:
            raise PreconditionError(f"label {H.label_name(label)} carries weight {total} > 1")
    return FracMatching({e: x for e, x in sorted(out.items()) if x})


def distribute_to_u(residual, count: int) -> list[dict[Edge, Fraction]]:
    """Split non-negative edge weights of total mass ``count`` into unit parcels.

    Edges are consumed in lexicographic order; an edge whose weight crosses
    a parcel boundary is split between the two parcels.
    """
    items = residual.weights if isinstance(residual, FracMatching) else residual
    items = sorted((tuple(sorted(e)), Fraction(x)) for e, x in items.items())
    if any(x < 0 for _, x in items):
        raise PreconditionError("residual weights must be non-negative")
    mass = sum((x for _, x in items), ZERO)
    if mass != count:
        raise PreconditionError(f"residual mass {mass} does not equal count {count}")
    parcels: list[dict[Edge, Fraction]] = []
    current: dict[Edge, Fraction] = {}
    room = ONE
    for e, x in items:
        while x > 0:
            take = min(x, room)
            current[e] = current.get(e, ZERO) + take
            x -= take
            room -= take
            if room == 0:
                parcels.append(current)
                current, room = {}, ONE
    assert not current and len(parcels) == count
    return parcels


def perfect_fractional_hstar(H: AuxGraph, w_v: FracMatching) -> FracMatching:
    """Extend unit-mass weights on v-edges to a perfect fractional matching of H*.

    Projects ``w_v`` to the base triples, extends that to a perfect fractional
    matching of the complete 3-graph on [n], and hands the added weight to
    the u-labels in unit parcels. Needs k = 3 and n = 3(m + r).
    """
    if H.k != 3:
        raise PreconditionError(f"needs a 3-graph base, got k={H.k}")
    if H.base_n != 3 * (H.m + H.r):
        raise PreconditionError("needs n = 3(m + r) so a perfect matching can exist")
    proj = project_aux(H, w_v)
    full = extend_complete3(H.base_n, proj)
    added = {e: x - proj.weights.get(e, ZERO) for e, x in full.weights.items()}
    parcels = distribute_to_u({e: x for e, x in added.items() if x}, H.r)
    weights = dict(w_v.weights)
    for j, parcel in enumerate(parcels, start=1):
        u = H.u(j)
        for e, x in parcel.items():
            weights[e + (u,)] = weights.get(e + (u,), ZERO) + x
    return FracMatching(weights)
