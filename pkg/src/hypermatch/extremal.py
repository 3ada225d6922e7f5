"""The two extremal configurations S(n,m,k), D(n,m,k) and the bound f(n,m,k).

Everything is integer or Fraction arithmetic; nothing here touches floats.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

from .core import Family, KGraph, PreconditionError
from .matcher import AuxGraph, reduce_H


def _check(n: int, m: int, k: int, slack: int = 0) -> None:
    if k < 1 or m < 1:
        raise PreconditionError(f"need k >= 1 and m >= 1, got k={k}, m={m}")
    if n < k * m - slack:
        bound = "km - 1" if slack else "km"
        raise PreconditionError(f"need n >= {bound}, got n={n}, m={m}, k={k}")


def s_size(n: int, m: int, k: int) -> int:
    return comb(n, k) - comb(n - m + 1, k)


def d_size(n: int, m: int, k: int) -> int:
    return comb(k * m - 1, k)


def f_bound(n: int, m: int, k: int) -> int:
    """max{C(n,k) - C(n-m+1,k), C(km-1,k)}; defined for n >= km - 1."""
    _check(n, m, k, slack=1)
    return max(s_size(n, m, k), d_size(n, m, k))


def make_S(n: int, m: int, k: int) -> KGraph:
    """All k-subsets of [n] meeting [m-1]."""
    _check(n, m, k)
    return KGraph(n, k, tuple(e for e in combinations(range(1, n + 1), k) if e[0] < m))


def make_D(n: int, m: int, k: int) -> KGraph:
    """All k-subsets of [km-1], on vertex set [n]."""
    _check(n, m, k)
    return KGraph.complete(n, k, on=range(1, k * m))


def make_HS(n: int, m: int, k: int) -> AuxGraph:
    return reduce_H(Family.copies(make_S(n, m, k), m))


def make_HD(n: int, m: int, k: int) -> AuxGraph:
    return reduce_H(Family.copies(make_D(n, m, k), m))


def _shape(H) -> tuple[int, int, frozenset]:
    if isinstance(H, AuxGraph):
        return H.n_vertices, H.k + 1, H.edge_set
    return H.n, H.k, H.edge_set


def closeness(H1, H2) -> Fraction:
    """|E(H1) minus E(H2)| / |V|^k.

    H2 is eps-close to H1 exactly when this is <= eps. Not symmetric.
    """
    if type(H1) is not type(H2):
        raise PreconditionError("closeness needs two KGraphs or two AuxGraphs")
    if isinstance(H1, AuxGraph) and (H1.base_n, H1.m, H1.r) != (H2.base_n, H2.m, H2.r):
        raise PreconditionError("aux graphs have different vertex classes")
    nv, k, e1 = _shape(H1)
    nv2, k2, e2 = _shape(H2)
    if (nv, k) != (nv2, k2):
        raise PreconditionError(f"vertex set/uniformity mismatch: ({nv},{k}) vs ({nv2},{k2})")
    if nv == 0:
        return Fraction(0)
    return Fraction(len(e1 - e2), nv ** k)


def is_close(H1, H2, eps) -> bool:
    """True iff H2 is eps-close to H1."""
    return closeness(H1, H2) <= Fraction(eps)


def check_f_superadditivity(n: int, m: int, k: int) -> bool:
    """f(n,m,k) >= f(n-1,m-1,k) + C(n-1,k-1)."""
    if m < 2:
        raise PreconditionError(f"need m >= 2, got m={m}")
    _check(n, m, k, slack=1)
    return f_bound(n, m, k) >= f_bound(n - 1, m - 1, k) + comb(n - 1, k - 1)


def check_f_shift_ineq(x: int, y: int, a: int, which: str) -> bool:
    """One of the two shift inequalities for f(., ., 3).

    ``first``:  f(x,y,3) >= f(x,y-a,3) + C(a,3)
    ``second``: f(x,y,3) >= f(x,y+a,3) - 3 a x^2

    Every f value involved must be inside f's domain (x >= 3y' - 1);
    outside it the second inequality is false in general.
    """
    if min(x, y, a) < 1 or a >= y:
        raise PreconditionError(f"need positive x, y, a with a < y, got {(x, y, a)}")
    if which == "first":
        return f_bound(x, y, 3) >= f_bound(x, y - a, 3) + comb(a, 3)
    if which == "second":
        return f_bound(x, y, 3) >= f_bound(x, y + a, 3) - 3 * a * x * x
    raise ValueError(f"which must be 'first' or 'second', got {which!r}")


def s_distance_lower_bound(n: int, m: int, k: int) -> Fraction:
    """Lower bound on |E(H_S(n,m,k)) minus E(H(F))| under the degree cap.

    If every d_{F_i}(v) <= C(n-1,k-1) - C(n-k(m-1)-1,k-1), each of the m-1
    full-degree vertices of S misses at least C(n-k(m-1)-1,k-1) edges in
    every member, and an edge is counted at most k times.
    """
    _check(n, m, k)
    return Fraction(m * (m - 1) * comb(n - k * (m - 1) - 1, k - 1), k)
