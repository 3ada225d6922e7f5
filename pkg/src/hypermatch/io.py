"""Text formats for k-graphs, families and auxiliary graphs.

    khg 1 <k> <n>              one edge per line
    khf 1 <k> <n> <m>          blocks "F <i> <count>" followed by edges
    kha 1 <k> <n> <m> <r>      edges carry a v<i> or u<j> token

Vertices are 1-based. Lines starting with '#' and blank lines are ignored.
"""

from __future__ import annotations

from pathlib import Path

from .core import Family, HypergraphError, KGraph
from .matcher import AuxGraph


class FormatError(ValueError):
    pass


def _lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("#"):
            out.append((no, s.split()))
    return out


def _ints(no: int, toks: list[str], what: str) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise FormatError(f"line {no}: {what} must be integers, got {' '.join(toks)!r}") from None


def _header(lines, tag: str, nfields: int) -> list[int]:
    if not lines:
        raise FormatError("empty input")
    no, toks = lines[0]
    if toks[0] != tag:
        raise FormatError(f"line {no}: expected '{tag}' header, got {toks[0]!r}")
    if len(toks) != nfields + 1:
        raise FormatError(f"line {no}: '{tag}' header needs {nfields} fields")
    vals = _ints(no, toks[1:], "header fields")
    if vals[0] != 1:
        raise FormatError(f"line {no}: unsupported format version {vals[0]}")
    return vals[1:]


def _edge(no: int, toks: list[str], k: int) -> tuple[int, ...]:
    e = _ints(no, toks, "edge vertices")
    if len(e) != k:
        raise FormatError(f"line {no}: expected {k} vertices, got {len(e)}")
    if any(a >= b for a, b in zip(e, e[1:])):
        raise FormatError(f"line {no}: edge vertices must be strictly increasing")
    return tuple(e)


def _graph(n: int, k: int, edges, where: str) -> KGraph:
    try:
        return KGraph(n, k, tuple(edges))
    except HypergraphError as exc:
        raise FormatError(f"{where}: {exc}") from None


def parse_kgraph(text: str) -> KGraph:
    lines = _lines(text)
    k, n = _header(lines, "khg", 3)
    return _graph(n, k, (_edge(no, t, k) for no, t in lines[1:]), "graph")


def parse_family(text: str) -> Family:
    lines = _lines(text)
    k, n, m = _header(lines, "khf", 4)
    if m < 1:
        raise FormatError("family needs m >= 1")
    members = []
    pos = 1
    for i in range(1, m + 1):
        if pos >= len(lines):
            raise FormatError(f"missing block for member {i}")
        no, toks = lines[pos]
        if len(toks) != 3 or toks[0] != "F":
            raise FormatError(f"line {no}: expected 'F {i} <count>'")
        idx, count = _ints(no, toks[1:], "block header")
        if idx != i or count < 0:
            raise FormatError(f"line {no}: expected block for member {i} with count >= 0")
        block = lines[pos + 1: pos + 1 + count]
        if len(block) != count:
            raise FormatError(f"member {i}: expected {count} edges, file ended early")
        members.append(_graph(n, k, (_edge(bn, t, k) for bn, t in block), f"member {i}"))
        pos += 1 + count
    if pos != len(lines):
        raise FormatError(f"line {lines[pos][0]}: trailing content after last member")
    return Family.of(members)


def parse_aux(text: str) -> AuxGraph:
    lines = _lines(text)
    k, n, m, r = _header(lines, "kha", 5)
    edges = []
    for no, toks in lines[1:]:
        if len(toks) != k + 1:
            raise FormatError(f"line {no}: expected {k + 1} tokens")
        e = []
        labels = 0
        for t in toks:
            if t[0] in "vu":
                j = _ints(no, [t[1:]], "label index")[0]
                top = m if t[0] == "v" else r
                if not 1 <= j <= top:
                    raise FormatError(f"line {no}: label {t} out of range")
                e.append(n + j if t[0] == "v" else n + m + j)
                labels += 1
            else:
                e.append(_ints(no, [t], "vertices")[0])
        if labels != 1:
            raise FormatError(f"line {no}: every edge needs exactly one label token")
        edges.append(tuple(e))
    try:
        return AuxGraph(n, k, m, r, tuple(edges))
    except HypergraphError as exc:
        raise FormatError(str(exc)) from None


def _edge_line(e) -> str:
    return " ".join(map(str, e))


def emit_kgraph(H: KGraph) -> str:
    return "".join([f"khg 1 {H.k} {H.n}\n"] + [_edge_line(e) + "\n" for e in H.edges])


def emit_family(F: Family) -> str:
    out = [f"khf 1 {F.k} {F.n} {F.m}\n"]
    for i, G in enumerate(F, start=1):
        out.append(f"F {i} {len(G)}\n")
        out.extend(_edge_line(e) + "\n" for e in G.edges)
    return "".join(out)


def emit_aux(H: AuxGraph) -> str:
    out = [f"kha 1 {H.k} {H.base_n} {H.m} {H.r}\n"]
    for e in H.edges:
        out.append(" ".join(map(str, e[:-1])) + " " + H.label_name(e[-1]) + "\n")
    return "".join(out)


def emit(obj) -> str:
    if isinstance(obj, KGraph):
        return emit_kgraph(obj)
    if isinstance(obj, Family):
        return emit_family(obj)
    if isinstance(obj, AuxGraph):
        return emit_aux(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse(text: str):
    """Dispatch on the header tag."""
    lines = _lines(text)
    if not lines:
        raise FormatError("empty input")
    tag = lines[0][1][0]
    parsers = {"khg": parse_kgraph, "khf": parse_family, "kha": parse_aux}
    if tag not in parsers:
        raise FormatError(f"unknown header {tag!r}")
    return parsers[tag](text)


def read(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)
