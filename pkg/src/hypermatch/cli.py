"""hypermatch command line.

Exit codes: 0 the command ran (a NONE answer included), 2 malformed input,
3 precondition violation, 4 a verify sweep found a counterexample.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import extremal, fractional, harness, io, matcher, shift
from .core import Family, HypergraphError, KGraph, PreconditionError

EXIT_OK, EXIT_FORMAT, EXIT_PRECONDITION, EXIT_COUNTEREXAMPLE = 0, 2, 3, 4


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return _fmt(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    return x


def report(pairs: list[tuple[str, object]], as_json: bool) -> None:
    if as_json:
        print(json.dumps({k: _jsonable(v) for k, v in pairs}, sort_keys=False))
    else:
        for k, v in pairs:
            print(f"{k}={_fmt(v)}")


def _edges_str(edges, name=str) -> str:
    return ";".join(" ".join(name(x) for x in e) for e in edges)


def _write(obj, out: str | None) -> None:
    text = io.emit(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str, kind):
    obj = io.read(path)
    if not isinstance(obj, kind):
        names = {KGraph: "khg", Family: "khf", matcher.AuxGraph: "kha"}
        raise io.FormatError(f"{path}: expected a '{names[kind]}' file")
    return obj


def _load_graph(path: str) -> KGraph:
    obj = io.read(path)
    if isinstance(obj, matcher.AuxGraph):
        return obj.as_kgraph()
    if not isinstance(obj, KGraph):
        raise io.FormatError(f"{path}: expected a 'khg' or 'kha' file")
    return obj


# -- commands -----------------------------------------------------------------

def cmd_gen(a) -> int:
    makers = {"S": extremal.make_S, "D": extremal.make_D,
              "HS": extremal.make_HS, "HD": extremal.make_HD}
    if a.what == "complete":
        obj = KGraph.complete(a.n, a.k)
    else:
        obj = makers[a.what](a.n, a.m, a.k)
    _write(obj, a.out)
    return EXIT_OK


def cmd_fbound(a) -> int:
    value = extremal.f_bound(a.n, a.m, a.k)
    if a.json:
        report([("f", value)], True)
    else:
        print(value)
    return EXIT_OK


def cmd_nu(a) -> int:
    H = _load_graph(a.file)
    M = matcher.max_matching(H)
    if a.json:
        report([("nu", len(M)), ("matching", M)], True)
    else:
        print(len(M))
    return EXIT_OK


def cmd_perfect(a) -> int:
    H = _load_graph(a.file)
    ok, M = matcher.has_perfect_matching(H)
    report([("perfect", ok), ("matching", _edges_str(M) if ok else "NONE")], a.json)
    return EXIT_OK


def cmd_frac(a) -> int:
    H = _load_graph(a.file)
    lp = fractional.solve_matching_lp(H)
    w = lp.matching.support()
    pairs = [("value", lp.value),
             ("perfect", lp.value * H.k == H.n),
             ("weights", ";".join(f"{' '.join(map(str, e))}:{_fmt(x)}" for e, x in sorted(w.items()))),
             ("cover", ";".join(f"{v}:{_fmt(x)}" for v, x in sorted(lp.cover.items()) if x))]
    report(pairs, a.json)
    return EXIT_OK


def cmd_rainbow(a) -> int:
    F = _load(a.file, Family)
    R = matcher.rainbow(F)
    if a.json:
        report([("rainbow", None if R is None else [[i + 1, list(e)] for i, e in R.pairs])], True)
    elif R is None:
        print("NONE")
    else:
        for i, e in R.pairs:
            print(f"F{i + 1}: {' '.join(map(str, e))}")
    return EXIT_OK


def cmd_stabilize(a) -> int:
    _write(shift.stabilize(_load(a.file, Family)), a.out)
    return EXIT_OK


def cmd_saturate(a) -> int:
    _write(shift.saturate(_load(a.file, Family)), a.out)
    return EXIT_OK


def cmd_peel(a) -> int:
    F = _load(a.file, Family)
    res = shift.peel_full_degree(F)
    _write(res.family, a.out)
    lines = [f"iteration={s.iteration} vertex={s.vertex} member={s.member + 1} "
             f"original_member={s.original_member + 1} n={s.n}\n" for s in res.log]
    if a.log:
        Path(a.log).write_text("".join(lines))
    elif a.out:
        sys.stdout.write("".join(lines))
    return EXIT_OK


def cmd_reduce(a) -> int:
    F = _load(a.file, Family)
    _write(matcher.reduce_H(F) if a.which == "H" else matcher.reduce_Hstar(F), a.out)
    return EXIT_OK


def _witness_text(w) -> str:
    return io.emit(w)


def cmd_verify(a) -> int:
    if a.which == "stability":
        if a.k != 3:
            raise PreconditionError("the stability probe is for k = 3")
        rep = harness.stability_probe(a.n, a.m, a.epsilon, a.trials, a.seed)
        neither = rep.pop("neither_witnesses")
        pairs = [("kind", "stability")] + list(rep.items())
        if neither and a.witness:
            Path(a.witness).write_text(_witness_text(neither[0]))
            pairs.append(("witness", a.witness))
        report(pairs, a.json)
        return EXIT_OK
    cfg = harness.TrialConfig(a.n, a.m, a.k, a.trials, a.seed, a.epsilon,
                              a.gamma, a.gamma_prime, a.c)
    run = harness.verify_erdos if a.which == "erdos" else harness.verify_rainbow
    v = run(cfg, workers=a.threads)
    pairs = [("kind", v.kind), ("status", v.status.value), ("n", cfg.n), ("m", cfg.m),
             ("k", cfg.k), ("trials", cfg.trials), ("seed", cfg.seed),
             ("epsilon", cfg.epsilon), ("c", cfg.c), ("gamma", cfg.gamma),
             ("gamma_prime", cfg.gamma_prime)]
    pairs += list(v.stats.items())
    pairs.append(("witnesses", len(v.witnesses)))
    if a.timings:
        pairs += [(key, f"{val:.3f}") for key, val in v.timings.items()]
    code = EXIT_OK
    if v.status is harness.Status.COUNTEREXAMPLE:
        target = a.witness or f"witness-{v.kind}.txt"
        Path(target).write_text(_witness_text(v.witness))
        pairs.append(("witness", target))
        code = EXIT_COUNTEREXAMPLE
    report(pairs, a.json)
    return code


def _parse_s(spec: str | None, F: Family) -> list[int]:
    if not spec:
        return []
    n, m = F.n, F.m
    out = []
    for tok in spec.replace(",", " ").split():
        try:
            if tok[0] == "v":
                out.append(n + int(tok[1:]))
            elif tok[0] == "u":
                out.append(n + m + int(tok[1:]))
            else:
                out.append(int(tok))
        except ValueError:
            raise io.FormatError(f"bad vertex token {tok!r} in --s-spec") from None
    return out


def cmd_absorb(a) -> int:
    F = _load(a.file, Family)
    M = harness.build_absorbing(F, a.t)
    S = _parse_s(a.s_spec, F)
    out = harness.absorb(F, M, S)
    Hs = matcher.reduce_Hstar(F)
    report([("t", a.t), ("absorbing", _edges_str(M, Hs.label_name)),
            ("matching", _edges_str(out, Hs.label_name))], a.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypermatch", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="emit reports as one JSON document")
    sub = p.add_subparsers(dest="command", required=True)

    def nmk(sp, need_m=True):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--m", type=int, required=need_m, default=1)
        sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("gen", help="emit S, D, H_S, H_D or a complete graph")
    sp.add_argument("what", choices=["S", "D", "HS", "HD", "complete"])
    nmk(sp, need_m=False)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("fbound", help="print f(n,m,k)")
    nmk(sp)
    sp.set_defaults(func=cmd_fbound)

    for name, func in (("nu", cmd_nu), ("perfect", cmd_perfect), ("frac", cmd_frac),
                       ("rainbow", cmd_rainbow)):
        sp = sub.add_parser(name)
        sp.add_argument("file")
        sp.set_defaults(func=func)

    for name, func in (("stabilize", cmd_stabilize), ("saturate", cmd_saturate)):
        sp = sub.add_parser(name)
        sp.add_argument("file")
        sp.add_argument("--out")
        sp.set_defaults(func=func)

    sp = sub.add_parser("peel")
    sp.add_argument("file")
    sp.add_argument("--out")
    sp.add_argument("--log")
    sp.set_defaults(func=cmd_peel)

    sp = sub.add_parser("reduce")
    sp.add_argument("which", choices=["H", "Hstar"])
    sp.add_argument("file")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("verify", help="seeded verification sweeps")
    sp.add_argument("which", choices=["erdos", "rainbow", "stability"])
    nmk(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--epsilon", type=Fraction, default=Fraction(1, 100))
    sp.add_argument("--c", type=Fraction, default=Fraction(1, 10))
    sp.add_argument("--gamma", type=Fraction, default=Fraction(1, 50))
    sp.add_argument("--gamma-prime", type=Fraction, default=Fraction(1, 500))
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--witness", help="where to write a counterexample witness")
    sp.add_argument("--timings", action="store_true",
                    help="append wall-clock timings (makes output non-reproducible)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("absorb")
    sp.add_argument("file")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--s-spec", help="vertices of S, e.g. 'v1,10,11,12'")
    sp.set_defaults(func=cmd_absorb)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (io.FormatError, HypergraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
