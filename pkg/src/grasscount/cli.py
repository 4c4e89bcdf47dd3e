"""Command line entry point: count, constants, hecke, sweep, verify."""
from __future__ import annotations

import argparse
import json
import sys

from ._config import CapacityError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="grasscount", description="Exact sublattice counts and checks.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("count", help="count sublattices of bounded determinant")
    c.add_argument("--lattice", required=True, help="JSON file or identity:n / diag:a,b / random:n:seed[:bound]")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--e", type=int, help="smaller rank for --variant flags")
    c.add_argument("--h2", required=True, help="squared height budget, e.g. 25 or 25/4")
    c.add_argument("--variant", choices=("primitive", "all", "avoiding", "flags"), default="primitive")
    c.add_argument("--avoid", help="JSON list of coordinate rows of S for --variant avoiding")
    c.add_argument("--generic-only", action="store_true")
    c.add_argument("--materialize", action="store_true")
    c.add_argument("--workers", type=int, default=1)

    k = sub.add_parser("constants", help="a(n,d), b(n,d), c(n,d)")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--d", type=int, required=True)

    h = sub.add_parser("hecke", help="Hecke coset representatives")
    h.add_argument("--d", type=int, required=True)
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--list", action="store_true")

    s = sub.add_parser("sweep", help="run a budget-ladder sweep")
    s.add_argument("--config", required=True)
    s.add_argument("--format", choices=("json", "csv"))
    s.add_argument("--out")

    v = sub.add_parser("verify", help="run identity checks")
    v.add_argument("--suite", default="all")
    v.add_argument("--seed", type=int, default=42)
    return p


def _count(args) -> int:
    from .counting import count_all, count_avoiding, count_flags, enumerate_primitive
    from .exact import parse_rational
    from .lattice import lattice_from_spec

    lat = lattice_from_spec(args.lattice)
    h2 = parse_rational(args.h2)
    if args.variant == "primitive":
        res = enumerate_primitive(lat, args.d, h2, materialize=args.materialize, workers=args.workers)
        out = res.to_json()
    elif args.variant == "all":
        out = count_all(lat, args.d, h2, materialize=args.materialize, workers=args.workers).to_json()
    elif args.variant == "avoiding":
        if not args.avoid:
            raise ValueError("--variant avoiding needs --avoid")
        s = json.loads(args.avoid)
        out = count_avoiding(lat, args.d, h2, s, materialize=args.materialize, workers=args.workers).to_json()
    else:
        if args.e is None:
            raise ValueError("--variant flags needs --e")
        fc = count_flags(lat, args.e, args.d, h2, generic_only=args.generic_only)
        out = {"count": fc.count, "params": {"n": lat.rank, "e": args.e, "d": args.d, "variant": "flags",
                                             "generic_only": fc.generic_only, "h2": args.h2}}
    print(json.dumps(out))
    return 0


def _constants(args) -> int:
    from .asymptotics import a_const, b_exp, c_const
    from .exact import format_rational
    from .harness import mpstr

    out = {"n": args.n, "d": args.d, "a": mpstr(a_const(args.n, args.d)),
           "b": format_rational(b_exp(args.n, args.d)), "c": mpstr(c_const(args.n, args.d))}
    print(json.dumps(out))
    return 0


def _hecke(args) -> int:
    from .arithmetic import hecke_count, hecke_reps

    out = {"d": args.d, "k": args.k, "count": hecke_count(args.d, args.k)}
    if args.list:
        out["reps"] = [[list(r) for r in rep.matrix] for rep in hecke_reps(args.d, args.k)]
    print(json.dumps(out))
    return 0


def _sweep(args) -> int:
    from .harness import SweepConfig, emit, run_sweep

    with open(args.config) as fh:
        cfg = SweepConfig.from_json(json.load(fh))
    report = run_sweep(cfg)
    text = emit(report, args.format or cfg.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _verify(args) -> int:
    from .harness import verify

    rep = verify(args.suite, args.seed)
    print(json.dumps(rep.to_json(), indent=2))
    return 0 if rep.passed else 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {"count": _count, "constants": _constants, "hecke": _hecke,
               "sweep": _sweep, "verify": _verify}[args.cmd]
    try:
        return handler(args)
    except (ValueError, CapacityError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"grasscount: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
