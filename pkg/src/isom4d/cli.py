"""isom4d command line: catalog dumps, type-(R) checks, stabilizers, realizations, verify-all.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 ok, 1 verify-all
found mismatches, 2 bad arguments or unknown identifiers, 3 a stabilizer
report disagrees with the announced group.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .catalog import CATALOG, NON_TYPE_R, AlgebraId, probe_family, resolve_name
from .errors import Isom4dError, UnknownAlgebra, UnknownGroup
from .lietheory import is_type_R
from .linalg import RatMat, to_fraction
from .metrics import metric_from_u
from .sampling import sample_algebra

METRIC_FLAGS = ("alpha", "beta", "gamma", "delta", "lambda", "mu", "nu", "eta")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_STAB_MISMATCH = 0, 1, 2, 3


def _dump(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _kv(items, what: str) -> dict[str, Fraction]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ValueError(f"{what} must look like NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = to_fraction(v.strip())
    return out


def _resolve(name: str) -> str:
    try:
        return resolve_name(name)
    except UnknownAlgebra:
        raise UnknownGroup(f"unknown algebra or group {name!r}") from None


def _algebra_id(name: str, items) -> AlgebraId:
    given = _kv(items, "--algebra-param")
    return AlgebraId.make(name, given or None)


def _parse_u(text: str) -> RatMat:
    rows = [r for r in text.split(";") if r.strip()]
    return RatMat([[to_fraction(x.strip()) for x in r.split(",")] for r in rows])


# -- subcommands ----------------------------------------------------------------

def cmd_catalog(args) -> int:
    names = None if not args.algebra else [_resolve(a) for a in args.algebra]
    sys.stdout.write(CATALOG.dumps(names))
    return EXIT_OK


def cmd_check_type_r(args) -> int:
    names = CATALOG.names() if not args.algebra else [_resolve(a) for a in args.algebra]
    rows = []
    for name in names:
        rng = random.Random(f"{args.seed}:{name}")
        for k in range(args.samples):
            aid = sample_algebra(name, rng) if k else _algebra_id(name, args.algebra_param if len(names) == 1 else None)
            rows.append({"algebra": name, "params": {p: str(v) for p, v in aid.values.items()},
                         "type_r": is_type_R(CATALOG.get_algebra(aid), seed=args.seed + k)})
    _dump(rows)
    return EXIT_OK


def cmd_stabilizer(args) -> int:
    from .stabilizer import isometry_report, report_for_metric

    name = _resolve(args.algebra)
    aid = _algebra_id(name, args.algebra_param)
    params = {k: to_fraction(getattr(args, k if k != "lambda" else "lambda_"))
              for k in METRIC_FLAGS if getattr(args, k if k != "lambda" else "lambda_") is not None}
    params.update(_kv(args.param, "--param"))
    if args.metric_u:
        M = metric_from_u(_parse_u(args.metric_u))
        rep = report_for_metric(aid, M, args.case or "custom", {}, None)
    elif name in NON_TYPE_R:
        f = probe_family(name)
        if args.case and args.case.upper() != f.case:
            raise ValueError(f"{name} has only the diagonal probe metric (case {f.case})")
        for p in f.params:
            params.setdefault(p.name, Fraction(1))
        rep = isometry_report(aid, f, params)
    else:
        if not args.case:
            raise ValueError("--case is required")
        rep = isometry_report(aid, CATALOG.get_family(name, args.case), params)
    out = rep.to_json()
    _dump(out)
    if rep.match is False:
        print(f"MISMATCH: expected {rep.expected}, computed {rep.stabilizer.label}", file=sys.stderr)
        return EXIT_STAB_MISMATCH
    print(rep.decomposition, file=sys.stderr)
    return EXIT_OK


def cmd_realize(args) -> int:
    from .realization import find_basis_match, make_point

    coords = {k: float(v) for k, v in _kv(args.coord, "--coord").items()}
    params = _kv(args.param, "--param") or None
    p = make_point(args.group, coords, params)
    out = p.to_json()
    if args.brackets:
        out["basis_match"] = find_basis_match(args.group, params).describe()
    _dump(out)
    return EXIT_OK


def cmd_verify_all(args) -> int:
    from .verify import verify_all, write_golden

    if args.regenerate_golden:
        for path in write_golden(args.samples, args.seed):
            print(f"wrote {path}", file=sys.stderr)
        return EXIT_OK
    algebras = [_resolve(a) for a in args.algebra] if args.algebra else None
    res = verify_all(args.samples, args.seed, jobs=args.jobs, algebras=algebras)
    _dump(res.to_json(with_reports=not args.summary))
    print(f"{res.matched}/{res.total} checks matched", file=sys.stderr)
    return EXIT_OK if res.ok else EXIT_MISMATCH


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isom4d", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="dump algebras, templates and metric families as JSON")
    p.add_argument("--algebra", action="append", help="restrict to this algebra (repeatable)")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("check-type-r", help="decide type (R) by Sturm sequences")
    p.add_argument("--algebra", action="append")
    p.add_argument("--algebra-param", action="append", metavar="NAME=VALUE")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check_type_r)

    p = sub.add_parser("stabilizer", help="isometric automorphism group of one metric")
    p.add_argument("--algebra", required=True)
    p.add_argument("--case")
    p.add_argument("--algebra-param", action="append", metavar="NAME=VALUE")
    for flag in METRIC_FLAGS:
        p.add_argument(f"--{flag}", dest=flag if flag != "lambda" else "lambda_", metavar="P/Q")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="any metric parameter")
    p.add_argument("--metric-u", help="explicit upper-triangular U, rows split by ';', entries by ','")
    p.set_defaults(func=cmd_stabilizer)

    p = sub.add_parser("realize", help="evaluate a matrix model at given coordinates")
    p.add_argument("--group", required=True)
    p.add_argument("--coord", action="append", metavar="NAME=VALUE")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="group parameter")
    p.add_argument("--brackets", action="store_true", help="also report the tangent basis matching")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify-all", help="run every check over seeded samples")
    p.add_argument("--samples", type=int, default=2)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--algebra", action="append")
    p.add_argument("--summary", action="store_true", help="omit the per-report list")
    p.add_argument("--regenerate-golden", action="store_true")
    p.set_defaults(func=cmd_verify_all)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UnknownGroup, UnknownAlgebra) as exc:
        print(f"UnknownGroup: {exc}", file=sys.stderr)
    except (Isom4dError, ValueError, KeyError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
