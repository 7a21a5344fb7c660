"""Command-line interface.

Exit codes: 0 success (or every requested property holds), 1 a property
fails, 2 usage or schema error, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import ample
from .amalgam import AmalgamInstance, classify_amalgam
from .census import run_census
from .errors import AmpleError, InputError, ResourceError
from .families import parse_family_spec, build
from .pbij import format_pbij
from .semigroup import set_cache_dir, set_closure_cap

FAMILY_SCHEMA = "ampleamalgam/family@1"
CENSUS_SUMMARY_SCHEMA = "ampleamalgam/census-summary@1"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

PROPERTIES = {
    "right-ample": ample.is_right_ample,
    "left-ample": ample.is_left_ample,
    "ample": ample.is_ample,
    "rich-right-ample": ample.is_rich_right_ample,
    "rich-left-ample": ample.is_rich_left_ample,
    "rich-ample": ample.is_rich_ample,
    "ultra-rich-right-ample": ample.is_ultra_rich_right_ample,
    "ultra-rich-left-ample": ample.is_ultra_rich_left_ample,
    "ultra-rich-ample": ample.is_ultra_rich_ample,
}


def _emit(args, obj, text_lines):
    if args.format == "json":
        print(json.dumps(obj, sort_keys=False))
    else:
        for line in text_lines:
            print(line)


def _witness_text(w):
    if not w:
        return ""
    return "  " + " ".join(f"{k}={v}" for k, v in w.items())


def _table(rows, header):
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    out.extend(fmt.format(*(str(c) for c in r)) for r in rows)
    return out


def cmd_family(args) -> int:
    spec = parse_family_spec(args.spec)
    S = build(spec)
    obj = {"schema": FAMILY_SCHEMA, "family": str(spec), "size": len(S)}
    if args.list:
        obj["elements"] = [format_pbij(e) for e in S]
    lines = [f"{spec}: {len(S)} elements"]
    if args.list:
        lines.extend(format_pbij(e) for e in S)
    _emit(args, obj, lines)
    return EXIT_OK


def cmd_check(args) -> int:
    S = build(parse_family_spec(args.S))
    T = build(parse_family_spec(args.T))
    if not S.issubset(T) or S.degree != T.degree:
        raise InputError(f"{args.S} is not contained in {args.T}")
    status = EXIT_OK
    for prop in args.properties:
        if prop == "classify":
            c = ample.classify(S, T)
            _emit(args, c.to_json(),
                  [f"classify  right={c.right} left={c.left} two-sided={c.two_sided} "
                   f"inverse-closed={c.inverse_closed} group={c.group}"])
            continue
        rep = PROPERTIES[prop](S, T)
        js = rep.to_json()
        _emit(args, js, [f"{prop}  holds={str(rep.holds).lower()}{_witness_text(js['witness'])}"])
        if not rep.holds:
            status = EXIT_FAIL
    return status


def cmd_classify_amalgam(args) -> int:
    inst = AmalgamInstance.load(args.instance)
    v = classify_amalgam(inst)
    js = v.to_json()
    lines = [f"strong: {v.strong}", f"weak (inverse): {v.weak_in_inverse}"]
    for s in js["steps"]:
        lines.append(f"  rung {s['rung']} [{s['axis']}] {s['outcome']}: {s['theorem']}")
    lines.extend(f"  note: {n}" for n in v.notes)
    _emit(args, js, lines)
    return EXIT_OK


def cmd_census(args) -> int:
    n = parse_family_spec(args.degree).degree if "@" in args.degree else int(args.degree)
    mode = args.mode or ("exhaustive" if n <= 2 else "generated")
    res = run_census(n, mode=mode, bound=args.generators, seed=args.seed,
                     samples=args.samples, jobs=args.jobs)
    if args.format == "json":
        for r in res.records:
            print(json.dumps(r.to_json()))
        print(json.dumps({"schema": CENSUS_SUMMARY_SCHEMA, "degree": n, "mode": res.mode,
                          "summary": res.summary, "violations": res.violations}))
    else:
        rows = [(r.descriptor, r.size, r.right, r.left, r.two_sided,
                 int(r.inverse_closed), int(r.unipotent), int(r.group), int(r.full)) for r in res.records]
        if args.list:
            for line in _table(rows, ("generators", "size", "right", "left", "two-sided",
                                      "inv", "unip", "group", "full")):
                print(line)
        print(f"census I@{n} ({res.mode}): {json.dumps(res.summary)}")
        for v in res.violations:
            print(f"VIOLATION {v}")
    return EXIT_OK if res.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=None, help="closure size cap")
    common.add_argument("--cache-dir", default=None, help="persist Cayley tables here "
                        "(overrides AMPLEAMALGAM_CACHE_DIR)")
    common.add_argument("--list", action="store_true", help="print elements / records")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ampleamalgam", parents=[common],
                                description="Ample subsemigroups of I_n and amalgam verdicts.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("family", parents=[common], help="build a named family")
    f.add_argument("spec", help='e.g. "I@4", "DI@3", "SYM@5", "MONO@3:{(1,2),(2,3),(3,1)}"')
    f.set_defaults(func=cmd_family)

    c = sub.add_parser("check", parents=[common], help="check hierarchy properties: S in T PROP...")
    c.add_argument("S")
    c.add_argument("in_", metavar="in", choices=["in"])
    c.add_argument("T")
    c.add_argument("properties", nargs="+", choices=sorted(PROPERTIES) + ["classify"])
    c.set_defaults(func=cmd_check)

    a = sub.add_parser("classify-amalgam", parents=[common], help="verdict for an amalgam instance file")
    a.add_argument("instance")
    a.set_defaults(func=cmd_classify_amalgam)

    z = sub.add_parser("census", parents=[common], help="classify subsemigroups of I_n")
    z.add_argument("degree", help='degree n or "I@n"')
    z.add_argument("--mode", choices=("exhaustive", "generated", "sampled"), default=None)
    z.add_argument("--generators", type=int, default=2, help="generator bound")
    z.add_argument("--samples", type=int, default=200)
    z.add_argument("--jobs", type=int, default=1)
    z.set_defaults(func=cmd_census)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.cache_dir:
        set_cache_dir(args.cache_dir)
    set_closure_cap(args.cap)
    try:
        return _dispatch(args)
    finally:
        set_closure_cap(None)
        if args.cache_dir:
            set_cache_dir(None)


def _dispatch(args) -> int:
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (AmpleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
