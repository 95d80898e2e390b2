"""Command-line verification harness and identity emitter.

Subcommands:

  verify-pair      check a registry pair against the Bailey defining relation
  verify-identity  run the full sum/alpha/character chain for one cell
  catalog          verify and emit every identity up to a level bound
  character        print a principal character's coefficients

Exit codes: 0 success, 1 verification failure, 2 usage or range error,
3 data error (bad registry file).  The environment variables QBAILEY_ORDER
and QBAILEY_REGISTRY supply a default truncation order and an alternate
registry path.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .bailey import RegistryError, registry_pair, verify_pair
from .characters import ModuleLabel, char_product, char_qtpi
from .lattice import KINDS
from .records import (
    IdentityRecord,
    build_record,
    catalog_cells,
    emit_json,
    emit_latex,
    emit_text,
    record_latex,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DATA = 3


def _default_order() -> int:
    raw = os.environ.get("QBAILEY_ORDER")
    if raw is None:
        return 40
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(EXIT_USAGE)


def _registry_path() -> str | None:
    return os.environ.get("QBAILEY_REGISTRY")


def cmd_verify_pair(args) -> int:
    try:
        pair = registry_pair(args.pair, _registry_path())
    except RegistryError as exc:
        print(f"registry error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    results = verify_pair(pair, args.n_max, args.order)
    for n, ok in enumerate(results):
        print(f"n={n}: {'ok' if ok else 'FAIL'}")
    if all(results):
        print(f"pair {args.pair}: defining relation holds for n <= {args.n_max} "
              f"to order {args.order}")
        return EXIT_OK
    first = results.index(False)
    print(f"pair {args.pair}: FAILED first at n={first}", file=sys.stderr)
    return EXIT_VERIFY_FAILED


def cmd_verify_identity(args) -> int:
    try:
        rec = build_record(args.pair, args.schedule, args.k, args.i, args.order)
    except RegistryError as exc:
        print(f"registry error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        print(json.dumps(rec.to_json_dict(), indent=2))
    elif args.format == "latex":
        print(record_latex(rec))
    else:
        print(emit_text([rec]), end="")
    return EXIT_OK if rec.status == "verified" else EXIT_VERIFY_FAILED


def _build_cell(cell_order) -> IdentityRecord:
    (pid, kind, k, i), order = cell_order
    return build_record(pid, kind, k, i, order)


def cmd_catalog(args) -> int:
    if args.max_level < 2:
        print("error: --max-level must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        cells = catalog_cells(args.max_level)
        work = [(c, args.order) for c in cells]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                records = list(pool.map(_build_cell, work))
        else:
            records = [_build_cell(w) for w in work]
    except RegistryError as exc:
        print(f"registry error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.format == "json":
        out = emit_json(records, args.max_level, args.order)
    elif args.format == "latex":
        out = emit_latex(records)
    else:
        out = emit_text(records)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        print(out, end="")
    failed = [r for r in records if r.status != "verified"]
    if failed:
        for r in failed:
            print(f"FAILED: pair {r.pair_id} {r.kind} k={r.k} i={r.i}",
                  file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_character(args) -> int:
    try:
        m = ModuleLabel(args.s0, args.s1)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    series = char_product(m, args.order)
    print(f"module ({m.s0},{m.s1}): level {m.level}, modulus {m.modulus}")
    print(series.to_text())
    if args.qtpi:
        other = char_qtpi(m, args.order)
        if series.eq_to_order(other, args.order):
            print(f"product and quintuple-product forms agree to order {args.order}")
        else:
            print("FORMS DISAGREE", file=sys.stderr)
            return EXIT_VERIFY_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbailey",
        description="verify and emit sum/product identities for principal "
                    "characters via Bailey-lattice schedules",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    order_kw = dict(type=int, default=_default_order(),
                    help="truncation order (default: QBAILEY_ORDER or 40)")

    p = sub.add_parser("verify-pair", help="check the Bailey defining relation")
    p.add_argument("--pair", type=int, required=True)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--order", **order_kw)
    p.set_defaults(func=cmd_verify_pair)

    p = sub.add_parser("verify-identity", help="verify one catalog cell")
    p.add_argument("--pair", type=int, required=True)
    p.add_argument("--schedule", choices=KINDS, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--order", **order_kw)
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.set_defaults(func=cmd_verify_identity)

    p = sub.add_parser("catalog", help="verify and emit all identities up to a level")
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("--order", **order_kw)
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    p.add_argument("--output", help="write to a file instead of stdout")
    p.add_argument("--jobs", type=int, default=1,
                   help="verify cells in parallel processes")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("character", help="print a principal character")
    p.add_argument("--s0", type=int, required=True)
    p.add_argument("--s1", type=int, required=True)
    p.add_argument("--order", **order_kw)
    p.add_argument("--qtpi", action="store_true",
                   help="cross-check the quintuple-product evaluation")
    p.set_defaults(func=cmd_character)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
