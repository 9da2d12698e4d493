"""Command-line entry point: ``uq-adjoint verify|tables|decompose|matrix``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .modcat import block_indices
from .verify import (
    CHECKS,
    InvalidL,
    build_A,
    build_Aprime,
    build_D,
    expected_multiplicities,
    max_l,
    run_verification,
)


def _fmt_label(d: dict) -> str:
    return f"{d['kind']}({d['weight']})^{d['multiplicity']}"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_verify(args) -> int:
    checks = None
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    report = run_verification(args.l, checks, allow_large=args.allow_large)
    _emit(report.dumps() if args.format == "json" else report.to_text(), args.out)
    return 0 if report.passed else 1


def _cmd_tables(args) -> int:
    table = expected_multiplicities(args.l)
    if args.format == "json":
        print(json.dumps({"l": args.l, "entries": table.to_json(), "total_dim": table.total_dim()}, indent=2))
    else:
        print(" + ".join(_fmt_label(d) for d in table.to_json()))
        print(f"total dimension {table.total_dim()} = {args.l}^3")
    return 0


def _check_cap(l: int, allow_large: bool) -> None:
    expected_multiplicities(l)  # validates parity
    if l > max_l(allow_large):
        raise InvalidL(f"l = {l} exceeds the configured maximum {max_l(allow_large)}")


def _cmd_decompose(args) -> int:
    from .decomp import casimir_block_filtration, decompose, decompose_adjoint, ad_candidates
    from .smallqg import small_quantum_group

    _check_cap(args.l, args.allow_large)
    U = small_quantum_group(args.l)
    if args.target == "ad":
        dec = decompose_adjoint(U)
    else:
        js = [bi.j for bi in block_indices(U.K)]
        if args.j not in js:
            print(f"--j must be one of {js}", file=sys.stderr)
            return 2
        dec = decompose(casimir_block_filtration(U, args.j).block, ad_candidates(U.K))
    ok = dec.verify()
    if args.format == "json":
        print(json.dumps({"l": args.l, "target": args.target, "j": args.j,
                          "decomposition": dec.to_json(), "certificates_verified": ok}, indent=2))
    else:
        print(" + ".join(_fmt_label(d) for d in dec.to_json()))
        print(f"certificates verified: {ok}")
    return 0 if ok else 1


def _cmd_matrix(args) -> int:
    from .cyclotomic import field

    _check_cap(args.l, args.allow_large)
    K = field(args.l)
    js = [bi.j for bi in block_indices(K)]
    if args.j not in js:
        print(f"--j must be one of {js}", file=sys.stderr)
        return 2
    if args.kind == "A":
        pm = build_A(K, args.j)
    elif args.kind == "Aprime":
        pm = build_Aprime(K, args.j)
    else:
        if args.k is None:
            print("--k is required for --kind D", file=sys.stderr)
            return 2
        pm = build_D(K, args.j, args.k)
    if args.format == "json":
        print(json.dumps(pm.to_json(), indent=2))
    else:
        for row in pm.entries.rows:
            print("  ".join(str(x) for x in row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uq-adjoint", description="Adjoint representation of u_q(sl2) at odd roots of unity.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="text"):
        sp.add_argument("--l", type=int, required=True, help="odd order of the root of unity")
        sp.add_argument("--format", choices=("json", "text"), default=fmt_default)
        sp.add_argument("--allow-large", action="store_true", help="permit l = 9 (slow)")

    v = sub.add_parser("verify", help="run the verification pipeline")
    common(v)
    v.add_argument("--checks", help="comma-separated subset of: " + ",".join(CHECKS))
    v.add_argument("--out", help="write the report to this path")
    v.set_defaults(func=_cmd_verify)

    t = sub.add_parser("tables", help="expected multiplicities only")
    common(t)
    t.set_defaults(func=_cmd_tables)

    d = sub.add_parser("decompose", help="decompose ad or one Casimir block ad_j")
    common(d)
    d.add_argument("--target", choices=("ad", "ad-block"), default="ad")
    d.add_argument("--j", type=int, default=-1)
    d.set_defaults(func=_cmd_decompose)

    m = sub.add_parser("matrix", help="print A(j), D(j,k) or A'(j)")
    common(m)
    m.add_argument("--kind", choices=("A", "D", "Aprime"), required=True)
    m.add_argument("--j", type=int, required=True)
    m.add_argument("--k", type=int)
    m.set_defaults(func=_cmd_matrix)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InvalidL as exc:
        print(f"invalid l: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
