"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 mathematical domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .fields import FieldError, QQ, PrimeField, is_prime
from .level import DomainError, char_group, p1_list
from .linalg import InvarianceError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3

SCHEMA_PATH = Path(__file__).with_name("schema.json")


class UsageError(Exception):
    pass


def _field_arg(text: str):
    text = text.strip().lower()
    if text in ("q", "qq"):
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise UsageError(f"bad prime in --field {text!r}") from None
        if not is_prime(p):
            raise UsageError(f"--field fp:{p}: {p} is not prime")
        return PrimeField(p)
    raise UsageError(f"unknown field {text!r}; use q or fp:P")


def _exps_arg(text: str) -> dict:
    out = {}
    for part in text.split(","):
        try:
            d, r = part.split(":")
            out[int(d)] = out.get(int(d), 0) + int(r)
        except ValueError:
            raise UsageError(f"bad --exps entry {part!r}; expected d:r") from None
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=1)

    space_args = _Parser(add_help=False)
    space_args.add_argument("--level", type=int, required=True)
    space_args.add_argument("--weight", type=int, required=True)
    space_args.add_argument("--char", type=int, default=0)
    space_args.add_argument("--field", default="q")

    parser = _Parser(prog="modsym", description="Modular symbols for Gamma_0(N) with character.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("p1", parents=[common], help="list P^1(Z/N)")
    p.add_argument("--level", type=int, required=True)

    sub.add_parser("space", parents=[common, space_args], help="space dimensions")

    p = sub.add_parser("hecke", parents=[common, space_args], help="Hecke operator matrix")
    p.add_argument("--op", type=int, required=True)
    p.add_argument("--sub", choices=["full", "cusp", "plus"], default="full")

    p = sub.add_parser("qexp", parents=[common, space_args], help="q-expansion basis")
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--sub", choices=["full", "cusp", "plus"], default="plus")

    p = sub.add_parser("eigenforms", parents=[common, space_args], help="eigenform classes")
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--sub", choices=["full", "cusp", "plus"], default="plus")

    p = sub.add_parser("oracle", help="independent power-series and dimension oracle")
    osub = p.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    o = osub.add_parser("eta", parents=[common])
    o.add_argument("--exps", required=True)
    o.add_argument("--prec", type=int, required=True)
    o = osub.add_parser("dim", parents=[common])
    o.add_argument("--level", type=int, required=True)
    o.add_argument("--weight", type=int, required=True)
    return parser


def _space(args):
    from .manin import build_space

    field = _field_arg(args.field)
    if args.level < 1:
        raise UsageError("--level must be positive")
    if args.weight < 2:
        raise UsageError("--weight must be at least 2")
    if field.characteristic in (2, 3):
        raise DomainError(f"characteristic {field.characteristic} is not supported")
    group = char_group(args.level, field)
    if not 0 <= args.char < len(group):
        raise UsageError(f"--char {args.char} out of range 0..{len(group) - 1}")
    return build_space(args.level, args.weight, group[args.char], field)


def _context(args, space):
    from .hecke import HeckeContext

    return HeckeContext(space, threads=args.threads)


def run_job(args):
    """Execute a parsed job; returns (document, table rows)."""
    cmd = args.command
    if cmd == "p1":
        if args.level < 1:
            raise UsageError("--level must be positive")
        pts = p1_list(args.level)
        doc = {"level": str(args.level), "size": str(len(pts)), "elements": [[str(u), str(v)] for u, v in pts]}
        rows = [["index", "u", "v"]] + [[str(i), str(u), str(v)] for i, (u, v) in enumerate(pts)]
        return doc, rows
    if cmd == "space":
        dims = _space(args).dimensions()
        doc = {k: str(v) for k, v in dims.items()}
        return doc, [["quantity", "value"]] + [[k, str(v)] for k, v in dims.items()]
    if cmd == "hecke":
        if args.op < 1:
            raise UsageError("--op must be positive")
        space = _space(args)
        ctx = _context(args, space)
        m = ctx.on_subspace(args.op, space.subspace(args.sub))
        doc = {"n": str(args.op), "subspace": args.sub, "matrix": _strs(m.to_json())}
        return doc, [[str(x) for x in r] for r in doc["matrix"]]
    if cmd == "qexp":
        from .hecke import HeckeAlgebra

        if args.prec < 1:
            raise UsageError("--prec must be positive")
        space = _space(args)
        alg = HeckeAlgebra(_context(args, space), args.sub)
        F = space.field
        doc = [[_str(F.format(c)) for c in row] for row in alg.qexp_basis(args.prec)]
        header = ["form"] + [f"a{n}" for n in range(1, args.prec + 1)]
        return doc, [header] + [[str(i)] + row for i, row in enumerate(doc)]
    if cmd == "eigenforms":
        from .decompose import eigenform_classes
        from .hecke import HeckeAlgebra

        if args.prec < 1:
            raise UsageError("--prec must be positive")
        space = _space(args)
        alg = HeckeAlgebra(_context(args, space), args.sub)
        classes = eigenform_classes(alg, args.prec)
        doc = [c.to_json() for c in classes]
        for d in doc:
            d["degree"] = str(d["degree"])
        rows = [["class", "degree", "modulus"] + [f"a{n}" for n in range(1, args.prec + 1)]]
        for i, d in enumerate(doc):
            rows.append([str(i), d["degree"], " ".join(d["modulus"])] + [" ".join(a) for a in d["an"]])
        return doc, rows
    if cmd == "oracle":
        from .oracle import OracleError, dim_cuspforms, eta_quotient

        try:
            if args.oracle_command == "eta":
                if args.prec < 0:
                    raise UsageError("--prec must be non-negative")
                s = eta_quotient(_exps_arg(args.exps), args.prec)
                doc = [str(c) for c in s.coeffs]
                return doc, [["n", "a_n"]] + [[str(i), c] for i, c in enumerate(doc)]
            if args.level < 1:
                raise UsageError("--level must be positive")
            d = dim_cuspforms(args.level, args.weight)
            doc = {"level": str(args.level), "weight": str(args.weight), "dim_cuspforms": str(d)}
            return doc, [["quantity", "value"]] + [[k, v] for k, v in doc.items()]
        except OracleError as exc:
            raise DomainError(str(exc)) from None
    raise UsageError(f"unknown command {cmd!r}")


def _str(x):
    return x if isinstance(x, str) else [str(y) for y in x]


def _strs(rows):
    return [[_str(x) for x in r] for r in rows]


def format_table(rows) -> str:
    if not rows:
        return ""
    width = max(len(r) for r in rows)
    rows = [list(r) + [""] * (width - len(r)) for r in rows]
    widths = [max(len(str(r[j])) for r in rows) for j in range(width)]
    return "\n".join(
        "  ".join(str(c).rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows
    )


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "seed", None) is not None:
            os.environ["MODSYM_SEED"] = str(args.seed)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be at least 1")
        doc, rows = run_job(args)
    except UsageError as exc:
        print(f"modsym: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (DomainError, FieldError, InvarianceError) as exc:
        print(f"modsym: domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    if args.format == "table":
        print(format_table(rows), file=stdout)
    else:
        print(json.dumps(doc, sort_keys=True), file=stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
