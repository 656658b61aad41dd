"""Command-line front end.

Exit codes: 0 success, 1 bad arguments or inputs, 2 a table coefficient
failed Hodge validation, 3 an identity check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import genfun, surface
from .errors import HodgeValidationError, NonIntegralImage, SheafgenError, UndefinedDimension
from .laurent import LaurentPoly

SCHEMA = "sheafgen/1"
DEFAULT_ORDER = 8

CSV_COLUMNS = ["family", "xiSq", "qExpQuadrupled", "dim", "chi", "xiC0", "xiG", "euler", "betti", "hodge", "ePoly"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad input; this tool reserves 2 for Hodge failures
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def default_order() -> int:
    raw = os.environ.get("SHEAFGEN_DEFAULT_ORDER")
    if raw is None:
        return DEFAULT_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"SHEAFGEN_DEFAULT_ORDER must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError("SHEAFGEN_DEFAULT_ORDER must be at least 1")
    return value


def _resolve_order(order: int | None) -> int:
    if order is None:
        return default_order()
    if order < 1:
        raise UsageError("--order must be at least 1")
    return order


def _int_list(text: str, n: int, what: str) -> list[int]:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} comma-separated integers, got {text!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"{what} needs integers, got {text!r}")


# -- encodings shared by JSON and CSV ----------------------------------------------


def encode_poly(p: LaurentPoly) -> str:
    return " ".join(f"{xd}:{yd}:{c}" for (xd, yd), c in p.terms())


def decode_poly(text: str) -> LaurentPoly:
    if not text:
        return LaurentPoly()
    return LaurentPoly({(int(a), int(b)): int(c) for a, b, c in (t.split(":") for t in text.split())})


def row_record(row: genfun.ModuliTableRow) -> dict:
    return {
        "family": row.family,
        "xiSq": row.xi_sq,
        "qExpQuadrupled": row.q_exp_quadrupled,
        "dim": row.dim,
        "chi": row.chi,
        "xi": [row.xi.c0, row.xi.g],
        "euler": row.hodge.euler,
        "betti": list(row.hodge.betti),
        "hodge": row.hodge.to_json()["hodge"],
        "ePoly": row.e_poly.to_json(),
    }


def record_to_csv_row(rec: dict) -> list[str]:
    return [
        rec["family"], str(rec["xiSq"]), str(rec["qExpQuadrupled"]), str(rec["dim"]), str(rec["chi"]),
        str(rec["xi"][0]), str(rec["xi"][1]), str(rec["euler"]),
        " ".join(str(b) for b in rec["betti"]),
        " ".join(f"{p}:{q}:{h}" for p, q, h in rec["hodge"]),
        encode_poly(LaurentPoly.from_json(rec["ePoly"])),
    ]


def csv_row_to_record(cells: dict) -> dict:
    """Inverse of :func:`record_to_csv_row`, used to check the two formats agree."""
    return {
        "family": cells["family"],
        "xiSq": int(cells["xiSq"]),
        "qExpQuadrupled": int(cells["qExpQuadrupled"]),
        "dim": int(cells["dim"]),
        "chi": int(cells["chi"]),
        "xi": [int(cells["xiC0"]), int(cells["xiG"])],
        "euler": int(cells["euler"]),
        "betti": [int(b) for b in cells["betti"].split()],
        "hodge": [[int(v) for v in t.split(":")] for t in cells["hodge"].split()],
        "ePoly": decode_poly(cells["ePoly"]).to_json(),
    }


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------


def render_table(rows: list[genfun.ModuliTableRow], fmt: str, family: str, order_desc: dict) -> str:
    records = [row_record(r) for r in rows]
    if fmt == "json":
        return _dump_json({"schema": SCHEMA, "family": family, **order_desc, "rows": records})
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(record_to_csv_row(rec))
        return buf.getvalue()
    blocks = []
    for row in rows:
        head = (f"xiSq={row.xi_sq}  dim={row.dim}  chi={row.chi}  xi={row.xi.c0}*C0{row.xi.g:+d}*g"
                f"  euler={row.hodge.euler}  betti={' '.join(map(str, row.hodge.betti))}")
        blocks.append(head + "\n" + row.hodge.diamond())
    return "\n\n".join(blocks) + "\n"


def cmd_table(args) -> int:
    if args.max_dim is not None:
        if args.order is not None:
            raise UsageError("give --order or --max-dim, not both")
        if args.max_dim < 1:
            raise UsageError("--max-dim must be at least 1")
        rows = genfun.moduli_table(args.family, max_dim=args.max_dim)
        desc = {"maxDim": args.max_dim}
    else:
        order = _resolve_order(args.order)
        rows = genfun.moduli_table(args.family, order=order)
        desc = {"order": order}
    _emit(render_table(rows, args.format, args.family, desc), args.output)
    return 0


def cmd_verify(args) -> int:
    order = _resolve_order(args.order)
    reports = genfun.verify(args.identity, order)
    ok = all(r.passed for r in reports)
    timing = not args.no_timing
    if args.format == "json":
        text = _dump_json({
            "schema": SCHEMA,
            "status": "PASS" if ok else "FAIL",
            "reports": [r.to_json(timing=timing) for r in reports],
        })
    else:
        lines = []
        for r in reports:
            line = f"{r.status}  {r.identity}  order={r.order}"
            if timing:
                line += f"  ({r.wall_time_ms:.1f} ms)"
            if r.first_mismatch is not None:
                m = r.first_mismatch
                lhs, rhs = LaurentPoly.from_json(m["lhs"]), LaurentPoly.from_json(m["rhs"])
                line += f"\n    first mismatch at q^({m['expQuadrupled']}/4): {lhs} != {rhs}"
            if r.detail:
                line += f"\n    {r.detail}"
            lines.append(line)
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return 0 if ok else 3


def cmd_dim(args) -> int:
    c0, g = _int_list(args.xi, 2, "--xi")
    model = surface.SurfaceModel(args.e)
    mc = surface.ModuliClass(args.r, surface.DivisorClass(c0, g), args.chi)
    try:
        d = surface.dim_moduli(model, mc)
    except UndefinedDimension as exc:
        raise UsageError(str(exc))
    _emit(f"{d}\n", args.output)
    return 0


def _fmt_a(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def cmd_fm(args) -> int:
    r, s, t, a2 = _int_list(args.v, 4, "--v")
    v = surface.ChernVector(r, s, t, a2)
    try:
        if args.e == -1:
            image = surface.fm_e_minus1(v)
            pair = surface.fm_canonical_invariance(v)
        else:
            image = surface.fm_e0(v)
            pair = None
    except NonIntegralImage as exc:
        raise UsageError(str(exc))
    vec = f"{image.r},{image.s},{image.t},{_fmt_a(image.a)}"
    if args.format == "json":
        out = {"schema": SCHEMA, "e": args.e, "input": [r, s, t, a2], "imageDoubled": [image.r, image.s, image.t, image.a2],
               "image": vec}
        if pair is not None:
            out["c1DotK"] = list(pair)
        text = _dump_json(out)
    else:
        text = vec + "\n"
        if pair is not None:
            text += f"c1.K: {pair[0]} -> {pair[1]}\n"
    _emit(text, args.output)
    if pair is not None and pair[0] != pair[1]:
        return 3
    return 0


def cmd_hilb(args) -> int:
    order = _resolve_order(args.order)
    if args.qstep not in ("1", "1/2"):
        raise UsageError("--qstep must be 1 or 1/2")
    series = genfun.hilb_series(order, q_step=args.qstep)
    step4 = 4 if args.qstep == "1" else 2
    entries = [(e // step4, p) for e, p in series.terms()]
    if args.format == "json":
        text = _dump_json({
            "schema": SCHEMA, "order": order, "qStep": args.qstep,
            "coefficients": [{"n": n, "ePoly": p.to_json(), "euler": p.euler()} for n, p in entries],
        })
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "euler", "ePoly"])
        for n, p in entries:
            writer.writerow([n, p.euler(), encode_poly(p)])
        text = buf.getvalue()
    else:
        text = "".join(f"n={n}: {p}\n" for n, p in entries)
    _emit(text, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sheafgen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table", help="Hodge data of moduli spaces read off a generating function")
    p.add_argument("--family", required=True, choices=sorted(genfun.FAMILIES))
    p.add_argument("--order", type=int, help="truncate at q^ORDER (exclusive)")
    p.add_argument("--max-dim", type=int, help="keep moduli spaces of dimension at most MAX_DIM")
    p.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty")
    p.add_argument("--output")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="check a series identity coefficient by coefficient")
    p.add_argument("--identity", required=True, choices=[*genfun.VERIFIERS, "all"])
    p.add_argument("--order", type=int)
    p.add_argument("--format", choices=["json", "pretty"], default="pretty")
    p.add_argument("--no-timing", action="store_true", help="omit wall times (byte-stable output)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dim", help="expected dimension of M(r, xi, chi)")
    p.add_argument("--e", type=int, required=True, choices=[-1, 0])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--xi", required=True, help="c0,g coefficients in the (C0, g) basis")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("fm", help="Fourier-Mukai image of a Chern vector")
    p.add_argument("--e", type=int, required=True, choices=[-1, 0])
    p.add_argument("--v", required=True, help="r,s,t,a2 with a2 = 2*ch2")
    p.add_argument("--format", choices=["json", "pretty"], default="pretty")
    p.add_argument("--output")
    p.set_defaults(func=cmd_fm)

    p = sub.add_parser("hilb", help="e-polynomials of Hilbert schemes of points")
    p.add_argument("--order", type=int)
    p.add_argument("--qstep", default="1")
    p.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty")
    p.add_argument("--output")
    p.set_defaults(func=cmd_hilb)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sheafgen: error: {exc}", file=sys.stderr)
        return 1
    except HodgeValidationError as exc:
        print(f"sheafgen: Hodge validation failed: {exc}", file=sys.stderr)
        return 2
    except (SheafgenError, ValueError) as exc:
        print(f"sheafgen: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
