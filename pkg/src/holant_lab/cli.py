"""holant-lab command line.

Exit status: 0 success, 1 usage error, 2 invalid input, 3 verification mismatch.
"""
from __future__ import annotations

import argparse
import sys

from .apps import count_factors, count_matchings, xor_weight
from .bench import DEFAULT_SIZES, FAMILIES, fit_slope, format_rows, kernel_bench, run_bench
from .classifier import classify_coloured, classify_factor, classify_uncoloured
from .grids import GridError
from .holant import ROUTES, HolantError, evaluate, holant_mod_p
from .homcount import HomCountError
from .io import ParseError, parse_grid, parse_matrix, parse_signatures
from .scalars import FieldError, field_from_spec
from .signatures import SignatureError
from .verify import RunConfig, run_verify
from .zeta import support

EXIT_USAGE, EXIT_INVALID, EXIT_MISMATCH = 1, 2, 3

VALIDATION_ERRORS = (ParseError, SignatureError, GridError, HolantError, HomCountError, FieldError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _field(args):
    return field_from_spec(args.field)


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _sizes(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError("sizes are comma-separated integers") from None
    if not out or min(out) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return out


def _table(rows: list[list[str]], fmt: str) -> str:
    sep = "\t" if fmt == "tsv" else " "
    return "".join(sep.join(r) + "\n" for r in rows)


# -- subcommands ---------------------------------------------------------------

def cmd_classify(args, out):
    F = _field(args)
    lib = parse_signatures(_read(args.signatures), F)
    S = list(lib)
    if not S:
        raise ParseError("no signatures given")
    D = args.degree_bound
    verdicts = []
    if args.factor:
        verdicts += [classify_factor(S, coloured=False), classify_factor(S, coloured=True)]
    else:
        mod = args.mod if args.mod is not None else (F.p if F.kind == "gf" else None)
        if F.kind == "gf":
            S = [s.lifted() for s in S]
        if mod is None:
            verdicts.append(classify_coloured(S, D))
        else:
            verdicts.append(classify_coloured(S, D, p=mod))
        if F.kind != "gf" and args.mod is None:
            verdicts.append(classify_uncoloured(S, D))
    for v in verdicts:
        out.write(_line(v.line(), args.format))
    for v in verdicts:
        w = v.witness_line()
        if w:
            out.write(_line(w, args.format))


def _line(tab_line: str, fmt: str) -> str:
    return (tab_line if fmt == "tsv" else tab_line.replace("\t", " ")) + "\n"


def _mode(args, grid) -> str:
    if args.coloured:
        return "coloured"
    if args.uncoloured:
        return "uncoloured"
    return "coloured" if grid.colours() is not None else "uncoloured"


def cmd_eval(args, out):
    F = _field(args)
    lib = parse_signatures(_read(args.signatures), F)
    grid = parse_grid(_read(args.grid), lib)
    mode = _mode(args, grid)
    if mode == "coloured" and grid.colours() is None:
        raise HolantError("coloured evaluation needs edge colours or an h-colouring")
    if mode == "uncoloured" and args.k is None:
        raise HolantError("uncoloured evaluation needs --k")
    if args.mod is not None:
        res = holant_mod_p(grid, args.k, args.mod, mode, args.route)
        fmt_field = field_from_spec(["gf", str(args.mod)])
    else:
        res = evaluate(grid, args.k, mode, args.route)
        fmt_field = F
    st = res.stats.as_dict()
    if args.format == "tsv":
        out.write(_table([["value", "route"] + list(st),
                          [fmt_field.format(res.value), res.route] + [str(v) for v in st.values()]], "tsv"))
    else:
        out.write(fmt_field.format(res.value) + "\n")
        out.write(" ".join([f"route={res.route}"] + [f"{k}={v}" for k, v in st.items()]) + "\n")


def cmd_zeta(args, out):
    F = _field(args)
    lib = parse_signatures(_read(args.signatures), F)
    if args.k is None:
        raise HolantError("zeta needs --k")
    S = [s.lifted() for s in lib] if F.kind == "gf" else list(lib)
    rows = []
    for e in support(S, args.k, args.treewidth_threshold):
        val = F(e.value) if F.kind == "gf" else e.value
        if not val:
            continue
        rows.append([e.canonical, str(e.k), F.format(val), str(e.treewidth)])
    out.write(_table(rows, "tsv"))


def cmd_count_matchings(args, out):
    F = _field(args)
    grid = parse_grid(_read(args.grid), None, require_signatures=False)
    if args.k is None:
        raise HolantError("count-matchings needs --k")
    colours = grid.edge_colours
    if args.colourful and colours is None:
        raise HolantError("colourful matchings need an edge colouring (edge u v colour)")
    n = count_matchings(grid.graph, args.k, colourful=args.colourful, colours=colours, F=F, route=args.route)
    out.write(f"{n}\n")


def cmd_count_factors(args, out):
    F = _field(args)
    lib = parse_signatures(_read(args.signatures), F)
    grid = parse_grid(_read(args.grid), lib)
    if not args.coloured and args.k is None:
        raise HolantError("count-factors needs --k (or --coloured)")
    out.write(f"{count_factors(grid, args.k, args.coloured, args.route)}\n")


def cmd_xor_weight(args, out):
    F = _field(args)
    matrix = parse_matrix(_read(args.matrix))
    if args.k is None:
        raise HolantError("xor-weight needs --k")
    out.write(f"{xor_weight(matrix, args.k, F, args.route)}\n")


def cmd_verify(args, out):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    cfg = RunConfig(field=_field(args), seed=args.seed, k_max=args.k_max, fmt=args.format)
    rep = run_verify(cfg, args.trials)
    out.write(rep.text())
    return 0 if rep.ok else EXIT_MISMATCH


def cmd_bench(args, out):
    rows = []
    slopes = []
    if args.kernels:
        rows += kernel_bench()
    for fam in args.family or ["acyclic"]:
        fam_rows = run_bench(fam, args.sizes or DEFAULT_SIZES[fam], args.route, args.k if args.k is not None else 3,
                             args.timeout, args.seed)
        rows += fam_rows
        s = fit_slope(fam_rows)
        if s is not None:
            slopes.append((fam, s))
    out.write(format_rows(rows, args.format))
    for fam, s in slopes:
        out.write(_line(f"slope\t{fam}\t{s:.3f}", args.format))


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", nargs="+", default=["rational"], metavar="FIELD",
                        help="rational | gaussian | gf <p>")
    common.add_argument("--k", type=_nonneg, default=None)
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--route", choices=ROUTES, default="auto")
    common.add_argument("--degree-bound", type=int, default=8)
    common.add_argument("--format", choices=("text", "tsv"), default="text")

    p = _Parser(prog="holant-lab", description="Exact holant evaluation and classification.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="complexity verdicts for a signature set")
    c.add_argument("signatures")
    c.add_argument("--mod", type=int, default=None, help="classify the modular problem")
    c.add_argument("--factor", action="store_true", help="treat signatures as indicator sets (factor problems)")
    c.set_defaults(func=cmd_classify)

    e = sub.add_parser("eval", parents=[common], help="evaluate a holant")
    e.add_argument("grid")
    e.add_argument("signatures")
    g = e.add_mutually_exclusive_group()
    g.add_argument("--coloured", action="store_true")
    g.add_argument("--uncoloured", action="store_true")
    e.add_argument("--mod", type=int, default=None)
    e.set_defaults(func=cmd_eval)

    z = sub.add_parser("zeta", parents=[common], help="nonzero zeta coefficients with treewidth")
    z.add_argument("signatures")
    z.add_argument("--treewidth-threshold", type=int, default=2)
    z.set_defaults(func=cmd_zeta)

    m = sub.add_parser("count-matchings", parents=[common], help="count (colourful) k-matchings")
    m.add_argument("grid")
    m.add_argument("--colourful", action="store_true")
    m.set_defaults(func=cmd_count_matchings)

    f = sub.add_parser("count-factors", parents=[common], help="count (colourful) factors")
    f.add_argument("grid")
    f.add_argument("signatures")
    f.add_argument("--coloured", action="store_true")
    f.set_defaults(func=cmd_count_factors)

    x = sub.add_parser("xor-weight", parents=[common], help="weight-k solutions of A x = 0 over GF(2)")
    x.add_argument("matrix")
    x.set_defaults(func=cmd_xor_weight)

    v = sub.add_parser("verify", parents=[common], help="random route-agreement harness")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--k-max", type=_nonneg, default=3)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", parents=[common], help="timing tables")
    b.add_argument("--family", action="append", choices=FAMILIES)
    b.add_argument("--sizes", type=_sizes, default=None, help="comma-separated; per-family defaults")
    b.add_argument("--timeout", type=float, default=60.0)
    b.add_argument("--kernels", action="store_true", help="also compare numba and numpy kernels")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rc = args.func(args, out)
    except UsageError as exc:
        print(f"holant-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VALIDATION_ERRORS as exc:
        print(f"holant-lab: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ValueError) as exc:
        print(f"holant-lab: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
