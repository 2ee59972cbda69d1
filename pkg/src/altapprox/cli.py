"""Command-line front end.

Subcommands: nodes, basis, fit, eval, extrapolate, wavelet. Grid flags take
``start:stop:count``; negative starts need the ``--grid=-1.5:2.5:401`` form.

Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 sample-table mismatch.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .apoly import build_a_system, build_b_system, shifted_legendre
from .errors import ConsistencyError, QuadratureError, RootFindingError, SampleTableError
from .expr import to_funcspec
from .files import SampleTable, csv_text, dumps_expansion, load_expansion
from .operators import derivative_of, fit, omega_hat, omega_weak
from .quadrature import default_tol, gauss_rule
from .structured import build_structured, lambda_eval, wavelet_subset

EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_SAMPLES = 4


class UsageError(Exception):
    pass


def parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must look like start:stop:count, got {text!r}") from None
    if count < 1:
        raise UsageError("grid count must be >= 1")
    return np.linspace(start, stop, count)


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _need_n(args, lo=1):
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < lo:
        raise UsageError(f"--n must be >= {lo}")
    return args.n


def cmd_nodes(args):
    n = _need_n(args)
    rule = gauss_rule(n)
    xs = np.concatenate([[0.0], rule.nodes, [1.0]])
    ws = np.concatenate([[0.0], rule.weights, [0.0]])
    _emit(csv_text(["x", "w"], [xs, ws]), args.out)


def cmd_basis(args):
    n = _need_n(args)
    grid = parse_grid(args.grid or "0:1:101")
    system = args.system
    if system == "A":
        s = build_a_system(n)
        header = [f"A_{n}_{k}" for k in range(n + 1)]
        cols = [s[k](grid) for k in range(n + 1)]
    elif system == "B":
        s = build_b_system(build_a_system(n))
        header = [f"B_{n}_{k}" for k in range(n + 1)]
        cols = [s[k](grid) for k in range(n + 1)]
    elif system == "S":
        s = build_structured(n)
        # S_n0 has no weighted norm; scale it to value 1 at x = 1 (shifted Legendre)
        raw0 = s.raw[0]
        header = [f"S_{n}_{k}" for k in range(n + 1)]
        cols = [raw0(grid) / float(raw0(1))] + [s.normalized(k, grid) for k in range(1, n + 1)]
    elif system == "Lambda":
        if n < 2:
            raise UsageError("Lambda needs --n >= 2")
        header = [f"Lambda_{n}_{k}" for k in range(2, n + 1)]
        cols = [lambda_eval(n, k, grid) for k in range(2, n + 1)]
    else:
        raise UsageError(f"unknown system {system!r}")
    _emit(csv_text(["x"] + header, [grid] + cols), args.out)


def _function_input(args, n):
    if args.expr and args.samples:
        raise UsageError("give either --expr or --samples, not both")
    if args.samples:
        if args.operator not in ("w", "what"):
            raise UsageError("--samples feeds only the discrete operators (--operator w or what)")
        if args.auto_parity:
            raise UsageError("--auto-parity needs an expression, not samples")
        return SampleTable.load(args.samples).to_funcspec(n)
    if not args.expr:
        raise UsageError("one of --expr or --samples is required")
    return to_funcspec(args.expr)


def _fit(args):
    n = _need_n(args)
    f = _function_input(args, n)
    if args.operator == "spectral" and f.deriv is None and not args.b_from_c:
        raise UsageError("spectral operator needs a derivative; pass --b-from-c to use the c-coefficient path")
    e = fit(f, n, args.operator, auto_parity=args.auto_parity, use_b_from_c=args.b_from_c)
    if args.expr:
        e.meta["expr"] = args.expr
    e.meta.setdefault("quad_tol", default_tol())
    e.meta["package_version"] = __version__
    return e


def cmd_fit(args):
    e = _fit(args)
    if args.format == "json":
        _emit(dumps_expansion(e), args.out)
    else:
        grid = parse_grid(args.grid or "0:1:101")
        _emit(csv_text(["x", "value"], [grid, e(grid)]), args.out)


def cmd_eval(args):
    e = load_expansion(args.file)
    grid = parse_grid(args.grid or "0:1:101")
    header, cols = ["x", "value"], [grid, e(grid)]
    if args.with_derivative:
        header.append("derivative")
        cols.append(derivative_of(e)(grid))
    _emit(csv_text(header, cols), args.out)


def cmd_extrapolate(args):
    grid = parse_grid(args.grid or "-1.5:2.5:401")
    if args.file:
        e = load_expansion(args.file)
        header, cols = ["x"], [grid]
        expr = args.expr or e.meta.get("expr")
        if expr:
            header.append("f")
            cols.append(to_funcspec(expr).eval(grid))
        header.append("value")
        cols.append(e(grid))
    else:
        if not args.expr:
            raise UsageError("extrapolate needs an expansion file or --expr with --n")
        n = _need_n(args)
        f = to_funcspec(args.expr)
        header = ["x", "f", "omega_hat", "omega"]
        cols = [grid, f.eval(grid), omega_hat(f, n)(grid), omega_weak(f, n)(grid)]
    _emit(csv_text(header, cols), args.out)


def cmd_wavelet(args):
    n = _need_n(args, 3)
    grid = parse_grid(args.grid or "0:1:201")
    members = wavelet_subset(n)
    header = ["x"] + [f"Lambda_{n}_{k}" for _, k in members]
    cols = [grid] + [lambda_eval(n, k, grid) for _, k in members]
    _emit(csv_text(header, cols), args.out)


def build_parser():
    p = argparse.ArgumentParser(prog="altapprox", description="Joint approximation by alternative orthogonal polynomials.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=True):
        sp.add_argument("--out", help="output path (default: stdout)")
        if grid:
            sp.add_argument("--grid", help="start:stop:count")

    sp = sub.add_parser("nodes", help="0, the shifted Gauss-Legendre nodes, 1")
    sp.add_argument("--n", type=int)
    common(sp, grid=False)
    sp.set_defaults(func=cmd_nodes)

    sp = sub.add_parser("basis", help="tabulate a polynomial system")
    sp.add_argument("--system", choices=["A", "B", "S", "Lambda"], default="A")
    sp.add_argument("--n", type=int)
    common(sp)
    sp.set_defaults(func=cmd_basis)

    sp = sub.add_parser("fit", help="approximate a function")
    sp.add_argument("--operator", choices=["spectral", "weak", "projection", "w", "what"], default="weak")
    sp.add_argument("--expr")
    sp.add_argument("--samples", help="CSV with header x,f")
    sp.add_argument("--n", type=int)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--auto-parity", action="store_true")
    sp.add_argument("--b-from-c", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("eval", help="evaluate an expansion file")
    sp.add_argument("file")
    sp.add_argument("--with-derivative", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("extrapolate", help="evaluate fits beyond [0, 1]")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--expr")
    sp.add_argument("--n", type=int)
    common(sp)
    sp.set_defaults(func=cmd_extrapolate)

    sp = sub.add_parser("wavelet", help="antisymmetric Lambda members")
    sp.add_argument("--n", type=int)
    common(sp)
    sp.set_defaults(func=cmd_wavelet)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except SampleTableError as exc:
        print(f"altapprox: sample table: {exc}", file=sys.stderr)
        return EXIT_SAMPLES
    except QuadratureError as exc:
        print(f"altapprox: quadrature failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (RootFindingError, ConsistencyError, ArithmeticError) as exc:
        print(f"altapprox: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, OSError) as exc:
        print(f"altapprox: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
