"""Command-line front end.

Subcommands read and write dense Matrix Market files and print JSON
reports on stdout. Exit status: 0 success, 1 verification failed,
2 matrix not diagonalizable, 3 matrix not normal, 64 usage error,
65 unreadable input, 70 internal error. Failures also print a JSON object
to stderr.
"""
import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .core import DEFAULT_TOL, ScalarProduct, classify
from .errors import (CanonFormError, Defective, DimensionMismatch, InvalidSpectrumPairing,
                     NotNormal, ParseError)
from .genericity import perturb_to_distinct
from .mmio import read_matrix, write_matrix
from .perplectic import normal_to_x
from .symplectic import normal_to_four_diagonal
from .testkit import CLASS_KINDS, GeneratorSpec, oracle_verify_reduction, random_structured

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DEFECTIVE = 2
EXIT_NOT_NORMAL = 3
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70

ENV_TOL = "CANONFORM_TOL"
VERIFY_TOL = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with Defective
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# deterministic JSON

def _number(x):
    x = float(x)
    return format(x, ".17g") if math.isfinite(x) else "null"


def dumps(obj, indent=2, _level=0):
    """JSON text with floats at 17 significant digits; non-finite floats become null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _number(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [dumps(v, indent, _level + 1) for v in obj]
        return "[" + ", ".join(items) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _emit(report, stream=None):
    stream = stream or sys.stdout
    stream.write(dumps(report) + "\n")


# --------------------------------------------------------------------------
# argument helpers

def _default_tol():
    raw = os.environ.get(ENV_TOL)
    if raw is None or raw == "":
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{ENV_TOL}={raw!r} is not a number") from None
    if not (tol >= 0 and math.isfinite(tol)):
        raise UsageError(f"{ENV_TOL} must be a nonnegative number")
    return tol


def _nonneg(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("must be a nonnegative number")
    return v


def _positive(text):
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _class_name(text):
    key = text.lower().replace("_", "").replace("-", "")
    for kind in CLASS_KINDS:
        if kind.replace("-", "") == key:
            return kind
    raise argparse.ArgumentTypeError(f"unknown class {text!r}; choose from {', '.join(CLASS_KINDS)}")


def _read_spectrum(path):
    """One eigenvalue per line, as ``re im`` or a Python complex literal (``1+2j``)."""
    out = []
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            toks = text.split()
            try:
                if len(toks) == 2:
                    out.append(complex(float(toks[0]), float(toks[1])))
                elif len(toks) == 1:
                    out.append(complex(toks[0]))
                else:
                    raise ValueError
            except ValueError:
                raise ParseError(f"bad eigenvalue {text!r}", lineno) from None
    return out


def _product(args, n):
    return ScalarProduct(args.product, n)


def _base_report(args, argv):
    report = {"command": ["canonform"] + list(argv)}
    path = getattr(args, "input", None)
    if path:
        report["input"] = {"path": path, "sha256": _digest(path)}
    if getattr(args, "product", None):
        report["product"] = args.product
    return report


# --------------------------------------------------------------------------
# subcommands

def _cmd_classify(args, argv):
    a = read_matrix(args.input)
    tol = _default_tol() if args.tol is None else args.tol
    rep = classify(a, _product(args, a.shape[0]), tol)
    report = _base_report(args, argv)
    report.update(rep.as_dict())
    report["exit"] = EXIT_OK
    _emit(report)
    return EXIT_OK


def _reduce(a, product, tol):
    if product == "perplectic":
        res = normal_to_x(a, tol)
        return res.P, res.X, res.residuals, "x"
    res = normal_to_four_diagonal(a, tol)
    return res.S, res.D4, res.residuals, "fourdiag"


def _cmd_reduce(args, argv):
    a = read_matrix(args.input)
    n = a.shape[0]
    b = _product(args, n)
    tol = _default_tol() if args.tol is None else args.tol
    t, c, residuals, pattern = _reduce(a, args.product, tol)
    write_matrix(args.out_transform, t, comment=f"{args.product} transformation")
    write_matrix(args.out_form, c, comment=f"{pattern} form")
    verdict = oracle_verify_reduction(a, t, c, b, pattern, VERIFY_TOL)
    code = EXIT_OK if verdict.ok else EXIT_VERIFY_FAILED
    report = _base_report(args, argv)
    report.update({
        "dim": n,
        "form": args.out_form,
        "transform": args.out_transform,
        "pattern": pattern,
        "residuals": residuals,
        "verdict": verdict.as_dict(),
        "exit": code,
    })
    _emit(report)
    return code


def _cmd_gen(args, argv):
    spectrum = _read_spectrum(args.spectrum) if args.spectrum else None
    try:
        spec = GeneratorSpec(args.class_kind, args.dim, args.seed, spectrum=spectrum,
                             min_gap=args.min_gap, route=args.route)
    except InvalidSpectrumPairing:
        raise
    except ValueError as exc:  # bad dimension or parity: a usage problem
        raise UsageError(str(exc)) from None
    a = random_structured(spec)
    write_matrix(args.out, a, comment=f"{args.class_kind} dim={args.dim} seed={args.seed}")
    _emit({"command": ["canonform"] + list(argv), "class": args.class_kind, "dim": args.dim,
           "seed": args.seed, "route": args.route, "out": args.out, "exit": EXIT_OK})
    return EXIT_OK


def _cmd_perturb(args, argv):
    a = read_matrix(args.input)
    tol = _default_tol() if args.tol is None else args.tol
    cert = perturb_to_distinct(a, _product(args, a.shape[0]), args.epsilon, seed=args.seed,
                               gap_threshold=args.gap, tol=tol)
    write_matrix(args.out, cert.A_hat, comment=f"perturbed, epsilon={args.epsilon!r}")
    report = _base_report(args, argv)
    report.update(cert.as_dict())
    report["out"] = args.out
    report["exit"] = EXIT_OK
    _emit(report)
    return EXIT_OK


def _cmd_verify(args, argv):
    a = read_matrix(args.input)
    t = read_matrix(args.transform)
    c = read_matrix(args.canonical)
    b = _product(args, a.shape[0])
    verdict = oracle_verify_reduction(a, t, c, b, args.pattern, args.tol)
    code = EXIT_OK if verdict.ok else EXIT_VERIFY_FAILED
    report = _base_report(args, argv)
    report.update({"transform": args.transform, "canonical": args.canonical,
                   "pattern": args.pattern, "tol": args.tol})
    report.update(verdict.as_dict())
    report["exit"] = code
    _emit(report)
    return code


def build_parser():
    parser = _Parser(prog="canonform",
                     description="Structure-preserving canonical forms of R- and J-normal matrices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def product_flag(p):
        p.add_argument("--product", required=True, choices=("perplectic", "symplectic"))

    def tol_flag(p, default=None, note=f"default ${ENV_TOL} or {DEFAULT_TOL:g}"):
        p.add_argument("--tol", type=_nonneg, default=default, help=f"tolerance ({note})")

    p = sub.add_parser("classify", help="residuals against the four structure classes")
    product_flag(p)
    p.add_argument("--in", dest="input", required=True, metavar="A.mtx")
    tol_flag(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("reduce", help="X-form (perplectic) or four-diagonal form (symplectic)")
    product_flag(p)
    p.add_argument("--in", dest="input", required=True, metavar="A.mtx")
    p.add_argument("--out-form", required=True, metavar="X.mtx")
    p.add_argument("--out-transform", required=True, metavar="P.mtx")
    tol_flag(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("gen", help="random structured matrix")
    p.add_argument("--class", dest="class_kind", required=True, type=_class_name,
                   metavar="KIND", help=", ".join(CLASS_KINDS))
    p.add_argument("--dim", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spectrum", metavar="FILE", help="eigenvalues, one per line")
    p.add_argument("--min-gap", type=_nonneg, default=None)
    p.add_argument("--route", choices=("polynomial", "xform"), default="polynomial")
    p.add_argument("--out", required=True, metavar="A.mtx")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("perturb", help="nearby normal matrix with distinct eigenvalues")
    product_flag(p)
    p.add_argument("--in", dest="input", required=True, metavar="A.mtx")
    p.add_argument("--epsilon", required=True, type=_positive)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gap", type=_nonneg, default=None, help="required eigenvalue gap")
    p.add_argument("--out", required=True, metavar="Ahat.mtx")
    tol_flag(p)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("verify", help="independent check of a reduction")
    product_flag(p)
    p.add_argument("--in", dest="input", required=True, metavar="A.mtx")
    p.add_argument("--transform", required=True, metavar="P.mtx")
    p.add_argument("--canonical", required=True, metavar="X.mtx")
    p.add_argument("--pattern", required=True, choices=("x", "fourdiag", "diagonal",
                                                         "bisymmetric"))
    tol_flag(p, VERIFY_TOL, f"default {VERIFY_TOL:g}")
    p.set_defaults(func=_cmd_verify)
    return parser


def _fail(code, exc):
    _emit({"error": type(exc).__name__, "message": str(exc), "exit": code}, sys.stderr)
    return code


def run(argv=None):
    """Run the command line `argv` (without the program name); return the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _fail(EXIT_USAGE, exc)
    except SystemExit as exc:  # --help, --version
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except Defective as exc:
        return _fail(EXIT_DEFECTIVE, exc)
    except NotNormal as exc:
        return _fail(EXIT_NOT_NORMAL, exc)
    except (ParseError, DimensionMismatch, InvalidSpectrumPairing, OSError) as exc:
        return _fail(EXIT_DATA, exc)
    except (CanonFormError, ValueError, ArithmeticError) as exc:
        return _fail(EXIT_INTERNAL, exc)
    except Exception as exc:  # noqa: BLE001 - last line of defence
        return _fail(EXIT_INTERNAL, exc)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
