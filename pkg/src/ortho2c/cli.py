"""Command-line front end.

Exit codes: 0 on success, 1 on a computational failure (the module error is
printed to stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import basis as B
from . import bridge, io, kernels, recurrence, zeros
from .sampling import DEFAULT_SEED, sample_pairs
from .verify import default_tolerance, run_suite
from .weights import WeightSpec, load_custom_table, moment_array

MAX_DEGREE = 12
WEIGHT_NAMES = ("hermite", "disk", "deltoid-t", "deltoid-u", "custom")


class UsageError(Exception):
    pass


def _degree(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_DEGREE:
        raise argparse.ArgumentTypeError(f"degree must be between 0 and {MAX_DEGREE}")
    return value


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _add_weight(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weight", choices=WEIGHT_NAMES, default="hermite")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="disk parameter (required for --weight disk)")
    p.add_argument("--moments", default=None, help="custom moment table JSON (for --weight custom)")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    # accepted after the subcommand too; SUPPRESS keeps the top-level value otherwise
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--tol", type=_positive, default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ortho2c", description="Orthogonal polynomials of two variables in real and complex form.")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for random evaluation points")
    parser.add_argument("--tol", type=_positive, default=None, help="base tolerance (default: ORTHO2C_TOL or 1e-9)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="build and serialize a basis")
    _add_weight(p)
    p.add_argument("--degree", type=_degree, required=True)
    p.add_argument("--normalization", choices=("monic", "orthonormal"), default="orthonormal")
    _add_output(p)

    p = sub.add_parser("convert", help="convert a basis between real and complex form")
    _add_weight(p)
    p.add_argument("--degree", type=_degree, default=None)
    p.add_argument("--input", "-i", default=None, help="basis JSON to convert; built from --weight otherwise")
    p.add_argument("--to", choices=("real", "complex"), required=True)
    _add_output(p)

    p = sub.add_parser("recurrence", help="three-term coefficients and diagnostics")
    _add_weight(p)
    p.add_argument("--degree", type=_degree, required=True, help="extract alpha_n, beta_n for n < degree")
    p.add_argument("--csv", default=None, help="coefficient table path ('-' for stdout, report then goes to stderr)")
    _add_output(p)

    p = sub.add_parser("kernel", help="evaluate reproducing kernels (JSON lines)")
    _add_weight(p)
    p.add_argument("--n", type=_degree, required=True)
    p.add_argument("--z", type=_complex, action="append", default=None)
    p.add_argument("--zeta", type=_complex, action="append", default=None)
    p.add_argument("--random", type=int, default=0, help="also evaluate at this many seeded point pairs")
    p.add_argument("--method", choices=kernels.METHODS + ("all",), default="direct_sum")
    _add_output(p)

    p = sub.add_parser("zeros", help="common zeros of Q_n")
    _add_weight(p)
    p.add_argument("--degree", type=_degree, required=True)
    _add_output(p)

    p = sub.add_parser("cubature", help="Gaussian cubature rule from common zeros")
    _add_weight(p)
    p.add_argument("--degree", type=_degree, required=True)
    _add_output(p)

    p = sub.add_parser("moments", help="moment table in the custom-table layout")
    _add_weight(p)
    p.add_argument("--max-degree", type=_degree, required=True)
    _add_output(p)

    p = sub.add_parser("verify", help="run the invariant suite for a weight")
    _add_weight(p)
    p.add_argument("--max-degree", type=_degree, default=6)
    _add_output(p)
    return parser


def weight_from_args(args) -> WeightSpec:
    if args.weight == "disk":
        if args.lam is None:
            raise UsageError("--weight disk needs --lambda")
        if not args.lam > -1:
            raise UsageError("--lambda must exceed -1")
        return WeightSpec.disk(args.lam)
    if args.lam is not None:
        raise UsageError("--lambda only applies to --weight disk")
    if args.weight == "custom":
        if not args.moments:
            raise UsageError("--weight custom needs --moments PATH")
        return load_custom_table(io.read_json(args.moments))
    if args.weight == "hermite":
        return WeightSpec.hermite()
    return WeightSpec.deltoid(args.weight[-1])


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        io.write_text(args.output, text)
    else:
        sys.stdout.write(text)


def cmd_basis(args) -> int:
    w = weight_from_args(args)
    levels = B.monic_basis(w, args.degree) if args.normalization == "monic" else B.orthonormal_basis(w, args.degree)
    _emit(args, io.dumps(io.basis_to_json(w, levels, args.normalization)))
    return 0


def cmd_convert(args) -> int:
    if args.input:
        w, norm, levels = io.basis_from_json(io.read_json(args.input))
    else:
        if args.degree is None:
            raise UsageError("convert needs --input or --degree")
        w = weight_from_args(args)
        norm = "orthonormal"
        levels = B.orthonormal_basis(w, args.degree)
    if args.to == "real":
        if any(isinstance(lv, bridge.RealLevel) for lv in levels):
            raise UsageError("input is already real")
        out = [bridge.real_level(lv) for lv in levels]
    else:
        if any(isinstance(lv, B.BasisLevel) for lv in levels):
            raise UsageError("input is already complex")
        out = []
        for lv in levels:
            lmat = bridge.build_L(lv.n).entries
            gram = lmat @ lv.gram @ lmat.conj().T
            out.append(B.BasisLevel(lv.n, lmat @ lv.coeffs, 0.5 * (gram + gram.conj().T), norm))
    _emit(args, io.dumps(io.basis_to_json(w, out, norm)))
    return 0


def cmd_recurrence(args, tol: float) -> int:
    w = weight_from_args(args)
    if args.degree < 1:
        raise UsageError("recurrence needs --degree >= 1")
    levels = B.orthonormal_basis(w, args.degree)
    data = recurrence.extract_complex_three_term(w, levels, args.seed)
    if data.residual > tol:
        raise recurrence.RecurrenceError(f"basis not orthogonal to stated tolerance (residual {data.residual:.2e})")
    real = [bridge.real_level(lv) for lv in levels]
    dx, dy = recurrence.extract_real_three_term(w, real, args.seed)
    translate = 0.0
    for n in range(len(data.alpha)):
        a, b = recurrence.translate_coeffs(dx.alpha[n], dx.beta[n], dy.alpha[n], dy.beta[n], bridge.build_L(n), bridge.build_L(n + 1))
        translate = max(translate, float(np.max(np.abs(a - data.alpha[n]))), float(np.max(np.abs(b - data.beta[n]))))
    r1, r2, r3 = recurrence.commuting_check(data)
    report = {
        "weight": w.to_json(),
        "degree": args.degree,
        "reconstruction_residual": data.residual,
        "gamma_alpha_residual": recurrence.check_gamma_alpha(data),
        "beta_max": recurrence.beta_residual(data),
        "beta_zero": recurrence.beta_residual(data) < 1e-10,
        "favard": [dict(n=n, **recurrence.favard_rank_check(a)) for n, a in enumerate(data.alpha)],
        "commuting_residuals": [r1, r2, r3],
        "translate_vs_direct": translate,
    }
    text = io.dumps(report, indent=2)
    if args.csv == "-":
        sys.stdout.write(data.to_csv())
        sys.stderr.write(text + "\n")
        return 0
    if args.csv:
        io.write_text(args.csv, data.to_csv())
    _emit(args, text)
    return 0


def cmd_kernel(args) -> int:
    w = weight_from_args(args)
    zs = list(args.z or [])
    zetas = list(args.zeta or [])
    if len(zs) != len(zetas):
        raise UsageError("--z and --zeta must be given the same number of times")
    if args.random:
        a, b = sample_pairs(w, args.random, args.seed)
        zs += list(a)
        zetas += list(b)
    if not zs:
        raise UsageError("give --z/--zeta or --random")
    n = args.n
    methods = kernels.METHODS if args.method == "all" else (args.method,)
    needs_cd = any(m != "direct_sum" for m in methods)
    levels = B.orthonormal_basis(w, n + 1 if needs_cd else n)
    real = [bridge.real_level(lv) for lv in levels] if any(m.startswith("cd_real") for m in methods) else None
    data = recurrence.extract_complex_three_term(w, levels, args.seed) if "cd_complex" in methods else None
    rdata = recurrence.extract_real_three_term(w, real, args.seed) if real is not None else None
    lines = []
    for z, zeta in zip(zs, zetas):
        for m in methods:
            rec = data if m == "cd_complex" else rdata
            ev = kernels.evaluate(m, n, complex(z), complex(zeta), levels=levels, real_levels=real, recurrence=rec)
            lines.append(io.dumps(ev.to_json(z, zeta)))
    _emit(args, "\n".join(lines))
    return 0


def cmd_zeros(args) -> int:
    w = weight_from_args(args)
    found = zeros.common_zeros(w, args.degree)
    record = {"degree": args.degree, "count": len(found), "nodes": [[z.real, z.imag] for z in found]}
    _emit(args, io.dumps(record))
    return 0


def cmd_cubature(args) -> int:
    w = weight_from_args(args)
    rule = zeros.gaussian_cubature(w, args.degree)
    _emit(args, io.dumps(rule.to_json()))
    return 0


def cmd_moments(args) -> int:
    w = weight_from_args(args)
    values = moment_array(w, args.max_degree) * w.mass
    _emit(args, io.dumps(io.moments_to_json(w, args.max_degree, values)))
    return 0


def cmd_verify(args, tol: float) -> int:
    w = weight_from_args(args)
    if args.max_degree < 1:
        raise UsageError("verify needs --max-degree >= 1")
    suite = run_suite(w, args.max_degree, args.seed, tol)
    lines = [io.dumps(c.to_json()) for c in suite.checks]
    summary = {"weight": w.to_json(), "max_degree": args.max_degree, "seed": args.seed, "passed": suite.passed, "failures": [c.name for c in suite.failures()]}
    lines.append(io.dumps(summary))
    _emit(args, "\n".join(lines))
    if not suite.passed:
        sys.stderr.write("verification failed: " + ", ".join(c.name for c in suite.failures()) + "\n")
        return 1
    return 0


COMPUTATIONAL_ERRORS = (ValueError, RuntimeError, ArithmeticError, np.linalg.LinAlgError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = args.tol if args.tol is not None else default_tolerance()
        handlers = {
            "basis": cmd_basis,
            "convert": cmd_convert,
            "recurrence": lambda a: cmd_recurrence(a, tol),
            "kernel": cmd_kernel,
            "zeros": cmd_zeros,
            "cubature": cmd_cubature,
            "moments": cmd_moments,
            "verify": lambda a: cmd_verify(a, tol),
        }
        return handlers[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"ortho2c: error: {exc}\n")
        return 2
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"ortho2c: input error: {exc}\n")
        return 1
    except COMPUTATIONAL_ERRORS as exc:
        sys.stderr.write(f"ortho2c: {exc}\n")
        return 1


def run(argv) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
