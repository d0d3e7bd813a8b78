"""Command-line front end.

Subcommands: pade, prony, prony-classical, cheb-nodes, quadrature,
diff-formula, verify-bounds, eps.  Reports are deterministic JSON documents
(floats at 17 significant digits) written to stdout or --output; commands
that produce nodes can also export them as CSV columns k,re,im,abs via
--csv.

Exit codes: 0 success, 1 invalid input, 2 numerical failure (the message
names the failed criterion).

Node counts are capped at n <= 60 because double precision degrades beyond
that; set the environment variable EQW_MAX_N to raise or lower the cap (a
warning is printed on stderr whenever the override is active).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import jsonio
from .apps import QUADRATURE_VARIANTS, chebyshev_rule, derivative_formula
from .bounds import check_node_bound_randomized, node_bound_epsilon
from .exceptions import NumericalError
from .kernels import ExpKernel, GeometricKernel, TaylorKernel
from .pade import PadeInterpolator
from .prony import NEG_INFINITY, ClassicalProny, EqualWeightProny

DEFAULT_MAX_N = 60


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with status 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _node_cap():
    raw = os.environ.get("EQW_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N, False
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"EQW_MAX_N must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"EQW_MAX_N must be at least 1, got {cap}")
    return cap, True


def _check_cap(n):
    cap, overridden = _node_cap()
    if overridden:
        print(
            f"warning: precision cap overridden to n <= {cap} via EQW_MAX_N "
            f"(default {DEFAULT_MAX_N}); double-precision accuracy is not "
            f"assured beyond n = {DEFAULT_MAX_N}",
            file=sys.stderr,
        )
    if n > cap:
        raise ValueError(
            f"n = {n} exceeds the precision cap {cap}"
            + ("" if overridden else " (set EQW_MAX_N to override)")
        )
    return n


def _read_document(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from None
    document = jsonio.load_document(text, name=path)
    if not isinstance(document, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return document


def _document_values(path):
    """Read {n?, values} from a JSON file; values as complex, n as declared."""
    document = _read_document(path)
    if "values" not in document:
        raise ValueError(f"{path}: missing required field 'values'")
    values = jsonio.pairs_to_complex(document["values"], name=f"{path}: values")
    declared = document.get("n")
    if declared is not None and (not isinstance(declared, int) or isinstance(declared, bool)):
        raise ValueError(f"{path}: field 'n' must be an integer")
    return values, declared


def _pade_kernel(spec):
    if spec == "exp":
        return ExpKernel()
    if spec == "geometric":
        return GeometricKernel()
    document = _read_document(spec)
    if "values" not in document:
        raise ValueError(f"{spec}: kernel document needs a 'values' field")
    coefficients = jsonio.pairs_to_complex(document["values"], name=f"{spec}: values")
    radius = document.get("radius", np.inf)
    if isinstance(radius, bool) or not isinstance(radius, (int, float)):
        raise ValueError(f"{spec}: field 'radius' must be a number")
    return TaylorKernel(coefficients, radius=float(radius))


_QUADRATURE_CALLABLES = {"exp": np.exp, "cos": np.cos, "sin": np.sin}


def _quadrature_kernel(spec):
    if spec in _QUADRATURE_CALLABLES:
        return _QUADRATURE_CALLABLES[spec]
    if spec == "geometric":
        return GeometricKernel()
    if spec.startswith("poly:"):
        try:
            coefficients = np.array(
                [float(part) for part in spec[len("poly:") :].split(",")],
                dtype=np.float64,
            )
        except ValueError:
            raise ValueError(
                f"bad kernel {spec!r}: poly: takes comma-separated coefficients"
            ) from None
        return lambda w: npoly.polyval(w, coefficients)
    raise ValueError(
        f"unknown kernel {spec!r}; choose exp, cos, sin, geometric, or poly:c0,c1,..."
    )


def _pairs(values):
    return [jsonio.complex_pair(value) for value in values]


def _frequency_payload(frequencies):
    return [
        "-infinity" if value is NEG_INFINITY else jsonio.complex_pair(value)
        for value in frequencies
    ]


def _cmd_eps(args):
    bound = node_bound_epsilon(args.n)
    return {
        "command": "eps",
        "n": bound.n,
        "exact": bound.exact,
        "closed": bound.closed,
    }, None


def _cmd_cheb_nodes(args):
    _check_cap(args.n)
    rule = chebyshev_rule(args.n, variant=args.variant, tol=args.tol, max_iter=args.max_iter)
    document = {
        "command": "cheb-nodes",
        "n": rule.n,
        "variant": rule.variant,
        "weight": rule.weight,
        "is_real": rule.is_real,
        "moment_residual": rule.moment_residual,
        "nodes": _pairs(rule.nodes),
    }
    return document, rule.nodes


def _cmd_quadrature(args):
    _check_cap(args.n)
    kernel = _quadrature_kernel(args.kernel)
    rule = chebyshev_rule(args.n, variant=args.variant, tol=args.tol, max_iter=args.max_iter)
    value = rule.integrate(kernel, args.x)
    lower = -args.x if rule.variant == "standard" else 0.0
    document = {
        "command": "quadrature",
        "n": rule.n,
        "variant": rule.variant,
        "kernel": args.kernel,
        "interval": [lower, args.x],
        "value": jsonio.complex_pair(value),
        "weight": rule.weight,
        "is_real": rule.is_real,
        "moment_residual": rule.moment_residual,
        "nodes": _pairs(rule.nodes),
    }
    return document, rule.nodes


def _cmd_diff_formula(args):
    _check_cap(args.n)
    formula = derivative_formula(args.t, args.n, tol=args.tol, max_iter=args.max_iter)
    document = {
        "command": "diff-formula",
        "t": formula.t,
        "n": formula.n,
        "mu": formula.mu,
        "node_bound": formula.node_bound,
        "max_node_magnitude": float(np.abs(formula.nodes).max()),
        "moment_residual": formula.moment_residual,
        "nodes": _pairs(formula.nodes),
    }
    return document, formula.nodes


def _cmd_pade(args):
    values, declared = _document_values(args.f)
    if args.n is not None:
        n = args.n
    elif declared is not None:
        n = declared
    else:
        n = len(values) - 1
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    _check_cap(n)
    if len(values) < n + 1:
        raise ValueError(
            f"{args.f}: need n + 1 = {n + 1} series coefficients, got {len(values)}"
        )
    kernel = _pade_kernel(args.h)
    estimator = PadeInterpolator(
        n=n, kernel=kernel, tol=args.tol, max_iter=args.max_iter, precision=args.precision
    )
    estimator.fit(values[: n + 1])
    document = {
        "command": "pade",
        "n": estimator.n_,
        "kernel": kernel.name,
        "mu": jsonio.complex_pair(estimator.mu_),
        "moment_residual": estimator.moment_residual_,
        "iterations": estimator.iterations_,
        "ratios": _pairs(estimator.ratios_),
        "nodes": _pairs(estimator.nodes_),
    }
    return document, estimator.nodes_


def _cmd_prony(args):
    values, declared = _document_values(args.table)
    if declared is not None and declared != len(values) - 1:
        raise ValueError(
            f"{args.table}: declared n = {declared} does not match "
            f"{len(values)} table values (need n + 1)"
        )
    if len(values) < 2:
        raise ValueError(f"{args.table}: need at least 2 table values")
    _check_cap(len(values) - 1)
    grid = tuple(args.grid) if args.grid is not None else None
    estimator = EqualWeightProny(
        grid=grid, tol=args.tol, max_iter=args.max_iter, precision=args.precision
    )
    estimator.fit(values)
    document = {
        "command": "prony",
        "n": estimator.n_,
        "grid": list(estimator.grid_) if estimator.grid_ is not None else None,
        "mu": jsonio.complex_pair(estimator.mu_),
        "moment_residual": estimator.moment_residual_,
        "bases": _pairs(estimator.bases_),
        "frequencies": _frequency_payload(estimator.frequencies_),
    }
    return document, estimator.bases_


def _cmd_prony_classical(args):
    values, declared = _document_values(args.moments)
    if len(values) < 2 or len(values) % 2:
        raise ValueError(
            f"{args.moments}: need an even number of samples (2n), got {len(values)}"
        )
    n = len(values) // 2
    if declared is not None and declared != n:
        raise ValueError(
            f"{args.moments}: declared n = {declared} does not match "
            f"{len(values)} samples (need 2n)"
        )
    _check_cap(n)
    estimator = ClassicalProny(
        hankel_rtol=args.hankel_rtol,
        root_separation=args.root_separation,
        residual_rtol=args.residual_rtol,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    estimator.fit(values)
    document = {
        "command": "prony-classical",
        "n": estimator.n_,
        "residual": estimator.residual_,
        "weights": _pairs(estimator.weights_),
        "bases": _pairs(estimator.bases_),
        "frequencies": _frequency_payload(estimator.frequencies_),
    }
    return document, estimator.bases_


def _cmd_verify_bounds(args):
    _check_cap(args.n)
    report = check_node_bound_randomized(
        args.n, args.a, trials=args.trials, seed=args.seed,
        tol=args.tol, max_iter=args.max_iter,
    )
    document = {
        "command": "verify-bounds",
        "n": report.n,
        "a": report.a,
        "trials": report.trials,
        "seed": report.seed,
        "epsilon_exact": report.epsilon_exact,
        "epsilon_closed": report.epsilon_closed,
        "bound_sharp": report.bound_sharp,
        "bound_closed": report.bound_closed,
        "max_node_magnitude": report.max_node_magnitude,
        "max_ratio": report.max_ratio,
        "violations": report.violations,
    }
    return document, None


def _add_solver_flags(parser, precision=False):
    parser.add_argument("--tol", type=float, default=1e-12,
                        help="root-iteration residual tolerance (default 1e-12)")
    parser.add_argument("--max-iter", dest="max_iter", type=int, default=500,
                        help="root-iteration sweep cap (default 500)")
    if precision:
        parser.add_argument("--precision", choices=("auto", "double", "extended"),
                            default="auto",
                            help="arithmetic for the moment solve (default auto: "
                                 "escalate to extended precision when doubles "
                                 "cannot certify the residual)")


def _add_output_flags(parser, nodes=True):
    parser.add_argument("--output", metavar="PATH",
                        help="write the JSON report to PATH instead of stdout")
    if nodes:
        parser.add_argument("--csv", metavar="PATH",
                            help="also write the nodes to PATH as CSV (k,re,im,abs)")


def build_parser():
    parser = _Parser(
        prog="eqwsums",
        description="Equal-weight exponential and series interpolation toolkit.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    pade = commands.add_parser(
        "pade", help="fit an equal-weight sum to Taylor coefficients"
    )
    pade.add_argument("--f", required=True, metavar="PATH",
                      help="JSON document {n?, values} with the series coefficients")
    pade.add_argument("--h", default="exp", metavar="PATH|exp|geometric",
                      help="kernel: exp, geometric, or a coefficient document (default exp)")
    pade.add_argument("--n", type=int, help="node count (default: from the document)")
    _add_solver_flags(pade, precision=True)
    _add_output_flags(pade)
    pade.set_defaults(handler=_cmd_pade)

    prony = commands.add_parser(
        "prony", help="fit an equal-weight exponential sum to a sample table"
    )
    prony.add_argument("--table", required=True, metavar="PATH",
                       help="JSON document {n?, values} with g(0)..g(n)")
    prony.add_argument("--grid", nargs=2, type=float, metavar=("A", "B"),
                       help="rescale the fit to n+1 equispaced points of [A, B]")
    _add_solver_flags(prony, precision=True)
    _add_output_flags(prony)
    prony.set_defaults(handler=_cmd_prony)

    classical = commands.add_parser(
        "prony-classical", help="fit a weighted exponential sum to 2n samples"
    )
    classical.add_argument("--moments", required=True, metavar="PATH",
                           help="JSON document {n?, values} with s_0..s_{2n-1}")
    classical.add_argument("--hankel-rtol", dest="hankel_rtol", type=float, default=1e-10,
                           help="relative singular-value cutoff for the degree test")
    classical.add_argument("--root-separation", dest="root_separation", type=float,
                           default=1e-8, help="minimum relative root separation")
    classical.add_argument("--residual-rtol", dest="residual_rtol", type=float,
                           default=1e-6, help="relative back-half residual tolerance")
    _add_solver_flags(classical)
    _add_output_flags(classical)
    classical.set_defaults(handler=_cmd_prony_classical)

    cheb = commands.add_parser(
        "cheb-nodes", help="nodes of the n-point equal-weight quadrature rule"
    )
    cheb.add_argument("--n", required=True, type=int, help="node count")
    cheb.add_argument("--variant", choices=QUADRATURE_VARIANTS, default="standard",
                      help="standard integrates [-x, x]; shifted integrates [0, x]")
    _add_solver_flags(cheb)
    _add_output_flags(cheb)
    cheb.set_defaults(handler=_cmd_cheb_nodes)

    quadrature = commands.add_parser(
        "quadrature", help="apply the n-point equal-weight quadrature rule"
    )
    quadrature.add_argument("--n", required=True, type=int, help="node count")
    quadrature.add_argument("--variant", choices=QUADRATURE_VARIANTS, default="standard",
                            help="standard integrates [-x, x]; shifted integrates [0, x]")
    quadrature.add_argument("--kernel", default="exp", metavar="NAME",
                            help="exp, cos, sin, geometric, or poly:c0,c1,... (default exp)")
    quadrature.add_argument("--x", required=True, type=float, help="upper endpoint")
    _add_solver_flags(quadrature)
    _add_output_flags(quadrature)
    quadrature.set_defaults(handler=_cmd_quadrature)

    diff = commands.add_parser(
        "diff-formula", help="equal-weight rule approximating z h'(z)"
    )
    diff.add_argument("--t", required=True, type=float, help="stretch parameter, t >= 1")
    diff.add_argument("--n", required=True, type=int, help="node count, n >= 2")
    _add_solver_flags(diff)
    _add_output_flags(diff)
    diff.set_defaults(handler=_cmd_diff_formula)

    verify = commands.add_parser(
        "verify-bounds", help="randomized check of the certified node bound"
    )
    verify.add_argument("--n", required=True, type=int, help="node count")
    verify.add_argument("--a", type=float, default=1.0,
                        help="geometric scale in |s_m| <= a^m (default 1)")
    verify.add_argument("--trials", type=int, default=1000, help="number of trials")
    verify.add_argument("--seed", type=int, default=42, help="RNG seed")
    _add_solver_flags(verify)
    _add_output_flags(verify, nodes=False)
    verify.set_defaults(handler=_cmd_verify_bounds)

    eps = commands.add_parser(
        "eps", help="node-bound inflation factor: exact root and closed form"
    )
    eps.add_argument("--n", required=True, type=int, help="node count, n >= 2")
    _add_output_flags(eps, nodes=False)
    eps.set_defaults(handler=_cmd_eps)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        document, nodes = args.handler(args)
        text = jsonio.dumps(document) + "\n"
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        csv_path = getattr(args, "csv", None)
        if csv_path:
            if nodes is None:
                raise ValueError("this command produces no nodes to export")
            with open(csv_path, "w") as stream:
                jsonio.write_nodes_csv(stream, nodes)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
