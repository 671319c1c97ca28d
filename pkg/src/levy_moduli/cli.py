"""Command-line front end.

Exit codes: 0 success or pass, 1 verdict fail, 2 usage or domain error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from levy_moduli import __version__
from levy_moduli.errors import (
    AlignmentError,
    ConfigError,
    DomainError,
    QuadratureError,
    SimulationError,
)
from levy_moduli.gaussian import simulate_stationary_increment_path
from levy_moduli.harness import KINDS, ExperimentConfig, run_experiment
from levy_moduli.levy import estimate_local_time, simulate_levy_path
from levy_moduli.oracles import (
    MomentQuery,
    brownian_theorem_constant,
    local_time_diff_second_moment,
    local_time_moment,
)
from levy_moduli.spectral import (
    CharacteristicExponent,
    StructureFunction,
    abs_moment_normal,
    c_beta_p,
    check_concavity,
    check_condition_cq,
    check_condition_lambda_gamma,
    local_time_factor,
    sigma0_sq,
    sigma_alpha_sq,
    sigma_tilde_sq,
    v_of_t,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _fmt(x, precision):
    return f"{x:.{precision}g}"


def read_config_file(path):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _exponent(args):
    fam = args.family
    if fam == "stable":
        return CharacteristicExponent.stable(args.beta)
    if fam == "brownian-half":
        return CharacteristicExponent.brownian_half()
    if fam == "scaled":
        return CharacteristicExponent.scaled_stable(args.c, args.beta)
    if not args.table:
        raise ConfigError("--family tabulated needs --table")
    return CharacteristicExponent.from_csv(args.table)


def _add_family(p, default="stable"):
    p.add_argument("--family", choices=["stable", "brownian-half", "scaled", "tabulated"],
                   default=default, help="characteristic exponent family (default %(default)s)")
    p.add_argument("--beta", type=float, default=2.0, help="stability index in (1, 2]")
    p.add_argument("--c", type=float, default=1.0, help="scale for --family scaled")
    p.add_argument("--table", help="lambda,psi CSV for --family tabulated")


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_sigma(args):
    e = _exponent(args)
    for h in args.h:
        if args.quantity == "sigma0":
            v = sigma0_sq(e, h, args.tol)
        elif args.quantity == "sigma-alpha":
            v = sigma_alpha_sq(e, args.alpha, h, args.tol)
        else:
            v = sigma_tilde_sq(e, args.alpha, h, args.tol)
        print(_fmt(v, args.precision) if len(args.h) == 1
              else f"{_fmt(h, args.precision)}\t{_fmt(v, args.precision)}")
    return EXIT_OK


def cmd_constants(args):
    p = args.p
    if args.theorem == "brownian":
        print(_fmt(brownian_theorem_constant(p), args.precision))
        return EXIT_OK
    if args.theorem == "stable":
        print(_fmt(c_beta_p(args.beta, p), args.precision))
        return EXIT_OK
    print(f"abs_moment\t{_fmt(abs_moment_normal(p), args.precision)}")
    print(f"local_time_factor\t{_fmt(local_time_factor(p), args.precision)}")
    print(f"brownian\t{_fmt(brownian_theorem_constant(p), args.precision)}")
    if args.beta is not None:
        print(f"stable\t{_fmt(c_beta_p(args.beta, p), args.precision)}")
    return EXIT_OK


def cmd_simulate(args):
    out = args.out or sys.stdout
    if args.what == "gaussian":
        sigma2 = StructureFunction.power_law(args.r)
        path = simulate_stationary_increment_path(sigma2, args.a, args.b,
                                                  (args.b - args.a) / args.n, 0.0, args.seed)
        path.to_csv(out)
        return EXIT_OK
    e = _exponent(args)
    path = simulate_levy_path(e, args.t, args.n, args.seed)
    if args.what == "path":
        path.to_csv(out)
        return EXIT_OK
    field_ = estimate_local_time(path, args.eps)
    for note in field_.notes:
        print(f"warning: {note}", file=sys.stderr)
    field_.to_csv(out)
    return EXIT_OK


def cmd_oracle(args):
    e = _exponent(args)
    if args.quantity == "v":
        v = v_of_t(e, args.t, args.tol)
    elif args.quantity == "diff":
        v = local_time_diff_second_moment(e, args.t, args.x, args.y, args.tol)
    else:
        v = local_time_moment(MomentQuery(e, args.m, args.t, args.x, z=args.z),
                              args.method, args.tol)
    print(_fmt(v, args.precision))
    return EXIT_OK


def cmd_check(args):
    if args.condition == "lambda-gamma":
        rep = check_condition_lambda_gamma(_exponent(args), args.gamma)
    else:
        if args.r is not None:
            sigma2 = StructureFunction.power_law(args.r)
        else:
            sigma2 = StructureFunction.spectral(_exponent(args), args.alpha)
        if args.condition == "cq":
            rep = check_condition_cq(sigma2, args.q)
        else:
            rep = check_concavity(sigma2, args.delta)
            print(f"concave\t{rep.concave}\nmonotone\t{rep.monotone}\n"
                  f"worst_second_difference\t{_fmt(rep.worst_second_difference, args.precision)}")
            return EXIT_OK if rep else EXIT_FAIL
    for k, v in rep.ratios.items():
        print(f"{_fmt(k, args.precision)}\t{_fmt(v, args.precision)}")
    print(f"verdict\t{rep.verdict}")
    if rep.note:
        print(f"note\t{rep.note}")
    return EXIT_FAIL if rep.verdict == "fails" else EXIT_OK


_VERIFY_FLAGS = {
    # flag: (type, help)
    "family": (str, "fbm for Gaussian kinds; brownian-half or stable for Lévy kinds"),
    "r": (float, "fBm exponent, sigma^2(h) = h^r"),
    "beta": (float, "stability index"),
    "p": (float, "modulus power"),
    "m": (int, "moment order for lm-decay"),
    "a": (float, "window left end"),
    "b": (float, "window right end"),
    "n": (int, "grid cells (Gaussian) or time steps (Lévy)"),
    "eps": (float, "local-time bin width"),
    "h": (str, "decreasing lag schedule, comma separated"),
    "t-grid": (str, "time horizons, comma separated"),
    "spacing": (float, "lattice spacing for quadratic-variation"),
    "replicas": (int, "number of replicas R"),
    "seed": (int, "master seed"),
    "tolerance": (float, "z multiple (mean kinds) or relative band (limit kinds)"),
    "decay-factor": (float, "required std ratio for gaussian-convergence"),
    "statistic": (str, "ratio or raw (localtime-convergence)"),
    "target": (float, "override the theoretical target"),
    "concave-r": (str, "concave exponents for covariance-bound, comma separated"),
    "convex-r": (float, "convex exponent for covariance-bound"),
    "slope-min": (float, "minimum log-log slope for the convex family"),
}


def cmd_verify(args):
    settings = read_config_file(args.config) if args.config else {}
    settings.pop("kind", None)
    for flag in _VERIFY_FLAGS:
        name = flag.replace("-", "_")
        value = getattr(args, name)
        if value is not None:
            settings[name] = value
    config = ExperimentConfig.from_mapping({"kind": args.kind, **settings})
    report = run_experiment(config)
    if args.out:
        report.to_json(args.out)
    if args.csv:
        report.to_csv(args.csv)
    prec = args.precision
    for row in report.rows:
        cells = [f"h={_fmt(row['h'], prec)}"]
        if row.get("t") is not None:
            cells.append(f"t={_fmt(row['t'], prec)}")
        cells.append(f"mean={_fmt(row['ensembleMean'], prec)}")
        if row.get("target") is not None:
            cells.append(f"target={_fmt(row['target'], prec)}")
        if row.get("zScore") is not None:
            cells.append(f"z={_fmt(row['zScore'], prec)}")
        if row.get("family"):
            cells.append(f"family={row['family']}")
        print("  ".join(cells))
    for note in report.notes:
        print(f"# {note}")
    print(f"verdict: {report.verdict}")
    return EXIT_OK if report.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="levy-moduli",
        description="L^p moduli of Gaussian processes and Lévy local times.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=6,
                        help="significant digits in printed numbers (default %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sigma", parents=[common], help="print sigma_0^2, sigma_alpha^2 or tilde")
    _add_family(p)
    p.add_argument("--h", type=float, nargs="+", required=True, help="lag(s)")
    p.add_argument("--quantity", choices=["sigma0", "sigma-alpha", "sigma-tilde"],
                   default="sigma0")
    p.add_argument("--alpha", type=float, default=1.0, help="resolvent parameter alpha > 0")
    p.add_argument("--tol", type=float, default=1e-9, help="relative quadrature tolerance")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("constants", parents=[common], help="print limit constants")
    p.add_argument("--p", type=float, required=True, help="modulus power p >= 1")
    p.add_argument("--beta", type=float, help="stability index for the stable constant")
    p.add_argument("--theorem", choices=["brownian", "stable"],
                   help="print only this theorem's constant")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("simulate", parents=[common], help="emit a path or local-time CSV")
    p.add_argument("what", choices=["path", "local-time", "gaussian"])
    _add_family(p, default="brownian-half")
    p.add_argument("--t", type=float, default=1.0, help="time horizon")
    p.add_argument("--n", type=int, default=2 ** 16, help="time steps or grid cells")
    p.add_argument("--eps", type=float, help="bin width (default: dyadic, >= 4 step scales)")
    p.add_argument("--r", type=float, default=0.5, help="fBm exponent for gaussian")
    p.add_argument("--a", type=float, default=0.0, help="left end for gaussian")
    p.add_argument("--b", type=float, default=1.0, help="right end for gaussian")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", parents=[common], help="print local-time moment oracles")
    _add_family(p, default="brownian-half")
    p.add_argument("--quantity", choices=["moment", "diff", "v"], default="moment")
    p.add_argument("--m", type=int, default=1, help="moment order")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--x", type=float, default=0.0, help="level")
    p.add_argument("--y", type=float, default=0.0, help="second level for diff")
    p.add_argument("--z", type=float, default=0.0, help="starting point")
    p.add_argument("--method", choices=["auto", "dirichlet", "quadrature"], default="auto")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("check", parents=[common], help="check C_q, Lambda_gamma or concavity")
    p.add_argument("condition", choices=["cq", "lambda-gamma", "concavity"])
    _add_family(p)
    p.add_argument("--r", type=float, help="use sigma^2 = h^r instead of a spectral source")
    p.add_argument("--alpha", type=float, default=0.0, help="spectral alpha (0 gives sigma_0)")
    p.add_argument("--q", type=float, default=2.0, help="q > 1 for condition C_q")
    p.add_argument("--gamma", type=float, default=1.0, help="gamma for Lambda_gamma")
    p.add_argument("--delta", type=float, default=1.0, help="concavity interval [0, delta]")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", parents=[common], help="run a Monte Carlo experiment")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--config", help="flat key = value file; flags override it")
    for flag, (typ, help_) in _VERIFY_FLAGS.items():
        p.add_argument(f"--{flag}", type=typ, dest=flag.replace("-", "_"), help=help_)
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--csv", help="CSV report path")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, AlignmentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, SimulationError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
