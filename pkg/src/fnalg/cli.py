"""``fnalg`` command line: eval, table, check, demo-lognormal, demo-polar.

Exit codes: 0 success, 1 law-check failure, 2 usage or parse error,
3 domain or capability error.
"""

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import config
from .catalog import FAULTS, build_catalog, lookup
from .core import Function
from .errors import CapabilityError, DegenerateError, DomainError, FnAlgError, InsufficientDataError
from .expr import ExpressionError, build, domain_error, parse_real
from .integration import QuadratureConfig, definite_integral
from .laws import SUITES, run_suite
from .models import (
    MultivariateNormal,
    fit_normal,
    read_data_csv,
    transform_model,
    transform_model_multivariate,
    transformed_aom,
)
from .multivariate import jacobian_determinant, polar2cartesian

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
DEMO_SAMPLES = 10_000


class UsageError(Exception):
    pass


def _fmt(v):
    return f"{v:.17g}"


def _real(text):
    try:
        return parse_real(text)
    except (FnAlgError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc


def _report(exc, err):
    print(f"error: {exc}", file=err)
    if isinstance(exc, ExpressionError):
        print(exc.caret(), file=err)


def cmd_eval(args, out, err):
    f, spans = build(args.expr)
    try:
        value = f.apply(args.x)
    except DomainError as exc:
        raise domain_error(args.expr, spans, exc) from exc
    print(_fmt(value), file=out)
    return EXIT_OK


def cmd_table(args, out, err):
    if args.steps < 1:
        raise UsageError("steps must be at least 1")
    f, spans = build(args.expr)
    rows = []
    for i in range(args.steps + 1):
        x = args.hi if i == args.steps else args.lo + i * (args.hi - args.lo) / args.steps
        try:
            rows.append((x, f.apply(x), None))
        except DomainError as exc:
            message = str(domain_error(args.expr, spans, exc))
            print(f"row {i}: {message}", file=err)
            rows.append((x, None, message))
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["x", "value"])
        for x, v, _ in rows:
            writer.writerow([repr(x), "ERROR" if v is None else repr(v)])
    else:
        payload = []
        for x, v, message in rows:
            row = {"x": x, "value": v}
            if message is not None:
                row["error"] = message
            payload.append(row)
        json.dump(payload, out, indent=1)
        out.write("\n")
    return EXIT_OK


def cmd_check(args, out, err):
    entries = build_catalog(args.inject_fault)
    results = run_suite(args.suite, entries)
    for r in results:
        print(r.line(), file=out)
    failed = [r for r in results if not r.passed]
    print(f"{len(results)} laws checked, {len(failed)} failed", file=out)
    return EXIT_CHECK if failed else EXIT_OK


def cmd_demo_lognormal(args, out, err):
    log = lookup("log").object
    rows = read_data_csv(args.input)
    for lineno, d in rows:
        if not d.value > 0:
            raise DomainError(log, d.value, f"row {lineno}: log-Normal data must be positive")
    data = [d for _, d in rows]
    fit = fit_normal([log.apply(d.value) for d in data])
    model = transform_model(fit, log)
    first = data[0]
    sample = model.sample(np.random.default_rng(config.settings.seed), DEMO_SAMPLES)
    print(f"n = {len(data)}", file=out)
    print(f"mu = {fit.mu:.6f}", file=out)
    print(f"sigma = {fit.sigma:.6f}", file=out)
    print(f"aom[first] = {transformed_aom(log, first):.6g} (value {first.value:g}, aom {first.aom:g})", file=out)
    print(f"sample mean = {np.mean(sample):.6f}", file=out)
    print(f"sample sd = {np.std(sample, ddof=1):.6f}", file=out)
    return EXIT_OK


def cmd_demo_polar(args, out, err):
    """Standard bivariate Normal on Cartesian points, seen as a density over (r, θ)."""
    model = transform_model_multivariate(MultivariateNormal.standard(2), polar2cartesian)
    points = model.sample(np.random.default_rng(config.settings.seed), args.n)
    radius = points[:, 0]
    inner = QuadratureConfig(panels=16, abs_tol=1e-7)
    outer = QuadratureConfig(panels=64, abs_tol=1e-7)

    def over_theta(r):
        return definite_integral(Function(lambda t: model.density([r, t])), -math.pi, math.pi, inner)

    total = definite_integral(Function(over_theta), 1e-12, 6.0, outer)
    print("r,theta,det_J,density", file=out)
    for r, theta in ((0.5, 0.0), (1.0, math.pi / 4), (2.0, -math.pi / 2), (3.0, 3.0)):
        det = jacobian_determinant(polar2cartesian, [r, theta])
        print(f"{r:g},{theta:.6f},{det:.12g},{model.density([r, theta]):.12g}", file=out)
    print(f"normalization = {total:.9f}", file=out)
    print(f"sample mean r = {np.mean(radius):.6f} (Rayleigh mean {math.sqrt(math.pi / 2):.6f})", file=out)
    print(f"sample mean theta = {np.mean(points[:, 1]):.6f}", file=out)
    return EXIT_OK


def make_parser():
    p = argparse.ArgumentParser(prog="fnalg", description="Function algebra calculator and law checker.")
    p.add_argument("--fd-step", type=float, help="finite-difference step (default 0.001)")
    p.add_argument("--quad-tol", type=float, help="quadrature convergence tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, help="seed for sampling commands (default 0)")
    p.add_argument("--config", help="JSON file with fd_step, quad_panels, quad_tol, seed")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate an expression at a point")
    e.add_argument("expr")
    e.add_argument("x", type=_real)
    e.set_defaults(run=cmd_eval)

    t = sub.add_parser("table", help="tabulate an expression on an even grid")
    t.add_argument("expr")
    t.add_argument("lo", type=_real)
    t.add_argument("hi", type=_real)
    t.add_argument("steps", type=int)
    t.add_argument("format", nargs="?", choices=("csv", "json"), default=None)
    t.add_argument("--format", dest="format_opt", choices=("csv", "json"))
    t.set_defaults(run=cmd_table)

    c = sub.add_parser("check", help="run law-check suites")
    c.add_argument("suite", choices=SUITES + ("all",))
    c.add_argument("--inject-fault", choices=FAULTS, help="plant a known defect in the catalog")
    c.set_defaults(run=cmd_check)

    d = sub.add_parser("demo-lognormal", help="fit a log-Normal model to positive data in a CSV file")
    d.add_argument("input")
    d.add_argument("--seed", dest="demo_seed", type=int)
    d.set_defaults(run=cmd_demo_lognormal)

    q = sub.add_parser("demo-polar", help="bivariate Normal viewed in polar coordinates")
    q.add_argument("--n", type=int, default=DEMO_SAMPLES)
    q.add_argument("--seed", dest="demo_seed", type=int)
    q.set_defaults(run=cmd_demo_polar)
    return p


def _configure(args):
    """Defaults < config file < environment < flags."""
    changes = {}
    if args.config:
        changes.update(config.from_file(args.config))
    changes.update(config.from_environment())
    flags = {"fd_step": args.fd_step, "quad_tol": args.quad_tol, "seed": args.seed}
    changes.update({k: v for k, v in flags.items() if v is not None})
    config.update(**changes)


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "format_opt", None):
        args.format = args.format_opt
    if getattr(args, "command", None) == "table" and args.format is None:
        args.format = "csv"
    if hasattr(args, "demo_seed"):
        args.seed = args.demo_seed if args.demo_seed is not None else args.seed
    saved = config.Settings(**vars(config.settings))
    try:
        _configure(args)
        return args.run(args, out, err)
    except ExpressionError as exc:
        _report(exc, err)
        return EXIT_USAGE if exc.kind == "parse" else EXIT_DOMAIN
    except (DomainError, CapabilityError, InsufficientDataError, DegenerateError) as exc:
        _report(exc, err)
        return EXIT_DOMAIN
    except (UsageError, ValueError, OSError) as exc:
        _report(exc, err)
        return EXIT_USAGE
    finally:
        config.update(**vars(saved))


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
