"""
Command-line surface of the toolkit.

Every subcommand writes its report (JSON, or CSV for samples) to stdout or
--out and signals the verdict through the exit status: 0 verified, 1 negative
mathematical verdict, 2 usage or evaluation error.
"""
import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

from nwskit.config import (
    DEFAULT_SEED, LOG_LEVEL, MOL_ERROR_TOL, MOL_ORDER_RANGE, RESIDUAL_TOL, ZERO_TEST_TOL,
)
from nwskit.core import MATCHING_INSTANCES, VerificationRunner
from nwskit.equivalence import (
    gauge_transform, push_coefficients, reducibility_lambda, reducible_triple,
    to_constant_transform,
)
from nwskit.exceptions import NWSError
from nwskit.expr import parse
from nwskit.models import CoefficientTriple, Grid, PDEInstance, VectorField, residual_stats, sample
from nwskit.numerics import convergence_order, mol_solve
from nwskit.solutions import FamilyParams, get_family, instantiate, list_families
from nwskit.symmetry import check_lie_invariance, classify_lie, default_box, verify_nonclassical
from nwskit.utils import log_report, setup_logging

# Configure logging
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

Interval = Tuple[float, float]


def interval_arg(text: str) -> Interval:
    """Parse "lo:hi" into a nonempty interval."""
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        bounds = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got '{text}'") from None
    if not (math.isfinite(bounds[0]) and math.isfinite(bounds[1]) and bounds[0] < bounds[1]):
        raise argparse.ArgumentTypeError(f"interval '{text}' is empty")
    return bounds


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got '{text}'") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got '{text}'")
    return value


@dataclass
class RunConfig:
    """Resolved options of one invocation."""
    command: str
    a: Optional[str] = None
    b: Optional[str] = None
    c: Optional[str] = None
    t_interval: Optional[Interval] = None
    x_interval: Optional[Interval] = None
    nt: int = 41
    nx: int = 81
    lam: Optional[float] = None
    family: Optional[str] = None
    params: FamilyParams = field(default_factory=FamilyParams)
    tol: Optional[float] = None
    seed: int = DEFAULT_SEED
    fmt: str = "json"
    out: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        known = {"command", "a", "b", "c", "t", "x", "nt", "nx", "lam", "family",
                 "params", "tol", "seed", "format", "out", "log_level"}
        return cls(
            command=args.command,
            a=getattr(args, "a", None),
            b=getattr(args, "b", None),
            c=getattr(args, "c", None),
            t_interval=getattr(args, "t", None),
            x_interval=getattr(args, "x", None),
            nt=getattr(args, "nt", None) or 41,
            nx=getattr(args, "nx", None) or 81,
            lam=getattr(args, "lam", None),
            family=getattr(args, "family", None),
            params=FamilyParams.parse(getattr(args, "params", None)),
            tol=getattr(args, "tol", None),
            seed=args.seed,
            fmt=getattr(args, "format", None) or ("csv" if args.command == "sample" else "json"),
            out=args.out,
            extra={k: v for k, v in vars(args).items() if k not in known},
        )

    def triple(self, default_interval: Optional[Interval] = None) -> CoefficientTriple:
        """The coefficient triple; --lambda without --b builds the reducible b."""
        interval = self.t_interval or default_interval
        if interval is None:
            raise NWSError("--t is required")
        a = parse(self.a or "1", {"t"})
        c = parse(self.c or "1", {"t"})
        if self.b is None and self.lam is not None:
            return reducible_triple(a, c, self.lam, interval)
        return CoefficientTriple(a, parse(self.b or "0", {"t"}), c, interval)


def _clean(value: Any) -> Any:
    """Replace non-finite floats by None so that reports are valid JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def emit_json(cfg: RunConfig, report: Dict[str, Any]):
    text = json.dumps(_clean(report), sort_keys=True, indent=2, ensure_ascii=False)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# Subcommands

def cmd_parse_check(cfg: RunConfig) -> int:
    variables = set(v.strip() for v in cfg.extra["vars"].split(",") if v.strip())
    e = parse(cfg.extra["expr"], variables)
    emit_json(cfg, {"ok": True, "text": e.text(), "free_vars": sorted(e.free_vars())})
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    if cfg.t_interval is None:
        raise NWSError("--t is required")
    tol = cfg.tol or ZERO_TEST_TOL
    if cfg.a is None and cfg.b is None:
        case = classify_lie(parse(cfg.c or "1", {"t"}), cfg.t_interval, tol=tol, seed=cfg.seed)
    else:
        triple = cfg.triple()
        case = classify_lie(triple.c, triple.t_interval, triple, tol=tol, seed=cfg.seed)
    report = case.to_dict()
    log_report(logger, "Lie classification", report)
    emit_json(cfg, report)
    return EXIT_OK


def cmd_criterion(cfg: RunConfig) -> int:
    triple = cfg.triple()
    r = reducibility_lambda(triple, tol=cfg.tol or ZERO_TEST_TOL, seed=cfg.seed)
    report = r.to_dict()
    log_report(logger, "Reducibility criterion", report)
    emit_json(cfg, report)
    return EXIT_OK if r.reducible else EXIT_NEGATIVE


def cmd_transform(cfg: RunConfig) -> int:
    triple = cfg.triple()
    if cfg.extra["mode"] == "gauge":
        g, image = gauge_transform(triple)
    else:
        r = reducibility_lambda(triple, tol=cfg.tol or ZERO_TEST_TOL, seed=cfg.seed)
        if not r.reducible:
            emit_json(cfg, {"reducible": False, "transform": None})
            return EXIT_NEGATIVE
        g = to_constant_transform(triple, r)
        image = push_coefficients(g, triple)
    emit_json(cfg, {"transform": g.to_dict(), "image": image.to_dict()})
    return EXIT_OK


def _coefficients_given(cfg: RunConfig) -> bool:
    return any(v is not None for v in (cfg.a, cfg.b, cfg.c, cfg.lam))


def _instance_for(cfg: RunConfig, family_id: str) -> Tuple[CoefficientTriple, Interval]:
    """Triple from the flags, or the family's matching instance when none is given."""
    matching = MATCHING_INSTANCES[get_family(family_id).lambda_sign]
    if not _coefficients_given(cfg):
        triple = CoefficientTriple.from_strings(matching.a, matching.b, matching.c,
                                                cfg.t_interval or matching.t_interval)
    else:
        triple = cfg.triple(matching.t_interval)
    return triple, cfg.x_interval or matching.x_window


def cmd_verify_solution(cfg: RunConfig) -> int:
    tol = cfg.tol or RESIDUAL_TOL
    if cfg.extra.get("all"):
        runner = VerificationRunner(cfg.nt, cfg.nx, tol, flip=cfg.params.flipped)
        results = runner.run()
        passed = all(r.passed for r in results)
        emit_json(cfg, {"pass": passed, "families": [r.to_dict() for r in results]})
        return EXIT_OK if passed else EXIT_NEGATIVE

    if not cfg.family:
        raise NWSError("--family or --all is required")
    triple, (x0, x1) = _instance_for(cfg, cfg.family)
    r = reducibility_lambda(triple, seed=cfg.seed)
    solution = instantiate(cfg.family, triple, r, cfg.params)
    lo, hi = triple.t_interval
    grid = Grid(lo, hi, cfg.nt, x0, x1, cfg.nx)
    report = residual_stats(PDEInstance(triple), solution, grid)
    passed = report.max_abs <= tol
    out = {"family": cfg.family, "lambda": r.lambda_, "pass": passed, **report.to_dict()}
    log_report(logger, f"Residual of {cfg.family}", out)
    emit_json(cfg, out)
    return EXIT_OK if passed else EXIT_NEGATIVE


def cmd_verify_operator(cfg: RunConfig) -> int:
    tol = cfg.tol or ZERO_TEST_TOL
    xi = parse(cfg.extra["xi"])
    eta = parse(cfg.extra["eta"])
    if cfg.extra["mode"] == "lie":
        tau = parse(cfg.extra["tau"])
        triple = cfg.triple((0.0, 1.0))
        ok = check_lie_invariance(PDEInstance(triple), VectorField(tau, xi, eta), tol, cfg.seed)
        emit_json(cfg, {"pass": ok})
        return EXIT_OK if ok else EXIT_NEGATIVE

    c = parse(cfg.c or "1", {"t"})
    box = None
    if cfg.t_interval or cfg.x_interval:
        box = default_box()
        if cfg.t_interval:
            box["t"] = cfg.t_interval
        if cfg.x_interval:
            box["x"] = cfg.x_interval
    report = verify_nonclassical(xi, eta, c, box, tol, cfg.seed)
    emit_json(cfg, report.to_dict())
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_simulate(cfg: RunConfig) -> int:
    family = get_family(cfg.family or "TW")
    triple, (x0, x1) = _instance_for(cfg, family.id)
    t0, t1 = triple.t_interval
    if not _coefficients_given(cfg):
        w_t0, w_t1, w_x0, w_x1 = family.mol_window
        if cfg.t_interval is None:
            t0, t1 = w_t0, w_t1
        if cfg.x_interval is None:
            x0, x1 = w_x0, w_x1
    tol = cfg.tol or MOL_ERROR_TOL
    r = reducibility_lambda(triple, seed=cfg.seed)
    solution = instantiate(family.id, triple, r, cfg.params)
    p = PDEInstance(triple)
    levels = [cfg.nx * 2 ** i for i in range(3)] if cfg.extra.get("refine") else [cfg.nx]
    errors, stats = [], []
    for nx in levels:
        field_ = mol_solve(p, solution, t0, t1, x0, x1, nx)
        errors.append(field_.max_error(solution))
        stats.append(field_.stats)
    # the finest grid decides; a refinement study must also show second order
    passed = errors[-1] <= tol
    report: Dict[str, Any] = {"family": family.id, "window": [t0, t1, x0, x1], "nx": levels,
                              "errors": errors, "stats": stats, "tol": tol}
    if len(errors) >= 3:
        convergence = convergence_order(errors)
        report.update(convergence.to_dict())
        passed = passed and convergence.within(*MOL_ORDER_RANGE)
    report["pass"] = passed
    log_report(logger, f"Method of lines for {family.id}", report)
    emit_json(cfg, report)
    return EXIT_OK if passed else EXIT_NEGATIVE


def cmd_sample(cfg: RunConfig) -> int:
    if not cfg.family:
        raise NWSError("--family is required")
    triple, (x0, x1) = _instance_for(cfg, cfg.family)
    r = reducibility_lambda(triple, seed=cfg.seed)
    solution = instantiate(cfg.family, triple, r, cfg.params)
    lo, hi = triple.t_interval
    grid = Grid(lo, hi, cfg.nt, x0, x1, cfg.nx)
    p = PDEInstance(triple)
    if cfg.fmt == "csv":
        if cfg.out:
            sample(p, solution, grid, cfg.out)
        else:
            sample(p, solution, grid, sys.stdout)
        return EXIT_OK
    table = sample(p, solution, grid)
    records = [
        {"t": row.t, "x": row.x, "u": None if math.isnan(row.u) else row.u}
        for row in table.itertuples(index=False)
    ]
    emit_json(cfg, {"family": cfg.family, "grid": grid.to_dict(), "samples": records})
    return EXIT_OK


def cmd_list_solutions(cfg: RunConfig) -> int:
    emit_json(cfg, {"families": [f.to_dict() for f in list_families()]})
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "parse-check": cmd_parse_check,
    "classify": cmd_classify,
    "criterion": cmd_criterion,
    "transform": cmd_transform,
    "verify-solution": cmd_verify_solution,
    "verify-operator": cmd_verify_operator,
    "simulate": cmd_simulate,
    "sample": cmd_sample,
    "list-solutions": cmd_list_solutions,
}


# Flags whose values may start with "-" (expressions, intervals, numbers)
VALUE_FLAGS = frozenset({"--a", "--b", "--c", "--xi", "--eta", "--tau", "--t", "--x", "--lambda", "--params"})


def attach_values(argv: Sequence[str]) -> list:
    """Rewrite "--c -exp(t)" as "--c=-exp(t)" so argparse does not read the value as a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per capability."""
    parser = argparse.ArgumentParser(
        prog="nwskit",
        description="Classify, transform and solve variable-coefficient Newell-Whitehead-Segel equations",
    )
    parser.add_argument("--log-level", default=LOG_LEVEL, help="Logging level (default from NWS_LOG_LEVEL)")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Zero-test seed")
    common.add_argument("--out", metavar="PATH", help="Write the report here instead of stdout")
    common.add_argument("--tol", type=positive_float, help="Verification tolerance")
    common.add_argument("--format", choices=["json", "csv"],
                        help="Report format (default json; csv is for sample only and its default)")

    coeffs = argparse.ArgumentParser(add_help=False)
    coeffs.add_argument("--a", metavar="EXPR", help="a(t) (default 1)")
    coeffs.add_argument("--b", metavar="EXPR", help="b(t) (default 0)")
    coeffs.add_argument("--c", metavar="EXPR", help="c(t) (default 1)")
    coeffs.add_argument("--t", type=interval_arg, metavar="LO:HI", help="Working t-interval")
    coeffs.add_argument("--lambda", dest="lam", type=float, metavar="VAL",
                        help="Build b = λa² + a'/a − c'/(2c) when --b is omitted")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--x", type=interval_arg, metavar="LO:HI", help="x-window")
    grid.add_argument("--nt", type=int, help="Grid points in t")
    grid.add_argument("--nx", type=int, help="Grid points (intervals for simulate) in x")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", metavar="ID", help="Catalog family id")
    family.add_argument("--params", metavar="K=V,...", help="Family parameters, flip=1 negates")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse-check", parents=[common], help="Parse and print an expression")
    p.add_argument("expr", help="Expression text")
    p.add_argument("--vars", default="t,x,u", help="Declared variables (comma-separated)")

    sub.add_parser("classify", parents=[common, coeffs], help="Lie symmetry classification")
    sub.add_parser("criterion", parents=[common, coeffs], help="Reducibility criterion")

    p = sub.add_parser("transform", parents=[common, coeffs], help="Gauge or reducing transformation")
    p.add_argument("--mode", choices=["gauge", "constant"], default="constant")

    p = sub.add_parser("verify-solution", parents=[common, coeffs, grid, family],
                       help="Residual of a catalog family on a triple")
    p.add_argument("--all", action="store_true", help="Run every family on its matching instance")

    p = sub.add_parser("verify-operator", parents=[common, coeffs, grid],
                       help="Nonclassical (or Lie) operator check")
    p.add_argument("--xi", required=True, metavar="EXPR")
    p.add_argument("--eta", required=True, metavar="EXPR")
    p.add_argument("--tau", default="1", metavar="EXPR", help="τ for --mode lie")
    p.add_argument("--mode", choices=["nonclassical", "lie"], default="nonclassical")

    p = sub.add_parser("simulate", parents=[common, coeffs, grid, family],
                       help="Method of lines against a closed-form solution")
    p.add_argument("--refine", action="store_true", help="Also run 2nx and 4nx and report orders")

    sub.add_parser("sample", parents=[common, coeffs, grid, family], help="Tabulate a solution")

    sub.add_parser("list-solutions", parents=[common], help="List the solution catalog")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name (default sys.argv[1:]).

    Returns:
        The exit status.
    """
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(attach_values(argv))
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR

    try:
        setup_logging(args.log_level)
    except ValueError as e:
        sys.stderr.write(f"nwskit: {e}\n")
        return EXIT_ERROR

    if args.command == "simulate" and args.nx is None:
        args.nx = 100
    try:
        cfg = RunConfig.from_args(args)
        if cfg.nt < 1 or cfg.nx < 1:
            raise NWSError("--nt and --nx must be positive")
        if cfg.fmt == "csv" and cfg.command != "sample":
            raise NWSError("--format csv is only available for sample")
        return COMMANDS[cfg.command](cfg)
    except NWSError as e:
        logger.error(f"{args.command}: {e}")
        sys.stderr.write(f"nwskit {args.command}: {e}\n")
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"Error in {args.command}: {e}")
        sys.stderr.write(f"nwskit {args.command}: {e}\n")
        return EXIT_ERROR
