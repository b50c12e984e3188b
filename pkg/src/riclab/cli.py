"""Command-line front end.

Exit codes: 0 ok, 1 self-test failure, 2 usage or domain error, 3 resource
budget exceeded. Output never depends on the worker thread count
(``RICLAB_THREADS``), so a fixed seed reproduces the same bytes.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, field

from . import __version__, selftest
from .core_math import RHO0
from .errors import BudgetExceededError, DomainError
from .fs_constants import M_MIN, verify_constant_chain
from .randmat import Ensemble, empirical_ric, mc_deviation
from .rates import GrowthPoint, RateKind, RateModel
from .recovery import srsr_experiment
from .ric_bounds import Route, phase_curve, psi_bounds

EXIT_OK, EXIT_SELFTEST, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
CSV_SCHEMA = 1
# trials * r * n above this is refused as too large for a desk run
MC_WORK_BUDGET = 2 * 10 ** 10


@dataclass
class RunConfig:
    """Everything needed to reproduce a run; echoed into Monte Carlo outputs."""

    command: str
    params: dict = field(default_factory=dict)
    output_format: str = "json"
    output_path: str | None = None
    version: str = __version__


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _jsonable(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def _warn(msg):
    sys.stderr.write(f"warning: {msg}\n")


def _model_from(args) -> RateModel:
    kind = RateKind(args.model.upper())
    if kind is RateKind.LR and args.c_lr is None:
        _warn("C_LR has no published value; using the placeholder default 1")
    if kind is RateKind.TW:
        _warn("the TW rate is conjectural; results are hypothetical")
    return RateModel(kind,
                     c_tw=1.0 if args.c_tw is None else args.c_tw,
                     c_lr=1.0 if args.c_lr is None else args.c_lr,
                     c_fs=837.0 if args.c_fs is None else args.c_fs)


def _model_params(args):
    return {"model": args.model, "c_lr": args.c_lr, "c_fs": args.c_fs, "c_tw": args.c_tw}


def cmd_bounds(args) -> str:
    model = _model_from(args)
    point = GrowthPoint(args.delta, args.rhobar)
    if not point.in_theorem_domain and not args.force:
        raise DomainError(f"rhobar={args.rhobar} exceeds 2*rho0={2 * RHO0:.6f}; pass --force to compute anyway")
    rep = psi_bounds(model, point, args.route)
    record = {
        "model": args.model, "route": Route(args.route).value, "delta": args.delta, "rhobar": args.rhobar,
        "t0": rep.t0, "psi_min": rep.psi_min, "psi_max": rep.psi_max, "admissible": rep.admissible,
    }
    if args.format == "csv":
        return _csv([tuple(record)], [tuple(record.values())])
    return dumps(record)


def _csv_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv(header_rows, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={CSV_SCHEMA}\n")
    for h in header_rows:
        buf.write(",".join(h) + "\n")
    for row in rows:
        buf.write(",".join(_csv_value(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_phase_curve(args) -> str:
    model = _model_from(args)
    rows = phase_curve(model, args.route, args.points, args.rho_min, args.rho_max)
    if args.format == "json":
        return dumps({"schema": CSV_SCHEMA, "model": args.model, "route": Route(args.route).value,
                      "rows": [{"rho": r, "delta_threshold": d, "admissible": a} for r, d, a in rows]})
    return _csv([("rho", "delta_threshold", "admissible")], rows)


def cmd_mc_dev(args, config) -> str:
    model = _model_from(args) if args.model else None
    r = int(math.floor(args.rhobar * args.n))
    if args.check_fs_domain and args.ensemble == "rademacher" and not (M_MIN <= r < args.n):
        raise DomainError(f"--check-fs-domain: need {M_MIN} <= r = floor(rhobar n) < n, got r={r}, n={args.n}")
    if args.trials * max(r, 1) * args.n > MC_WORK_BUDGET:
        raise BudgetExceededError(f"trials * r * n = {args.trials * r * args.n} exceeds {MC_WORK_BUDGET}")
    if model is not None and model.kind is RateKind.FS and args.c0 is None:
        _warn("c0 has no published value; the FS tail bound uses c0 = 1 and is indicative only")
    est = mc_deviation(Ensemble(args.ensemble, args.seed), args.n, args.rhobar, args.t, args.trials,
                       args.tail, model, args.form, 1.0 if args.c0 is None else args.c0)
    return dumps({"config": asdict(config), "estimate": asdict(est)})


def cmd_ric_exact(args, config) -> str:
    est = empirical_ric(Ensemble(args.ensemble, args.seed), args.n, args.p, args.r, args.mode, args.k,
                        stream=args.stream)
    out = asdict(est)
    out["lower_bounds_only"] = est.lower_bounds_only
    return dumps({"config": asdict(config), "ric": out})


def cmd_recover(args, config) -> str:
    summary = srsr_experiment(Ensemble(args.ensemble, args.seed), args.n, args.p, args.s, args.eta,
                              args.noise_level, args.trials, args.signals_per_trial, args.ric_check)
    if not args.per_trial:
        summary.pop("records")
    return dumps({"config": asdict(config), "summary": summary})


def cmd_fs_consts(args) -> str:
    report = verify_constant_chain()
    if args.format == "csv":
        rows = [(r["relation"], r["lhs"], r["rhs"], r["rel_error"], r["passed"])
                for r in report["relations"] + report["errata"]]
        return _csv([("relation", "lhs", "rhs", "rel_error", "passed")], rows)
    return dumps(report)


def _add_model_args(p, default="ds"):
    p.add_argument("--model", choices=["tw", "ds", "lr", "fs"], default=default, type=str.lower)
    p.add_argument("--c-lr", type=float, default=None, help="LR constant (no published value; default 1)")
    p.add_argument("--c-fs", type=float, default=None, help="FS constant (default 837)")
    p.add_argument("--c-tw", type=float, default=None, help="TW constant (default 1)")


def _add_output_args(p, default_format):
    p.add_argument("--format", choices=["csv", "json"], default=default_format)
    p.add_argument("--output", "-o", default=None, help="write to this path instead of stdout")


def _add_ensemble_args(p):
    p.add_argument("--ensemble", choices=["gaussian", "rademacher"], default="gaussian")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riclab", description="RIC bounds, SRSR thresholds and checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="t0 and Psi bounds at one (delta, rhobar)")
    _add_model_args(p)
    p.add_argument("--route", choices=["eigen", "singular"], default="singular")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--rhobar", type=float, required=True)
    p.add_argument("--force", action="store_true", help="compute outside rhobar < 2 rho0 (admissible=false)")
    _add_output_args(p, "json")

    p = sub.add_parser("phase-curve", help="threshold on delta over a log grid in rho")
    _add_model_args(p)
    p.add_argument("--route", choices=["eigen", "singular"], default="singular")
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--rho-min", type=float, default=1e-6)
    p.add_argument("--rho-max", type=float, default=None)
    _add_output_args(p, "csv")

    p = sub.add_parser("mc-dev", help="Monte Carlo tail probability of extreme-spectrum deviations")
    _add_ensemble_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rhobar", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tail", choices=["largest", "smallest", "either"], default="either")
    p.add_argument("--form", choices=["eigen", "singular"], default=None)
    p.add_argument("--model", choices=["tw", "ds", "lr", "fs"], default=None, type=str.lower)
    p.add_argument("--c-lr", type=float, default=None)
    p.add_argument("--c-fs", type=float, default=None)
    p.add_argument("--c-tw", type=float, default=None)
    p.add_argument("--c0", type=float, default=None, help="FS prefactor constant (no published value; default 1)")
    p.add_argument("--check-fs-domain", action="store_true", help="require 54 <= r < n")
    _add_output_args(p, "json")

    p = sub.add_parser("ric-exact", help="empirical RICs of one seeded matrix")
    _add_ensemble_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--k", type=int, default=None, help="number of sampled supports")
    p.add_argument("--stream", type=int, default=0)
    _add_output_args(p, "json")

    p = sub.add_parser("recover", help="l1 recovery experiment with SRSR ratios")
    _add_ensemble_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--noise-level", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--signals-per-trial", type=int, default=1)
    p.add_argument("--ric-check", action="store_true", help="exhaustive RICs of order 2s per trial")
    p.add_argument("--per-trial", action="store_true", help="include per-trial records")
    _add_output_args(p, "json")

    p = sub.add_parser("fs-consts", help="Rademacher constant-chain consistency report")
    _add_output_args(p, "json")

    p = sub.add_parser("selftest", help="run the oracle suites")
    p.add_argument("--suite", action="append", choices=sorted(selftest.SUITES), default=None)
    return parser


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help or --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command == "selftest":
        return EXIT_OK if selftest.run(args.suite) else EXIT_SELFTEST
    params = {k: v for k, v in vars(args).items() if k not in ("command", "format", "output")}
    config = RunConfig(args.command, params, args.format, args.output)
    handlers = {
        "bounds": lambda: cmd_bounds(args),
        "phase-curve": lambda: cmd_phase_curve(args),
        "mc-dev": lambda: cmd_mc_dev(args, config),
        "ric-exact": lambda: cmd_ric_exact(args, config),
        "recover": lambda: cmd_recover(args, config),
        "fs-consts": lambda: cmd_fs_consts(args),
    }
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            text = handlers[args.command]()
    except BudgetExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except (DomainError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    _emit(text, args.output)
    return EXIT_OK
