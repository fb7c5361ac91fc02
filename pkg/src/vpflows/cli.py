"""Command line: ``vpflows invariants --model FILE`` and ``vpflows suite NAME``.

Exit codes: 0 all gating checks pass, 1 a numeric check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .model import ModelParseError, load_model
from .report import RunReport, digest, dumps
from .suites import DEFAULT_EPS, SUITES, model_invariants, run_suite

EPILOG = """\
outputs (with --out DIR): DIR/report.json and DIR/series/*.csv; without --out the
report is printed to stdout.  Floats carry 17 significant digits; keys are sorted.

CSV columns:
  ruelle_samples.csv      t,x,y,ru_T          per-point rotation rate (turns per unit time) at horizon T
  shift_scan.csv          eps,delta_h,delta_h_end_fixed
                                              helicity change with class start fixed / end class fixed
  fixed_point_counts.csv  n,enumerated,abs_det
  entropy_cos.csv         eps,h               entropy for roof 1 - eps cos(2 pi x)
  entropy_const.csv       eps,h               entropy for roof 1 - 0.3 eps
  min_period_orbits.csv   roof,order,min_period,orbits

exit codes: 0 pass, 1 numeric failure (failed block names on stderr), 2 usage or parse error.
"""


def _eps_list(text: str):
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty eps list")
    return vals


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="output directory for report.json and series/")
    common.add_argument("--seed", type=int, default=0, help="single seed for all randomness (default 0)")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker cap for 'suite all'")
    common.add_argument("--horizon", type=float, default=200.0, help="Ruelle horizon T (default 200)")
    common.add_argument("--order", type=_positive_int, default=12, help="periodic-orbit order n (default 12)")
    common.add_argument("--tol", type=float, default=1e-9, help="helicity check tolerance (default 1e-9)")
    common.add_argument("--eps-list", type=_eps_list, default=DEFAULT_EPS,
                        help="comma-separated eps values for the shift scan")
    p = argparse.ArgumentParser(prog="vpflows", description="Invariants and perturbation certificates "
                                "for volume-preserving model flows.", epilog=EPILOG,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"vpflows {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    inv = sub.add_parser("invariants", parents=[common], help="invariants of one model file",
                         epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    inv.add_argument("--model", type=Path, required=True, help="JSON model file")
    suite = sub.add_parser("suite", parents=[common], help="run a named acceptance bundle",
                           epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    suite.add_argument("name", choices=SUITES + ("all",))
    return p


def _suite_job(args):
    name, seed, order, horizon, tol, eps = args
    return run_suite(name, seed, order, horizon, tol, eps)


def _settings(args) -> dict:
    return {"seed": args.seed, "horizon": args.horizon, "order": args.order, "tol": args.tol,
            "eps_list": list(args.eps_list)}


def cmd_invariants(args) -> RunReport:
    raw = Path(args.model).read_bytes() if Path(args.model).is_file() else b""
    model = load_model(args.model)
    rep = RunReport(__version__, "invariants", digest(raw + dumps(_settings(args)).encode()), args.seed)
    rep.extend(model_invariants(model, args.horizon, args.order, args.tol, args.seed))
    return rep


def cmd_suite(args) -> RunReport:
    names = list(SUITES) if args.name == "all" else [args.name]
    settings = _settings(args)
    rep = RunReport(__version__, f"suite {args.name}", digest(dumps({"suites": names, **settings})), args.seed)
    jobs = [(n, args.seed, args.order, args.horizon, args.tol, tuple(args.eps_list)) for n in names]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(args.jobs, len(jobs))) as pool:
            parts = list(pool.map(_suite_job, jobs))
    else:
        parts = [_suite_job(j) for j in jobs]
    for part in parts:  # merged in the fixed suite order
        rep.extend(part)
    return rep


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        rep = cmd_invariants(args) if args.command == "invariants" else cmd_suite(args)
    except ModelParseError as exc:
        print(f"vpflows: parse error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"vpflows: numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out is not None:
        path = rep.write(args.out)
        print(f"vpflows: wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(rep.to_json())
    for name in rep.failed:
        print(f"vpflows: FAILED block {name}", file=sys.stderr)
    print(f"vpflows: wall time {time.perf_counter() - start:.2f} s", file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
