"""Command-line front end.

Data goes to stdout or ``--out``; progress and error records go to stderr.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .chain import (
    ParamVector,
    build_ma1_transition,
    build_mtf_transition,
    build_transition,
    detailed_balance_residual,
    ma1_stationary,
    parse_params,
    parse_weights,
    params_from_weights,
    stationarity_residual,
    stationary,
    symmetrized,
)
from .errors import GapForgeError, ValidationError
from .explorer import (
    ARG_TOL,
    CONV_TOL,
    DEFAULT_SCAN_MAX_N,
    MONO_TOL,
    GridSpec,
    PathSpec,
    multiplicity_census,
    scan_grid_min,
    scan_path,
)
from .mixing import esc_report, slow_start, tv_curve
from .perm import build_table, check_n, parse_perm
from .recipes import RECIPES, run_recipe
from .spectral import (
    CLUSTER_TOL,
    SIMILARITY_TOL,
    eigen_sym,
    gap_from_spectrum,
    pairing_defect,
    similarity_certificate,
)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(_plain(report), indent=2, allow_nan=True) + "\n"


def comparable(report: dict) -> dict:
    """Report without the run-dependent ``timings`` block."""
    return {k: v for k, v in report.items() if k != "timings"}


def _read_param_source(text: str) -> str:
    if text.startswith("@"):
        return Path(text[1:]).read_text()
    return text


def _params(args, required: bool = False) -> ParamVector:
    sources = [s for s in (args.p, args.weights) if s is not None]
    if len(sources) > 1:
        raise ValidationError("give exactly one of --p and --weights")
    if args.p is not None:
        P = parse_params(_read_param_source(args.p), args.n)
    elif args.weights is not None:
        P = params_from_weights(parse_weights(args.weights))
    elif required:
        raise ValidationError("this command needs --p or --weights")
    else:
        if args.n is None:
            raise ValidationError("--n is required when no parameters are given (unweighted case)")
        P = ParamVector.uniform(args.n)
    if args.n is not None and P.n != args.n:
        raise ValidationError(f"parameters describe n={P.n} but --n {args.n} was given")
    check_n(P.n, args.max_n_override)
    return P


def cmd_gap(args):
    P = _params(args)
    table = build_table(P.n, args.max_n_override)
    S = symmetrized(build_transition(P, table), stationary(P, table))
    rep = gap_from_spectrum(eigen_sym(S, args.cluster_tol), P.n)
    return {"params": P.to_json()}, rep.to_json(), {"cluster_tol": args.cluster_tol}, None


def cmd_spectrum(args):
    P = _params(args)
    table = build_table(P.n, args.max_n_override)
    spec = eigen_sym(symmetrized(build_transition(P, table), stationary(P, table)), args.cluster_tol)
    results = {
        "eigenvalues": spec.eigenvalues,
        "cluster_id": spec.cluster_ids(),
        "multiplicities": [len(c) for c in spec.clusters],
    }
    return {"params": P.to_json()}, results, {"cluster_tol": args.cluster_tol}, spec.to_csv()


def cmd_verify(args):
    P = _params(args)
    table = build_table(P.n, args.max_n_override)
    K = build_transition(P, table)
    pi = stationary(P, table)
    db = detailed_balance_residual(K, pi)
    st = stationarity_residual(K, pi)
    spec = eigen_sym(symmetrized(K, pi), args.cluster_tol)
    cert = similarity_certificate(P, table, K)
    pair = pairing_defect(spec)
    tol = {"detailed_balance": 1e-13, "stationarity": 1e-12, "pairing": 1e-9,
           "similarity": SIMILARITY_TOL, "trace": 1e-9, "min_eigenvalue": -1e-10}
    results = {
        "detailed_balance_residual": db,
        "stationarity_residual": st,
        "pairing_defect": pair,
        "min_eigenvalue": float(spec.eigenvalues[-1]),
        "similarity": cert.to_json(),
        "z": pi.z,
        "log_domain": pi.log_domain,
    }
    results["passed"] = (db <= tol["detailed_balance"] and st <= tol["stationarity"]
                         and pair <= tol["pairing"] and cert.passed
                         and abs(cert.trace_defect) <= tol["trace"]
                         and results["min_eigenvalue"] >= tol["min_eigenvalue"])
    return {"params": P.to_json()}, results, tol, None


def cmd_scan_grid(args):
    if args.n is None or args.step is None:
        raise ValidationError("scan-grid needs --n and --step")
    cap = args.max_n_override if args.max_n_override is not None else DEFAULT_SCAN_MAX_N
    res = scan_grid_min(GridSpec(args.n, args.step), parallelism=args.jobs, max_n=cap,
                        progress=not args.quiet)
    summary = res.summary()
    summary.pop("wall_time")
    return ({"n": args.n, "step": args.step}, summary, {"arg_tol": ARG_TOL},
            res.to_csv(), {"scan_seconds": res.wall_time})


def cmd_scan_path(args):
    P = _params(args, required=True)
    prof = scan_path(PathSpec(P, args.steps, args.t_max))
    return ({"params": P.to_json(), "steps": args.steps, "t_max": args.t_max}, prof.to_json(),
            {"mono_tol": MONO_TOL, "conv_tol": CONV_TOL}, prof.to_csv())


def cmd_census(args):
    P = _params(args)
    c = multiplicity_census(P)
    return {"params": P.to_json()}, c.to_json(), {"half_tol": 1e-12, "gap_tol": 1e-9}, None


def cmd_mixing(args):
    if args.weights is None:
        raise ValidationError("mixing needs --weights")
    w = parse_weights(args.weights)
    check_n(w.n, args.max_n_override)
    table = build_table(w.n, args.max_n_override)
    if args.chain == "ma1":
        K, pi = build_ma1_transition(w, table), ma1_stationary(w, table)
    elif args.chain == "uniform":
        P = params_from_weights(w)
        K, pi = build_transition(P, table), stationary(P, table)
    else:
        K, pi = build_mtf_transition(w, table)
    start = parse_perm(args.start, w.n) if args.start else slow_start(w.n)
    curve = tv_curve(K, pi, start, args.steps, table)
    return ({"weights": list(w.w), "chain": args.chain, "horizon": args.steps},
            curve.to_json(), {}, curve.to_csv())


def cmd_esc(args):
    if args.weights is None:
        raise ValidationError("esc needs --weights")
    w = parse_weights(args.weights)
    check_n(w.n, args.max_n_override)
    return {"weights": list(w.w)}, esc_report(w).to_json(), {"ordering": 1e-10}, None


def cmd_reproduce(args):
    kwargs = {"jobs": args.jobs, "progress": not args.quiet}
    if args.recipe == "evidence-c":
        kwargs["n"] = args.n or 4
        kwargs["step"] = args.step or 0.05
    out = run_recipe(args.recipe, strict=args.strict, **kwargs)
    return {"recipe": args.recipe, "strict": args.strict}, out, {}, None


COMMANDS = {
    "gap": cmd_gap,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "scan-grid": cmd_scan_grid,
    "scan-path": cmd_scan_path,
    "census": cmd_census,
    "mixing": cmd_mixing,
    "esc": cmd_esc,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--p", help="'i,j=v;...' text, JSON, or @file")
    common.add_argument("--weights", help="comma-separated nonincreasing weights")
    common.add_argument("--step", type=float, help="grid spacing")
    common.add_argument("--steps", type=int, default=11, help="path points or mixing horizon")
    common.add_argument("--t-max", type=float, default=1.0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--max-n-override", type=int)
    common.add_argument("--cluster-tol", type=float, default=CLUSTER_TOL)
    common.add_argument("--deterministic", action="store_true",
                        help="omit timings so identical runs give identical bytes")
    common.add_argument("--quiet", action="store_true", help="no progress on stderr")

    parser = argparse.ArgumentParser(prog="gapforge", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "mixing":
            sp.add_argument("--chain", choices=("ma1", "uniform", "mtf"), default="ma1")
            sp.add_argument("--start", help="start permutation, e.g. '1,2,4,3'")
        if name == "reproduce":
            sp.add_argument("recipe", choices=sorted(RECIPES))
            sp.add_argument("--strict", action="store_true",
                            help="conjecture findings count as failures")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat()
    try:
        out = COMMANDS[args.command](args)
    except (GapForgeError, OSError) as exc:
        record = {"command": args.command, "error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 2
    inputs, results, tolerances, table = out[:4]
    timings = {"wall_seconds": time.perf_counter() - started, "timestamp": stamp}
    if len(out) > 4:
        timings.update(out[4])
    report = {
        "command": args.command,
        "inputs": inputs,
        "results": results,
        "tolerances": tolerances,
        "timings": timings,
        "version": __version__,
    }
    if args.deterministic:
        report = comparable(report)
    if args.format == "csv":
        if table is None:
            print(json.dumps({"command": args.command, "error": "ValidationError",
                              "message": f"{args.command} has no CSV form"}), file=sys.stderr)
            return 2
        text = table
    else:
        text = dumps_report(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if isinstance(results, dict) and results.get("passed") is False:
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
