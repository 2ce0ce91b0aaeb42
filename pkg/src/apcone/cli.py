"""Command-line front end.

Subcommands:
  example  run a built-in instance (ex3.2, ex3.3, ex3.4, ex4.4, ex6.1)
  run      run a custom plane described by a JSON config file
  verify   run one of the seeded verification suites

Trace output is CSV with header ``k,dist,psd_rank,inv2,inv6`` where
inv_p = dist^-p; summary lines start with '#', so a trace printed to stdout
still parses.  Exit codes: 0 success, 1 failed check or run, 2 usage error.
The APCONE_LOG environment variable (quiet|info|debug) sets log verbosity.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from .apengine import run_ap
from .catalog import BUILTIN_IDS, get_example
from .planes import PlaneSpec, build_plane, singularity_degree
from .rates import fit_geometric, fit_inverse_power
from .slowcurve import curve_point
from .verify import SUITES, run_suite

log = logging.getLogger("apcone")


def _setup_logging():
    level = {"quiet": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}.get(
        os.environ.get("APCONE_LOG", "quiet").lower(), logging.ERROR)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def trace_csv(trace):
    lines = ["k,dist,psd_rank,inv2,inv6"]
    for k, (d, r) in enumerate(zip(trace.dists, trace.psd_ranks)):
        inv2 = d ** -2.0 if d > 0 else float("inf")
        inv6 = d ** -6.0 if d > 0 else float("inf")
        lines.append(f"{k},{d:.17g},{int(r)},{inv2:.17g},{inv6:.17g}")
    return "\n".join(lines) + "\n"


def _emit(csv_text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(csv_text)
        log.info("trace written to %s", out)
    else:
        sys.stdout.write(csv_text)


def _positive_window(trace, k_min, k_max):
    last = len(trace.dists) - 1
    while last > 0 and trace.dists[last] <= 0.0:
        last -= 1
    return max(0, min(k_min, last - 1)), min(k_max, last)


def _summarize(trace, model, power):
    n = len(trace.dists) - 1
    if n < 3:
        return "too few iterations for a fit"
    try:
        if model == "geometric":
            window = _positive_window(trace, max(2, n // 10), n)
            fit = fit_geometric(trace, window)
            return (f"geometric fit on k in {fit.window}: "
                    f"ratio={fit.ratio:.6f} amplitude={fit.amplitude:.4g} "
                    f"rmse={fit.rmse:.2e}")
        window = _positive_window(trace, max(1, n // 10), n)
        fit = fit_inverse_power(trace, power, window)
        return (f"1/dist^{power} fit on k in {fit.window}: "
                f"slope={fit.slope:.6g} intercept={fit.intercept:.6g} "
                f"rmse={fit.rmse:.2e}")
    except ValueError as exc:
        return f"fit unavailable ({exc})"


def _parse_start(text, inst=None, spec=None, plane=None):
    """Start forms: a float, a comma triple, or slowest-curve:t0."""
    if text.startswith("slowest-curve:"):
        t0 = float(text.split(":", 1)[1])
        the_spec = spec if spec is not None else (inst.spec if inst else None)
        the_plane = plane if plane is not None else (inst.plane if inst else None)
        if the_spec is None:
            raise ValueError("slowest-curve starts need a type2 plane")
        return the_plane.coefficients(curve_point(the_spec, t0).G)
    if "," in text:
        return np.array([float(tok) for tok in text.split(",")])
    value = float(text)
    dim = (plane or inst.plane).dim
    if dim != 1:
        raise ValueError(
            f"plane has {dim} coefficients; pass a comma triple or "
            "slowest-curve:t0")
    return np.array([value])


def cmd_example(args):
    inst = get_example(args.ident, args.variant)
    iters = args.iters if args.iters is not None else inst.default_iters
    start = inst.start if args.start is None else _parse_start(
        args.start, inst=inst)
    log.info("running %s (%s) for %d iterations", inst.ident, inst.variant,
             iters)
    trace = run_ap(inst.plane, start, max_iter=iters, tol=args.tol,
                   stride=args.stride, target=inst.target)
    _emit(trace_csv(trace), args.out)
    print(f"# {inst.ident} ({inst.variant}): iterations={len(trace) - 1} "
          f"stop={trace.stop_reason}")
    print("# " + _summarize(trace, inst.fit_model, inst.fit_power))
    return 0


def cmd_run(args):
    with open(args.config) as fh:
        config = json.load(fh)
    plane_field = config["plane"]
    if isinstance(plane_field, str):
        inst = get_example(plane_field, config.get("variant"))
        plane, spec = inst.plane, inst.spec
        target = inst.target
        degree = singularity_degree(spec) if spec else None
    else:
        spec = PlaneSpec.from_json(plane_field)
        plane, _ = build_plane(spec)
        target = plane.anchor
        degree = singularity_degree(spec)
        inst = None
    start_field = config.get("start", 0.0)
    if isinstance(start_field, (int, float)):
        start = _parse_start(str(float(start_field)), inst=inst, spec=spec,
                             plane=plane)
    elif isinstance(start_field, list):
        start = np.array([float(v) for v in start_field])
    else:
        start = _parse_start(start_field, inst=inst, spec=spec, plane=plane)

    max_iter = int(config.get("max_iter", 1000))
    tol = float(config.get("tol", 0.0))
    stride = config.get("stride")
    effective_iter = max_iter if max_iter >= 1 else 1
    effective_tol = tol if max_iter >= 1 else float("inf")
    trace = run_ap(plane, start, max_iter=effective_iter, tol=effective_tol,
                   stride=stride, target=target)
    out = args.out if args.out else config.get("out")
    _emit(trace_csv(trace), out)
    if degree is not None:
        print(f"# singularity degree: {degree}")
    if degree == 2:
        print("# " + _summarize(trace, "inverse_power", 6))
    else:
        print("# " + _summarize(trace, "geometric", None))
    return 0


def cmd_verify(args):
    results = run_suite(args.suite, seed=args.seed)
    all_ok = True
    for res in results:
        tag = "pass" if res.passed else "FAIL"
        print(f"[{tag}] {args.suite}: {res.label} -- {res.detail}")
        all_ok &= res.passed
    print(f"# suite {args.suite}: {'all checks passed' if all_ok else 'FAILURES'}")
    return 0 if all_ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="apcone",
        description="Alternating projections between the PSD cone and "
                    "affine subspaces: experiments and verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ex = sub.add_parser("example", help="run a built-in instance")
    p_ex.add_argument("ident", metavar="id", choices=BUILTIN_IDS)
    p_ex.add_argument("--variant", default=None,
                      help="instance branch (e.g. pos/neg)")
    p_ex.add_argument("--start", default=None,
                      help="t0, comma triple, or slowest-curve:t0")
    p_ex.add_argument("--iters", type=int, default=None)
    p_ex.add_argument("--tol", type=float, default=0.0)
    p_ex.add_argument("--stride", type=int, default=None)
    p_ex.add_argument("--out", default=None, help="trace CSV path")
    p_ex.add_argument("--seed", type=int, default=0,
                      help="accepted for interface symmetry; runs are "
                           "deterministic")
    p_ex.set_defaults(func=cmd_example)

    p_run = sub.add_parser("run", help="run a JSON-configured experiment")
    p_run.add_argument("config", help="JSON config path")
    p_run.add_argument("--out", default=None, help="override output path")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.set_defaults(func=cmd_run)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("suite", choices=SUITES)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
