"""Command-line entry point.

Subcommands:
  run          execute a scenario (path or "default") and print/write the report
  jt           joint-training baseline for the same scenario
  scenario     write the default 16-increment scenario as JSON
  serve        start the HTTP teaching service
  decay-curve  tabulate effective weight vs days for given alpha/u
  bench        compare the numba and numpy kernel backends

Exit codes: 0 success, 2 validation error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import kernels
from .harness import (
    RunReport,
    ScenarioError,
    default_scenario,
    decay_curve,
    emit_report,
    load_scenario,
    run_joint_baseline,
    run_scenario,
)


def _scenario_from_arg(arg: str, seed: int | None, runs: int | None):
    if arg == "default":
        script = default_scenario(seed=seed if seed is not None else 7)
    else:
        script = load_scenario(arg)
        if seed is not None:
            script.seed = seed
    if runs is not None:
        script.runs = runs
    return script


def _emit(report: RunReport, fmt: str, out: str | None) -> None:
    text = emit_report(report, fmt)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _print_timing(report: RunReport) -> None:
    rows = report.aggregate()
    learn = [r["learn_ms_mean"] for r in rows if r["learn_ms_mean"] is not None]
    classify = [r["classify_ms_mean"] for r in rows if r["classify_ms_mean"] is not None]
    if learn:
        sys.stderr.write(f"mean learn call: {np.mean(learn):.3f} ms\n")
    if classify:
        sys.stderr.write(f"mean classify call: {np.mean(classify):.3f} ms\n")


def _cmd_run(args) -> int:
    script = _scenario_from_arg(args.scenario, args.seed, args.runs)
    report = run_scenario(script, fallback=args.fallback)
    _emit(report, args.format, args.out)
    if args.timing:
        _print_timing(report)
    return 0


def _cmd_jt(args) -> int:
    script = _scenario_from_arg(args.scenario, args.seed, args.runs)
    report = run_joint_baseline(script, fallback=args.fallback)
    _emit(report, args.format, args.out)
    if args.timing:
        _print_timing(report)
    return 0


def _cmd_scenario(args) -> int:
    script = default_scenario(seed=args.seed, runs=args.runs, sigma=args.sigma)
    text = json.dumps(script.to_document(), indent=2)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
    return 0


def _cmd_serve(args) -> int:
    from .service import ServiceSettings, serve

    world = None
    if args.world:
        world = json.loads(Path(args.world).read_text(encoding="utf-8"))
    error_probs = {
        key: value
        for key, value in (
            ("detect_fail", args.detect_fail),
            ("manip_fail", args.manip_fail),
            ("nav_fail", args.nav_fail),
        )
        if value is not None
    }
    settings = ServiceSettings(
        seed=args.seed,
        dim=args.dim,
        sigma=args.sigma,
        world=world,
        tau_objects=args.tau_objects,
        tau_contexts=args.tau_contexts,
        ltm_alpha=args.ltm_alpha,
        stm_alpha=args.stm_alpha,
        decay_u=args.decay_u,
        gamma=args.gamma,
        fallback=args.fallback,
        error_probs=error_probs or None,
    )
    serve(settings, host=args.host, port=args.port)
    return 0


def _cmd_decay_curve(args) -> int:
    days = [round(d * args.step, 6) for d in range(1, args.points + 1)]
    rows = decay_curve(args.alpha, args.u, days)
    if args.format == "csv":
        sys.stdout.write("days,effective_weight\r\n")
        for d, w in rows:
            sys.stdout.write(f"{d},{w:.6f}\r\n")
    else:
        sys.stdout.write(f"{'days':>10}  {'weight':>10}\n")
        for d, w in rows:
            sys.stdout.write(f"{d:>10.2f}  {w:>10.6f}\n")
    return 0


def _cmd_bench(args) -> int:
    rng = np.random.default_rng(0)
    centroids = rng.standard_normal((args.clusters, args.dim))
    x = rng.standard_normal(args.dim)
    mask = rng.random(args.dim) < 0.5
    events = np.sort(rng.random((args.clusters, args.events)) * 30.0, axis=1)
    counts = np.full(args.clusters, args.events, dtype=np.int64)
    dists = np.abs(centroids - x).sum(axis=1)
    weights = rng.random(args.clusters) + 0.5

    workloads = {
        "l1_distances": lambda b: b["l1_distances"](centroids, x),
        "masked_l1_distances": lambda b: b["masked_l1_distances"](centroids, x, mask),
        "model_times": lambda b: b["model_times"](events, counts, 31.0, 0.6, 1 / 24),
        "retention": lambda b: b["retention"](dists + 1.0, 0.2),
        "activations": lambda b: b["activations"](dists, weights),
    }
    kernels.warmup()
    sys.stdout.write(
        f"backend selected at import: {'numba' if kernels.USING_NUMBA else 'numpy'} "
        f"(set {kernels.ENV_PURE_NUMPY}=1 to force numpy)\n"
    )
    sys.stdout.write(f"{'kernel':>20}  {'backend':>8}  {'usec/call':>10}\n")
    timings: dict[str, dict[str, float]] = {}
    for name, backend in kernels.backends().items():
        for kernel_name, fn in workloads.items():
            t0 = time.perf_counter()
            for _ in range(args.repeat):
                fn(backend)
            per_call = (time.perf_counter() - t0) / args.repeat * 1e6
            timings.setdefault(kernel_name, {})[name] = per_call
            sys.stdout.write(f"{kernel_name:>20}  {name:>8}  {per_call:>10.2f}\n")
    if "numba" in kernels.backends():
        for kernel_name, per in timings.items():
            speedup = per["numpy"] / per["numba"] if per["numba"] > 0 else float("inf")
            sys.stdout.write(f"{kernel_name:>20}  numba speedup x{speedup:.2f}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homelearn")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_report_args(p):
        p.add_argument("scenario", help="scenario JSON path, or 'default'")
        p.add_argument("--runs", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--format", choices=["table", "csv"], default="table")
        p.add_argument("--out", default=None)
        p.add_argument("--fallback", action="store_true", help="try next-best locations on a miss")
        p.add_argument("--timing", action="store_true", help="print learn/classify wall times to stderr")

    p_run = sub.add_parser("run", help="run a scenario")
    add_report_args(p_run)
    p_run.set_defaults(fn=_cmd_run)

    p_jt = sub.add_parser("jt", help="joint-training baseline")
    add_report_args(p_jt)
    p_jt.set_defaults(fn=_cmd_jt)

    p_sc = sub.add_parser("scenario", help="emit the default scenario JSON")
    p_sc.add_argument("--out", default=None)
    p_sc.add_argument("--seed", type=int, default=7)
    p_sc.add_argument("--runs", type=int, default=5)
    p_sc.add_argument("--sigma", type=float, default=0.05)
    p_sc.set_defaults(fn=_cmd_scenario)

    p_serve = sub.add_parser("serve", help="start the teaching service")
    env = os.environ
    p_serve.add_argument("--host", default=env.get("HOMELEARN_HOST", "127.0.0.1"))
    p_serve.add_argument("--port", type=int, default=int(env.get("HOMELEARN_PORT", 8520)))
    p_serve.add_argument("--seed", type=int, default=int(env.get("HOMELEARN_SEED", 7)))
    p_serve.add_argument("--dim", type=int, default=64)
    p_serve.add_argument("--sigma", type=float, default=0.05)
    p_serve.add_argument("--world", default=None, help="world definition JSON path")
    p_serve.add_argument("--tau-objects", type=float, default=0.0003, dest="tau_objects")
    p_serve.add_argument("--tau-contexts", type=float, default=0.13, dest="tau_contexts")
    p_serve.add_argument("--ltm-alpha", type=float, default=0.2, dest="ltm_alpha")
    p_serve.add_argument("--stm-alpha", type=float, default=15.0, dest="stm_alpha")
    p_serve.add_argument("--decay-u", type=float, default=0.6, dest="decay_u")
    p_serve.add_argument("--gamma", type=float, default=3.0)
    p_serve.add_argument("--detect-fail", type=float, default=None, dest="detect_fail")
    p_serve.add_argument("--manip-fail", type=float, default=None, dest="manip_fail")
    p_serve.add_argument("--nav-fail", type=float, default=None, dest="nav_fail")
    p_serve.add_argument("--fallback", action="store_true")
    p_serve.set_defaults(fn=_cmd_serve)

    p_dc = sub.add_parser("decay-curve", help="effective weight vs days")
    p_dc.add_argument("--alpha", type=float, required=True)
    p_dc.add_argument("--u", type=float, default=0.6)
    p_dc.add_argument("--points", type=int, default=60)
    p_dc.add_argument("--step", type=float, default=1.0)
    p_dc.add_argument("--format", choices=["table", "csv"], default="table")
    p_dc.set_defaults(fn=_cmd_decay_curve)

    p_bench = sub.add_parser("bench", help="compare kernel backends")
    p_bench.add_argument("--clusters", type=int, default=200)
    p_bench.add_argument("--dim", type=int, default=64)
    p_bench.add_argument("--events", type=int, default=50)
    p_bench.add_argument("--repeat", type=int, default=2000)
    p_bench.set_defaults(fn=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        sys.stderr.write(f"scenario error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        sys.stderr.write(f"runtime failure: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
