"""Command-line front end.

Subcommands: ``predict`` (closed-form spectra, entropies, margins),
``simulate`` (seeded Monte-Carlo experiments), ``k0-table`` (smallest
violating dimension over parameter grids), ``fig2-data`` (confining
polytopes on the 3-outcome simplex), ``asymptotics`` (small-coupling
expansion diagnostics), ``optimize`` (input-state optimizers) and
``selftest`` (the verification suite).

Every command is deterministic given its flags and seed; wall-clock timing
is confined to its own CSV column.  Floats are printed with 12 significant
digits, natural-log entropies throughout.  Exit codes: 0 success,
2 validation failure, 3 resource guard, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .channels import BELL_DIM_GUARD
from .entropy import (
    confining_entropy,
    confining_entropy_asymptote,
    conjugate_product_entropy,
    conjugate_product_entropy_asymptote,
    min_violation_k,
    renyi_entropy,
    schatten_norm_from_entropy,
)
from .errors import (
    DegenerateParameterError,
    InvalidDimensionError,
    InvalidMatrixError,
    InvalidParameterError,
    NotNormalizedError,
    NumericalFailureError,
    TooLargeError,
)
from .freeprob import confining_spectrum, conjugate_product_spectrum
from .majorization import polytope_violation, simplex_figure_data
from .optimize import OptimizerConfig, estimate_hmin, max_partial_sum
from .trials import Experiment, TrialRecord, run_trials, summarize, write_csv, write_jsonl
from . import verify

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_NUMERICAL = 4

WORKERS_ENV = "FREECHANNELS_WORKERS"

_VALIDATION_ERRORS = (
    InvalidParameterError,
    InvalidDimensionError,
    InvalidMatrixError,
    NotNormalizedError,
    DegenerateParameterError,
)


def _fmt(value: float) -> float:
    """Round a float through its 12-significant-digit representation."""
    return float(f"{float(value):.12g}")


def _parse_grid(text: str) -> list:
    """Parse ``a,b,c`` lists or ``start:stop:step`` ranges of floats."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidParameterError(f"bad grid {text!r}, expected start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise InvalidParameterError("grid step must be positive")
        count = int(round((stop - start) / step))
        values = [start + i * step for i in range(count + 1)]
        return [v for v in values if v <= stop + 1e-12]
    return [float(p) for p in text.split(",") if p.strip()]


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _open_output(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit_rows(path, header, rows):
    handle, own = _open_output(path)
    try:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(str(c) for c in row) + "\n")
    finally:
        if own:
            handle.close()


def _apply_config(args: argparse.Namespace, parser_dests: set) -> None:
    """Fill unset flags from the optional JSON config (flags win)."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise InvalidParameterError("config file must hold a JSON object")
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest not in parser_dests:
            raise InvalidParameterError(f"unknown config key {key!r}")
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise InvalidParameterError(f"missing required parameters: {flags}")


# ----------------------------------------------------------------- predict


def cmd_predict(args) -> int:
    _require(args, "k", "t")
    k, t = int(args.k), float(args.t)
    orders = _parse_grid(args.p) if args.p else [2.0]
    beta = confining_spectrum(k, t)
    report = {
        "k": k,
        "t": _fmt(t),
        "log_base": "e",
        "beta": [_fmt(v) for v in beta],
        "orders": [],
    }
    if k <= 100:
        report["gamma"] = [_fmt(v) for v in conjugate_product_spectrum(k, t)]
    else:
        rest = (1.0 - t) / k**2
        report["gamma"] = {
            "top": _fmt(t + rest),
            "rest": _fmt(rest),
            "multiplicity": k * k - 1,
        }
    for p in orders:
        entry = {
            "p": _fmt(p),
            "entropy_beta": _fmt(renyi_entropy(beta, p)),
            "entropy_gamma": _fmt(conjugate_product_entropy(k, t, p)),
        }
        if p > 1:
            entry["violation_margin"] = _fmt(
                2.0 * entry["entropy_beta"] - entry["entropy_gamma"]
            )
            entry["schatten_beta"] = _fmt(
                schatten_norm_from_entropy(entry["entropy_beta"], p)
            )
            entry["schatten_gamma"] = _fmt(
                schatten_norm_from_entropy(entry["entropy_gamma"], p)
            )
            entry["schatten_limit"] = _fmt(t)
        report["orders"].append(entry)

    if args.format == "csv":
        rows = [("k", "", report["k"]), ("t", "", report["t"]), ("log_base", "", "e")]
        rows += [("beta", j, v) for j, v in enumerate(report["beta"])]
        gamma = report["gamma"]
        if isinstance(gamma, list):
            rows += [("gamma", j, v) for j, v in enumerate(gamma)]
        else:
            rows += [("gamma_" + key, "", val) for key, val in gamma.items()]
        for entry in report["orders"]:
            for key, val in entry.items():
                if key != "p":
                    rows.append((key, entry["p"], val))
        _emit_rows(args.output, ("quantity", "index", "value"), rows)
    else:
        handle, own = _open_output(args.output)
        try:
            json.dump(report, handle, indent=2)
            handle.write("\n")
        finally:
            if own:
                handle.close()
    return EXIT_OK


# ---------------------------------------------------------------- simulate


def _summary_record(base: TrialRecord, observable: str, value: float) -> TrialRecord:
    return TrialRecord(
        experiment=base.experiment,
        seed=base.seed,
        stream_id=-1,
        observable=observable,
        value=value,
        wall_ms=0.0,
        n=base.n,
        k=base.k,
        t=base.t,
        p=base.p,
        alpha=base.alpha,
        beta=base.beta,
    )


def cmd_simulate(args) -> int:
    mode = args.mode
    trials = int(args.trials) if args.trials is not None else 10
    seed = int(args.seed) if args.seed is not None else 0
    workers = int(args.workers) if args.workers is not None else _default_workers()

    experiments = []
    if mode == "projnorm":
        _require(args, "N", "alpha", "beta")
        experiments.append(
            Experiment(
                "projnorm",
                {"N": int(args.N), "alpha": float(args.alpha), "beta": float(args.beta)},
            )
        )
    else:
        _require(args, "n", "k", "t")
        params = {"n": int(args.n), "k": int(args.k), "t": float(args.t)}
        if mode in ("all", "confinement"):
            conf = dict(params, inputs=int(args.inputs) if args.inputs else 1000)
            experiments.append(Experiment("confinement", conf))
        if mode in ("all", "bell"):
            experiments.append(Experiment("bell", params))

    records = []
    for experiment in experiments:
        batch = run_trials(experiment, trials, seed, workers)
        records.extend(batch)
        good = [r for r in batch if not r.observable.startswith("error")]
        if not good:
            continue
        base = good[0]
        if experiment.name == "bell":
            stats = summarize(good, "bell_spectrum", component=0)
            records.append(_summary_record(base, "bell_top_eig_mean", stats.mean))
        elif experiment.name == "confinement":
            worst = max(r.value for r in good if r.observable == "max_polytope_violation")
            records.append(
                _summary_record(base, "max_polytope_violation_max", worst)
            )
        elif experiment.name == "projnorm":
            stats = summarize(good, "proj_product_norm")
            records.append(_summary_record(base, "proj_product_norm_mean", stats.mean))
            if stats.count > 1:
                records.append(
                    _summary_record(base, "proj_product_norm_stderr", stats.stderr)
                )

    handle, own = _open_output(args.output)
    try:
        if args.format == "json":
            write_jsonl(records, handle)
        else:
            write_csv(records, handle)
    finally:
        if own:
            handle.close()
    return EXIT_OK


# ---------------------------------------------------------------- k0-table


def cmd_k0_table(args) -> int:
    _require(args, "t_grid", "p_grid")
    t_grid = _parse_grid(args.t_grid)
    p_grid = _parse_grid(args.p_grid)
    if any(p <= 1 for p in p_grid):
        raise InvalidParameterError("all entropy orders in the grid must exceed 1")
    k_max = int(args.k_max) if args.k_max is not None else 10**4
    rows = []
    for t in t_grid:
        for p in p_grid:
            k0 = min_violation_k(t, p, k_max)
            rows.append((_fmt(t), _fmt(p), "NotFound" if k0 is None else k0))
    _emit_rows(args.output, ("t", "p", "k0"), rows)
    return EXIT_OK


# ---------------------------------------------------------------- fig2-data


def cmd_fig2_data(args) -> int:
    kprimes = (
        [int(v) for v in _parse_grid(args.kprime)]
        if args.kprime
        else [2, 3, 4, 5, 10, 20, 50, 100]
    )
    if any(kp < 2 for kp in kprimes):
        raise InvalidParameterError("k-prime values must be >= 2")
    resolution = int(args.resolution) if args.resolution is not None else 1
    t_values = sorted({1.0 / kp for kp in kprimes}, reverse=True)
    polylines = simplex_figure_data(t_values, resolution=resolution)
    rows = []
    previous_beta = None
    for line in polylines:
        nested = ""
        if previous_beta is not None:
            nested = int(
                all(
                    polytope_violation(corner, previous_beta) <= 1e-12
                    for corner in line.corners
                )
            )
        beta_here = confining_spectrum(3, line.t)
        for index, (x, y) in enumerate(line.vertices):
            rows.append((_fmt(line.t), index, _fmt(x), _fmt(y), nested))
        previous_beta = beta_here
    _emit_rows(args.output, ("t", "vertex_index", "x", "y", "nested_in_prev"), rows)
    return EXIT_OK


# -------------------------------------------------------------- asymptotics


def cmd_asymptotics(args) -> int:
    alphas = _parse_grid(args.alpha_grid) if args.alpha_grid else [0.5, 1.0, 2.0, 3.0]
    ks = (
        [int(v) for v in _parse_grid(args.k_grid)]
        if args.k_grid
        else [100, 1000, 10000]
    )
    rows = []
    for alpha in alphas:
        for k in ks:
            t = k ** (-float(alpha))
            if not (0.0 < t < 1.0):
                continue
            h_single = confining_entropy(k, t, 1.0)
            h_pair = conjugate_product_entropy(k, t, 1.0)
            single_pred = confining_entropy_asymptote(k, alpha)
            pair_pred = conjugate_product_entropy_asymptote(k, alpha)
            single_ratio = (math.log(k) - h_single) / (math.log(k) - single_pred)
            pair_ratio = (2 * math.log(k) - h_pair) / (2 * math.log(k) - pair_pred)
            rows.append(
                (
                    _fmt(alpha),
                    k,
                    _fmt(t),
                    _fmt(h_single),
                    _fmt(h_pair),
                    _fmt(single_pred),
                    _fmt(pair_pred),
                    _fmt(single_ratio),
                    _fmt(pair_ratio),
                )
            )
    header = (
        "alpha",
        "k",
        "t",
        "H_single_nats",
        "H_pair_nats",
        "H_single_asymptote_nats",
        "H_pair_asymptote_nats",
        "single_ratio",
        "pair_ratio",
    )
    _emit_rows(args.output, header, rows)
    return EXIT_OK


# ----------------------------------------------------------------- optimize


def cmd_optimize(args) -> int:
    from .channels import build_channel

    _require(args, "n", "k", "t")
    seed = int(args.seed) if args.seed is not None else 0
    restarts = int(args.restarts) if args.restarts is not None else 20
    max_iters = int(args.max_iters) if args.max_iters is not None else 400
    cfg = OptimizerConfig(restarts=restarts, max_iters=max_iters, tol=1e-6)
    channel = build_channel(int(args.n), int(args.k), float(args.t), seed)
    records = []
    objective = args.objective
    if objective in ("max-s-j", "all"):
        _require(args, "j")
        result = max_partial_sum(channel, int(args.j), cfg)
        records.append(
            TrialRecord(
                experiment="optimize",
                seed=seed,
                stream_id=0,
                observable=f"max_s_{int(args.j)}",
                value=result.value,
                wall_ms=0.0,
                n=channel.n,
                k=channel.k,
                t=channel.t,
                p=channel.p_n,
            )
        )
    if objective in ("hmin", "all"):
        _require(args, "p")
        result = estimate_hmin(channel, float(args.p), cfg)
        records.append(
            TrialRecord(
                experiment="optimize",
                seed=seed,
                stream_id=0,
                observable=f"hmin_{float(args.p):g}",
                value=result.value,
                wall_ms=0.0,
                n=channel.n,
                k=channel.k,
                t=channel.t,
                p=channel.p_n,
            )
        )
    handle, own = _open_output(args.output)
    try:
        if args.format == "json":
            write_jsonl(records, handle)
        else:
            write_csv(records, handle)
    finally:
        if own:
            handle.close()
    return EXIT_OK


# ----------------------------------------------------------------- selftest


def cmd_selftest(args) -> int:
    workers = int(args.workers) if args.workers is not None else _default_workers()
    results = verify.run_all(names=args.checks or None, workers=workers)
    print(verify.format_results(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freechannels",
        description="Random-channel spectra: closed-form predictions and Monte-Carlo checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file of defaults; flags override")
        p.add_argument("--output", help="output path (default: stdout)")

    p = sub.add_parser("predict", help="closed-form spectra, entropies, margins")
    add_common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=float)
    p.add_argument("--p", help="entropy orders, list or start:stop:step")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate", help="seeded Monte-Carlo experiments")
    add_common(p)
    p.add_argument("--mode", choices=("all", "bell", "confinement", "projnorm"), default="all")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=float)
    p.add_argument("--inputs", type=int, help="random inputs per confinement trial")
    p.add_argument("--N", type=int, help="matrix dimension for projnorm")
    p.add_argument("--alpha", type=float, help="first relative rank for projnorm")
    p.add_argument("--beta", type=float, help="second relative rank for projnorm")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("k0-table", help="smallest violating dimension per (t, p)")
    add_common(p)
    p.add_argument("--t-grid", dest="t_grid", help="couplings, list or range")
    p.add_argument("--p-grid", dest="p_grid", help="entropy orders > 1, list or range")
    p.add_argument("--k-max", dest="k_max", type=int)
    p.set_defaults(func=cmd_k0_table)

    p = sub.add_parser("fig2-data", help="confining polytopes on the 3-simplex")
    add_common(p)
    p.add_argument("--kprime", help="inverse couplings 1/t, list")
    p.add_argument("--resolution", type=int, help="points per polygon edge")
    p.set_defaults(func=cmd_fig2_data)

    p = sub.add_parser("asymptotics", help="small-coupling expansion diagnostics")
    add_common(p)
    p.add_argument("--alpha-grid", dest="alpha_grid")
    p.add_argument("--k-grid", dest="k_grid")
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("optimize", help="input-state optimizers")
    add_common(p)
    p.add_argument("--objective", choices=("max-s-j", "hmin", "all"), default="max-s-j")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=float)
    p.add_argument("--j", type=int, help="partial-sum index")
    p.add_argument("--p", type=float, help="entropy order for hmin")
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("selftest", help="run the verification suite")
    p.add_argument("checks", nargs="*", help="subset of check names (default: all)")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    allowed = set(vars(args)) - {"func", "command", "config"}
    try:
        if hasattr(args, "config"):
            _apply_config(args, allowed)
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NumericalFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
