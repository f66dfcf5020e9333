"""Seeded, reproducible Monte-Carlo experiment harness.

An experiment descriptor names one of the built-in experiments and its
parameters; ``run_trials`` executes a batch of trials, each owning the
counter-based stream ``(seed, stream_id = trial index)``, so results are
bit-for-bit reproducible regardless of the worker count or scheduling.
Records serialize to CSV and JSON lines with all floats printed to 12
significant digits; wall-clock time lives in its own column so the rest of
a file is comparable across runs.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, TooLargeError
from .channels import (
    BELL_DIM_GUARD,
    build_channel,
    conjugate_bell_output,
    projector_product_norm,
)
from .freeprob import confining_spectrum
from .linalg import RngStream, hermitian_eigenvalues
from .majorization import polytope_excess, polytope_violation

__all__ = [
    "Experiment",
    "TrialRecord",
    "run_trials",
    "SummaryStats",
    "summarize",
    "CSV_COLUMNS",
    "write_csv",
    "read_csv",
    "write_jsonl",
    "read_jsonl",
]

EXPERIMENT_OBSERVABLES = {
    "bell": ("bell_spectrum",),
    "confinement": ("max_polytope_violation", "max_partial_sum_excess"),
    "projnorm": ("proj_product_norm",),
}

CSV_COLUMNS = (
    "experiment",
    "n",
    "k",
    "t",
    "p",
    "alpha",
    "beta",
    "seed",
    "stream_id",
    "observable",
    "value",
    "wall_ms",
)


@dataclass(frozen=True)
class Experiment:
    """Descriptor of one experiment: name, parameter map, observables."""

    name: str
    params: dict
    observables: tuple = ()

    def __post_init__(self):
        if self.name not in EXPERIMENT_OBSERVABLES:
            raise InvalidParameterError(f"unknown experiment {self.name!r}")
        available = EXPERIMENT_OBSERVABLES[self.name]
        observables = tuple(self.observables) or available
        if not observables:
            raise InvalidParameterError("at least one observable is required")
        unknown = set(observables) - set(available)
        if unknown:
            raise InvalidParameterError(f"unknown observables {sorted(unknown)}")
        object.__setattr__(self, "observables", observables)
        self._validate_params()

    def _validate_params(self):
        p = self.params
        if self.name in ("bell", "confinement"):
            missing = {"n", "k", "t"} - set(p)
            if missing:
                raise InvalidParameterError(f"missing parameters {sorted(missing)}")
            if self.name == "bell" and p["n"] * p["k"] > BELL_DIM_GUARD:
                raise TooLargeError(
                    f"bell experiment requires n*k <= {BELL_DIM_GUARD}"
                )
            if self.name == "confinement" and p.get("inputs", 1000) < 1:
                raise InvalidParameterError("confinement needs at least one input")
        elif self.name == "projnorm":
            missing = {"N", "alpha", "beta"} - set(p)
            if missing:
                raise InvalidParameterError(f"missing parameters {sorted(missing)}")


@dataclass(frozen=True)
class TrialRecord:
    """One observable from one trial, plus everything needed to rerun it."""

    experiment: str
    seed: int
    stream_id: int
    observable: str
    value: float | tuple
    wall_ms: float
    n: int | None = None
    k: int | None = None
    t: float | None = None
    p: int | None = None
    alpha: float | None = None
    beta: float | None = None


def _bell_trial(params, seed, stream_id):
    channel = build_channel(params["n"], params["k"], params["t"], seed, stream_id)
    spectrum = hermitian_eigenvalues(conjugate_bell_output(channel))
    return (
        {"n": channel.n, "k": channel.k, "t": channel.t, "p": channel.p_n},
        {"bell_spectrum": tuple(float(v) for v in spectrum)},
    )


def _confinement_trial(params, seed, stream_id):
    n, k, t = params["n"], params["k"], params["t"]
    n_inputs = int(params.get("inputs", 1000))
    channel = build_channel(n, k, t, seed, stream_id)
    gen = RngStream(seed, stream_id).generator(jump=1)
    inputs = gen.standard_normal((channel.p_n, n_inputs)) + 1j * gen.standard_normal(
        (channel.p_n, n_inputs)
    )
    inputs /= np.linalg.norm(inputs, axis=0)
    rotated = (channel.image_basis @ inputs).T.reshape(n_inputs, n, k)
    grams = np.einsum("iab,iac->ibc", rotated, rotated.conj())
    spectra = np.linalg.eigvalsh(grams)[:, ::-1]
    target = confining_spectrum(k, t)
    worst_violation = max(polytope_violation(s, target) for s in spectra)
    worst_excess = max(polytope_excess(s, target) for s in spectra)
    return (
        {"n": n, "k": k, "t": t, "p": channel.p_n},
        {
            "max_polytope_violation": float(worst_violation),
            "max_partial_sum_excess": float(worst_excess),
        },
    )


def _projnorm_trial(params, seed, stream_id):
    total_dim = int(params["N"])
    alpha, beta = float(params["alpha"]), float(params["beta"])
    value = projector_product_norm(
        total_dim, alpha, beta, RngStream(seed, stream_id).generator()
    )
    return (
        {"n": total_dim, "alpha": alpha, "beta": beta},
        {"proj_product_norm": value},
    )


_TRIAL_FUNCTIONS = {
    "bell": _bell_trial,
    "confinement": _confinement_trial,
    "projnorm": _projnorm_trial,
}


def _run_one(experiment: Experiment, seed: int, stream_id: int) -> list:
    start = time.perf_counter()
    base = dict(experiment=experiment.name, seed=seed, stream_id=stream_id)
    try:
        fields, values = _TRIAL_FUNCTIONS[experiment.name](
            experiment.params, seed, stream_id
        )
    except Exception as exc:  # partial results contract: keep going
        wall = 1000.0 * (time.perf_counter() - start)
        return [
            TrialRecord(
                observable=f"error[{type(exc).__name__}]",
                value=float("nan"),
                wall_ms=wall,
                **base,
            )
        ]
    wall = 1000.0 * (time.perf_counter() - start)
    return [
        TrialRecord(observable=name, value=values[name], wall_ms=wall, **base, **fields)
        for name in experiment.observables
    ]


def run_trials(experiment: Experiment, trials: int, seed: int, workers: int = 1) -> list:
    """Run ``trials`` independent trials, deterministically in ``seed``.

    Trial ``i`` depends only on ``(seed, i)``; the merged record list is
    sorted by ``(stream_id, observable)``, so worker count does not affect
    the output.
    """
    if trials < 1:
        raise InvalidParameterError("need at least one trial")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = pool.map(
                _run_one, [experiment] * trials, [seed] * trials, range(trials)
            )
            records = [rec for chunk in chunks for rec in chunk]
    else:
        records = [rec for i in range(trials) for rec in _run_one(experiment, seed, i)]
    return sorted(records, key=lambda r: (r.stream_id, r.observable))


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    stderr: float


def summarize(records, observable: str, component: int | None = None) -> SummaryStats:
    """Streaming (single-pass Welford) mean and standard error of an observable.

    ``component`` selects one entry of tuple-valued observables.
    """
    count, mean, m2 = 0, 0.0, 0.0
    for rec in records:
        if rec.observable != observable:
            continue
        value = rec.value
        if component is not None:
            value = value[component]
        count += 1
        delta = value - mean
        mean += delta / count
        m2 += delta * (value - mean)
    if count == 0:
        raise InvalidParameterError(f"no records for observable {observable!r}")
    stderr = float(np.sqrt(m2 / (count - 1) / count)) if count > 1 else float("nan")
    return SummaryStats(count=count, mean=float(mean), stderr=stderr)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def _fmt_value(value) -> str:
    if isinstance(value, tuple):
        return ";".join(f"{float(v):.12g}" for v in value)
    return _fmt(value)


def _parse_value(text: str):
    if ";" in text:
        return tuple(float(v) for v in text.split(";"))
    return float(text)


def _parse_opt(text: str, cast):
    return cast(text) if text else None


def write_csv(records, target) -> None:
    """Write records as CSV (columns fixed by ``CSV_COLUMNS``)."""
    own = isinstance(target, (str, bytes))
    handle = open(target, "w", newline="") if own else target
    try:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.experiment,
                    _fmt(r.n),
                    _fmt(r.k),
                    _fmt(r.t),
                    _fmt(r.p),
                    _fmt(r.alpha),
                    _fmt(r.beta),
                    str(r.seed),
                    str(r.stream_id),
                    r.observable,
                    _fmt_value(r.value),
                    f"{r.wall_ms:.3f}",
                ]
            )
    finally:
        if own:
            handle.close()


def read_csv(source) -> list:
    """Parse a record CSV back into TrialRecord objects."""
    own = isinstance(source, (str, bytes))
    handle = open(source, newline="") if own else source
    try:
        reader = csv.reader(handle)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise InvalidParameterError(f"unexpected CSV header {header}")
        out = []
        for row in reader:
            (exp, n, k, t, p, alpha, beta, seed, stream_id, obs, value, wall) = row
            out.append(
                TrialRecord(
                    experiment=exp,
                    n=_parse_opt(n, int),
                    k=_parse_opt(k, int),
                    t=_parse_opt(t, float),
                    p=_parse_opt(p, int),
                    alpha=_parse_opt(alpha, float),
                    beta=_parse_opt(beta, float),
                    seed=int(seed),
                    stream_id=int(stream_id),
                    observable=obs,
                    value=_parse_value(value),
                    wall_ms=float(wall),
                )
            )
        return out
    finally:
        if own:
            handle.close()


def write_jsonl(records, target) -> None:
    """Write records as JSON lines (tuples become arrays)."""
    own = isinstance(target, (str, bytes))
    handle = open(target, "w") if own else target
    try:
        for r in records:
            obj = {
                "experiment": r.experiment,
                "n": r.n,
                "k": r.k,
                "t": r.t,
                "p": r.p,
                "alpha": r.alpha,
                "beta": r.beta,
                "seed": r.seed,
                "stream_id": r.stream_id,
                "observable": r.observable,
                "value": list(r.value) if isinstance(r.value, tuple) else r.value,
                "wall_ms": round(r.wall_ms, 3),
            }
            handle.write(json.dumps(obj) + "\n")
    finally:
        if own:
            handle.close()


def read_jsonl(source) -> list:
    own = isinstance(source, (str, bytes))
    handle = open(source) if own else source
    try:
        out = []
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            value = obj["value"]
            if isinstance(value, list):
                value = tuple(value)
            out.append(
                TrialRecord(
                    experiment=obj["experiment"],
                    n=obj["n"],
                    k=obj["k"],
                    t=obj["t"],
                    p=obj["p"],
                    alpha=obj["alpha"],
                    beta=obj["beta"],
                    seed=obj["seed"],
                    stream_id=obj["stream_id"],
                    observable=obj["observable"],
                    value=value,
                    wall_ms=obj["wall_ms"],
                )
            )
        return out
    finally:
        if own:
            handle.close()
