"""Reproducible experiment orchestration.

One experiment kind per headline result:

- ``lz_collapse``   driven two-level sweeps vs the rate-collapse law
- ``grover_rabi``   m-photon Rabi frequencies on the projector problem
- ``grover_jump``   jump-and-wait success scaling, static vs driven
- ``ferro_anneal``  AAFM tunneling speedup under magnitude modulation
- ``predict``       pure analytic rate/gap tables (no simulation)
- ``phase_lock``    harmonic weight of phase-locked gap envelopes

A run expands its config into a flat, deterministic task list whose per-task
seeds derive from the master seed alone, executes the tasks on a process
pool, and reduces the results in task order — so aggregate statistics are
bit-identical for any worker count.
"""

from __future__ import annotations

import dataclasses
import json
import math
import multiprocessing
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import bitstring, fits, grover, lz

SCHEMA_TAG = "rfqa-results-v1"

EXPERIMENT_KINDS = ("lz_collapse", "grover_rabi", "grover_jump",
                    "ferro_anneal", "predict", "phase_lock")


class ConfigError(ValueError):
    """Invalid experiment configuration (reported before any trial runs)."""


@dataclass
class ExperimentConfig:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    workers: int = 0  # 0 -> physical core count / RFQA_WORKERS
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; "
                              f"choose from {EXPERIMENT_KINDS}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be 'csv' or 'json'")
        if self.workers < 0:
            raise ConfigError("workers must be non-negative")

    def resolved_workers(self) -> int:
        if self.workers > 0:
            return self.workers
        env = os.environ.get("RFQA_WORKERS")
        if env:
            return max(1, int(env))
        return os.cpu_count() or 1

    @classmethod
    def from_file(cls, path, overrides=None):
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a mapping")
        if overrides:
            data.update({k: v for k, v in overrides.items() if v is not None})
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["resolved_workers"] = self.resolved_workers()
        return d


@dataclass
class TrialRecord:
    """One independent unit of randomized work, replayable from its seed."""

    index: int
    seed: int
    params: dict
    outcome: dict
    diagnostics: dict


@dataclass
class ResultBundle:
    config: ExperimentConfig
    columns: list
    rows: list
    records: list
    summary: dict
    n_failed: int = 0


# ---------------------------------------------------------------------------
# task bodies (module-level, picklable)
# ---------------------------------------------------------------------------

def _child_seeds(seed: int, n: int):
    """Deterministic per-task seeds independent of worker count."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(n)]


def _task_lz(args):
    idx, seed, k, t_f, w_window, n_traces = args
    rabi = 0.01 / 2.0 ** ((k - 1) / 2.0)
    sweep = lz.LzSweep(w_window=w_window, t_f=t_f)
    t0 = time.perf_counter()
    est = lz.simulate_lz(None, sweep, seed=seed, n_traces=n_traces,
                         n_tones=4 * 2 ** (k - 2), rabi_magnitude=rabi)
    gamma = 2.0 * (4 * 2 ** (k - 2)) * rabi ** 2 / w_window / 2.0
    theory = 0.5 * (1.0 - math.exp(-4.0 * math.pi * gamma * t_f))
    return TrialRecord(
        idx, seed,
        {"k": k, "t_f": t_f, "n_tones": 4 * 2 ** (k - 2), "rabi": rabi},
        {"probability": est.probability[0], "std_error": est.std_error[0],
         "theory": theory},
        {"wall_time": time.perf_counter() - t0, "n_traces": n_traces,
         "n_attempted": n_traces})


def _task_rabi(args):
    idx, seed, n, m, gap, abar = args
    t0 = time.perf_counter()
    res = grover.rabi_experiment(n, m, gap, abar=abar, seed=seed)
    return TrialRecord(
        idx, seed, {"n_qubits": n, "m": m, "gap": gap, "abar": abar},
        {"omega": res.omega, "predicted": res.predicted, "ratio": res.ratio,
         "partitions": res.partitions},
        {"wall_time": time.perf_counter() - t0,
         "n_failed_partitions": len(res.failures),
         "n_attempted": len(res.partitions) + len(res.failures)})


def _task_jump(args):
    idx, seed, n, n_trials, abar, c_mult, s_lo, s_hi = args
    drive = None
    if abar != 0.0:
        drive = grover.DriveSpec(bare_amplitude=abar, frequencies=np.ones(1),
                                 ramp="tanh", ramp_tau=1.0)
    t0 = time.perf_counter()
    res = grover.jump_experiment(n, s_window=(s_lo, s_hi), c_mult=c_mult,
                                 drive=drive, n_trials=n_trials, seed=seed)
    return TrialRecord(
        idx, seed,
        {"n_qubits": n, "driven": drive is not None, "n_trials": n_trials},
        {"probability": res.probability, "std_error": res.std_error,
         "t_f": res.t_f, "n_ok": res.n_trials},
        {"wall_time": time.perf_counter() - t0, "n_failed": res.n_failed,
         "n_attempted": res.n_trials + res.n_failed})


def _task_ferro(args):
    (idx, seed, n, kappa, abar, t_finals, n_tone_sets) = args
    drive = bitstring.RfqamDrive(abar) if abar != 0.0 else None
    t0 = time.perf_counter()
    curve = bitstring.run_rfqam_anneal(n, kappa, drive,
                                       np.asarray(t_finals),
                                       n_tone_sets=n_tone_sets, seed=seed)
    return TrialRecord(
        idx, seed,
        {"n_qubits": n, "kappa": kappa, "abar": abar,
         "n_tone_sets": curve.n_tone_sets},
        {"t_finals": curve.t_finals.tolist(),
         "probability": curve.probability.tolist(),
         "std_error": curve.std_error.tolist(),
         "per_set": curve.per_set.tolist()},
        {"wall_time": time.perf_counter() - t0, "n_failed": curve.n_failed,
         "n_attempted": curve.n_tone_sets * len(curve.t_finals)})


_TASK_BODY = {"lz_collapse": _task_lz, "grover_rabi": _task_rabi,
              "grover_jump": _task_jump, "ferro_anneal": _task_ferro}


# ---------------------------------------------------------------------------
# experiment definitions: task expansion + reduction to tabular rows
# ---------------------------------------------------------------------------

def _expand_lz(cfg):
    p = cfg.params
    ks = list(p.get("k_values", range(2, 7)))
    t_fs = list(p.get("t_finals", np.linspace(0.0, 2000.0, 10)))
    w = float(p.get("w_window", 1.0))
    n_traces = int(p.get("n_traces", 300))
    if n_traces < 2 or w <= 0:
        raise ConfigError("lz_collapse needs n_traces >= 2 and w_window > 0")
    grid = [(k, float(tf)) for k in ks for tf in t_fs]
    seeds = _child_seeds(cfg.seed, len(grid))
    return [(i, seeds[i], k, tf, w, n_traces)
            for i, (k, tf) in enumerate(grid)]


def _reduce_lz(cfg, records):
    cols = ["k", "t_f", "probability", "std_error", "theory"]
    rows = [[r.params["k"], r.params["t_f"], r.outcome["probability"],
             r.outcome["std_error"], r.outcome["theory"]] for r in records]
    rms = {}
    for r in records:
        rms.setdefault(r.params["k"], []).append(
            (r.outcome["probability"] - r.outcome["theory"]) ** 2)
    summary = {"rms_vs_theory": {str(k): math.sqrt(float(np.mean(v)))
                                 for k, v in sorted(rms.items())}}
    return cols, rows, summary


def _expand_rabi(cfg):
    p = cfg.params
    points = p.get("points")
    if points is None:
        ns = list(p.get("n_values", (12, 13, 14)))
        gaps = list(p.get("gaps", (0.125, 0.1, 0.075)))
        if len(gaps) != len(ns):
            raise ConfigError("need one gap per N")
        ms = list(p.get("m_values", (1, 2, 3)))
        points = [(n, m, g) for n, g in zip(ns, gaps) for m in ms]
    abar = float(p.get("abar", 1.0))
    seeds = _child_seeds(cfg.seed, len(points))
    return [(i, seeds[i], int(n), int(m), float(g), abar)
            for i, (n, m, g) in enumerate(points)]


def _reduce_rabi(cfg, records):
    cols = ["n_qubits", "m", "gap", "omega", "predicted", "ratio"]
    rows = [[r.params["n_qubits"], r.params["m"], r.params["gap"],
             r.outcome["omega"], r.outcome["predicted"], r.outcome["ratio"]]
            for r in records]
    devs = [abs(r.outcome["ratio"] - 1.0) for r in records
            if not math.isnan(r.outcome["ratio"])]
    summary = {"max_abs_deviation": max(devs) if devs else None}
    return cols, rows, summary


def _expand_jump(cfg):
    p = cfg.params
    ns = list(p.get("n_values", (11, 12, 13, 14)))
    n_trials = int(p.get("n_trials", 200))
    abar = float(p.get("abar", grover.optimal_bare_amplitude()[0]))
    c_mult = float(p.get("c_mult", 2.16))
    s_lo, s_hi = p.get("s_window", (0.38, 0.58))
    tasks = []
    seeds = _child_seeds(cfg.seed, 2 * len(ns))
    for i, n in enumerate(ns):
        tasks.append((2 * i, seeds[2 * i], int(n), n_trials, 0.0,
                      c_mult, s_lo, s_hi))
        tasks.append((2 * i + 1, seeds[2 * i + 1], int(n), n_trials, abar,
                      c_mult, s_lo, s_hi))
    return tasks


def _reduce_jump(cfg, records):
    cols = ["n_qubits", "driven", "probability", "std_error", "t_f"]
    rows = [[r.params["n_qubits"], int(r.params["driven"]),
             r.outcome["probability"], r.outcome["std_error"],
             r.outcome["t_f"]] for r in records]
    summary = {}
    for driven in (0, 1):
        pts = [(r.params["n_qubits"], r.outcome["probability"],
                r.outcome["std_error"])
               for r in records if int(r.params["driven"]) == driven]
        if len(pts) >= 3 and all(p > 0 for _, p, _ in pts):
            f = fits.fit_exponent([x[0] for x in pts], [x[1] for x in pts],
                                  [x[2] for x in pts])
            summary["driven" if driven else "baseline"] = {
                "exponent": f.exponent, "exponent_se": f.exponent_se}
    return cols, rows, summary


def _expand_ferro(cfg):
    p = cfg.params
    ns = list(p.get("n_values", (4, 5, 6, 7, 8)))
    kappa = float(p.get("kappa", 0.5))
    abar = float(p.get("abar", 0.9))
    t_fs = [float(t) for t in p.get(
        "t_finals", np.linspace(30.0, 600.0, 30))]
    n_sets = int(p.get("n_tone_sets", 100))
    chunk = int(p.get("tone_set_chunk", 20))
    if not 0.0 <= abs(abar) < 1.0:
        raise ConfigError("ferro_anneal needs |abar| < 1")
    tasks = []
    idx = 0
    n_chunks = max(1, math.ceil(n_sets / chunk))
    seeds = _child_seeds(cfg.seed, len(ns) * (1 + n_chunks))
    for n in ns:
        tasks.append((idx, seeds[idx], int(n), kappa, 0.0, t_fs, 1))
        idx += 1
        left = n_sets
        for _ in range(n_chunks):
            take = min(chunk, left)
            tasks.append((idx, seeds[idx], int(n), kappa, abar, t_fs, take))
            idx += 1
            left -= take
    return tasks


def _reduce_ferro(cfg, records):
    cols = ["N", "kappa", "alpha_bare", "Gamma_T", "Gamma_T_err",
            "ratio", "predicted_ratio"]
    rows = []
    summary = {"per_n": {}}
    by_n = {}
    for r in records:
        by_n.setdefault(r.params["n_qubits"], []).append(r)
    for n, recs in sorted(by_n.items()):
        kappa = recs[0].params["kappa"]
        t_fs = np.asarray(recs[0].outcome["t_finals"])
        static = [r for r in recs if r.params["abar"] == 0.0]
        driven = [r for r in recs if r.params["abar"] != 0.0]
        gs = fits.extract_rate(t_fs, static[0].outcome["probability"],
                               p_max_bound=1.0, fix_p_max=True).gamma
        rows.append([n, kappa, 0.0, gs, 0.0, 1.0, 1.0])
        if not driven:
            continue
        abar = driven[0].params["abar"]
        # pool tone-set curves across chunks before the ensemble-mean fit
        pooled = np.concatenate(
            [np.asarray(r.outcome["per_set"]) for r in driven], axis=0)
        p = np.nanmean(pooled, axis=0)
        cnt = np.sum(~np.isnan(pooled), axis=0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            spread = np.nanstd(pooled, axis=0, ddof=1)
        se = np.where(cnt > 1, spread / np.sqrt(np.maximum(cnt, 1)), 0.0)
        fd = fits.extract_rate(t_fs, p, se, p_max_bound=1.0)
        gd, gd_se = fd.gamma, fd.gamma_se
        m0, alpha, _ = bitstring.effective_params(n, kappa, abar)
        _, pred = bitstring.predict_rfqam_rate(1.0, 1.0, m0, alpha, n)
        ratio = gd / gs
        rows.append([n, kappa, abar, gd, gd_se, ratio, pred])
        summary["per_n"][str(n)] = {
            "ratio": ratio, "predicted_ratio": pred,
            "m0": m0, "alpha": alpha,
            "ratio_se": (gd_se / gs if gs > 0 else None)}
    return cols, rows, summary


def _run_predict(cfg):
    p = cfg.params
    cols = ["n_qubits", "delta_min", "rate_sum", "rate_closed"]
    rows = []
    abar = float(p.get("abar", 1.0))
    w = float(p.get("w_window", 1.0))
    for n in p.get("n_values", range(8, 21)):
        n = int(n)
        s_c, _ = grover.find_sc(n)
        delta = grover.analytic_delta_min(n, s_c)
        _, _, alpha_eff, _ = grover.effective_amplitude(abar)
        s_form, c_form, _ = grover.predict_grover_rate(n, alpha_eff, w, s_c)
        rows.append([n, delta, s_form, c_form])
    records = [TrialRecord(0, cfg.seed, dict(p), {"n_rows": len(rows)}, {})]
    return cols, rows, {"abar": abar}, records


def _run_phase_lock(cfg):
    p = cfg.params
    m0 = float(p.get("m0", 0.97))
    alpha = float(p.get("alpha", 0.845))
    cols = ["p_group", "dc_weight", "drive_weight",
            "asymptotic_power_subtrahend", "asymptotic_bare_subtrahend"]
    rows = []
    for pg in p.get("p_values", range(1, 9)):
        pg = int(pg)
        weights, total = bitstring.phase_lock_spectrum(m0, alpha, pg)
        rows.append([pg, float(weights[0]), total,
                     bitstring.phase_lock_asymptotic(m0, alpha, pg, True),
                     bitstring.phase_lock_asymptotic(m0, alpha, pg, False)])
    records = [TrialRecord(0, cfg.seed, dict(p), {"n_rows": len(rows)}, {})]
    return cols, rows, {"m0": m0, "alpha": alpha}, records


_EXPAND = {"lz_collapse": _expand_lz, "grover_rabi": _expand_rabi,
           "grover_jump": _expand_jump, "ferro_anneal": _expand_ferro}
_REDUCE = {"lz_collapse": _reduce_lz, "grover_rabi": _reduce_rabi,
           "grover_jump": _reduce_jump, "ferro_anneal": _reduce_ferro}


# ---------------------------------------------------------------------------
# runner and emitters
# ---------------------------------------------------------------------------

def run(config: ExperimentConfig) -> ResultBundle:
    """Execute an experiment; deterministic for fixed config and seed
    regardless of worker count."""
    if config.kind in ("predict", "phase_lock"):
        fn = _run_predict if config.kind == "predict" else _run_phase_lock
        cols, rows, summary, records = fn(config)
        bundle = ResultBundle(config, cols, rows, records, summary)
    else:
        tasks = _EXPAND[config.kind](config)
        body = _TASK_BODY[config.kind]
        workers = config.resolved_workers()
        if workers > 1 and len(tasks) > 1:
            # spawn: forking would duplicate numba's OpenMP runtime state
            ctx = multiprocessing.get_context("spawn")
            with ProcessPoolExecutor(max_workers=workers,
                                     mp_context=ctx) as pool:
                records = list(pool.map(body, tasks))
        else:
            records = [body(t) for t in tasks]
        records.sort(key=lambda r: r.index)
        cols, rows, summary = _REDUCE[config.kind](config, records)
        bundle = ResultBundle(config, cols, rows, records, summary)
        bundle.n_failed = sum(r.diagnostics.get("n_failed", 0)
                              + r.diagnostics.get("n_failed_partitions", 0)
                              for r in records)
        bundle.summary.setdefault("n_failed_trials", bundle.n_failed)
    if config.out is not None:
        emit(bundle, config.out, config.format)
    return bundle


def _fmt(x):
    """Shortest round-trip decimal for floats; plain text otherwise."""
    if isinstance(x, float):
        return repr(float(x))
    return str(x)


def emit(bundle: ResultBundle, out_dir, fmt: str = "csv"):
    """Write the result table plus a JSON summary (config echo, fits,
    schema tag). Returns the list of written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    base = bundle.config.kind
    if fmt == "csv":
        path = out / f"{base}.csv"
        lines = [",".join(bundle.columns)]
        lines += [",".join(_fmt(v) for v in row) for row in bundle.rows]
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    else:
        path = out / f"{base}.json"
        path.write_text(json.dumps(
            {"columns": bundle.columns, "rows": bundle.rows}, indent=1))
        written.append(path)
    spath = out / f"{base}_summary.json"
    spath.write_text(json.dumps({
        "schema": SCHEMA_TAG,
        "config": bundle.config.to_dict(),
        "summary": bundle.summary,
        "n_failed": bundle.n_failed,
        "n_records": len(bundle.records),
    }, indent=1, default=float))
    written.append(spath)
    return written


def parse_table(path):
    """Read back an emitted CSV into (columns, rows) with exact floats."""
    lines = Path(path).read_text().strip().split("\n")
    cols = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        row = []
        for tok in line.split(","):
            try:
                row.append(int(tok))
            except ValueError:
                try:
                    row.append(float(tok))
                except ValueError:
                    row.append(tok)
        rows.append(row)
    return cols, rows
