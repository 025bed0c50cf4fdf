"""Command-line experiment runner.

One subcommand per experiment kind plus `fit` for re-fitting emitted
tables.  Exit codes: 0 success, 1 validation error, 2 when the fraction of
failed trials exceeds --fail-threshold.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import experiments, fits

_KIND_BY_COMMAND = {
    "lz": "lz_collapse",
    "grover-rabi": "grover_rabi",
    "grover-jump": "grover_jump",
    "ferro": "ferro_anneal",
    "predict": "predict",
    "phase-lock": "phase_lock",
}


def _add_common(sub):
    sub.add_argument("--config", metavar="PATH",
                     help="structured config file (keys: kind, params, "
                          "seed, workers, out, format); flags override")
    sub.add_argument("--seed", type=int, default=None, metavar="U64")
    sub.add_argument("--workers", type=int, default=None, metavar="N")
    sub.add_argument("--out", default=None, metavar="DIR")
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--fail-threshold", type=float, default=0.1,
                     metavar="FRAC",
                     help="exit 2 if more than this fraction of trials fail")
    sub.add_argument("--param", action="append", default=[], metavar="K=V",
                     help="experiment parameter override (JSON value)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rfqa",
        description="Simulations and analytics for quantum annealing with "
                    "locally oscillating transverse fields")
    subs = parser.add_subparsers(dest="command", required=True)
    for cmd, kind in _KIND_BY_COMMAND.items():
        sub = subs.add_parser(cmd, help=f"run the {kind} experiment")
        _add_common(sub)
    fit = subs.add_parser(
        "fit", help="weighted exponential-scaling fit of a (N, P, SE) table")
    fit.add_argument("table", metavar="CSV",
                     help="CSV with columns including n_qubits/N, "
                          "probability, std_error")
    fit.add_argument("--out", default=None, metavar="DIR")
    return parser


def _parse_params(pairs):
    params = {}
    for pair in pairs:
        if "=" not in pair:
            raise experiments.ConfigError(
                f"--param expects K=V, got {pair!r}")
        key, _, val = pair.partition("=")
        try:
            params[key] = json.loads(val)
        except json.JSONDecodeError:
            params[key] = val
    return params


def _run_fit(args) -> int:
    cols, rows = experiments.parse_table(args.table)

    def col(*names):
        for name in names:
            if name in cols:
                return [row[cols.index(name)] for row in rows]
        raise experiments.ConfigError(
            f"table lacks any of the columns {names}; has {cols}")

    ns = col("n_qubits", "N", "n")
    ps = col("probability", "P", "p")
    try:
        ses = col("std_error", "SE", "se")
    except experiments.ConfigError:
        ses = None
    res = fits.fit_exponent(ns, ps, ses)
    out = {"exponent": res.exponent, "exponent_se": res.exponent_se,
           "prefactor_log2": res.prefactor_log2}
    print(json.dumps(out, indent=1))
    if args.out:
        from pathlib import Path
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "exponent_fit.json").write_text(
            json.dumps(out, indent=1))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fit":
            return _run_fit(args)
        overrides = {
            "kind": _KIND_BY_COMMAND[args.command],
            "seed": args.seed,
            "workers": args.workers,
            "out": args.out,
            "format": args.format,
        }
        if args.config:
            config = experiments.ExperimentConfig.from_file(
                args.config, overrides)
        else:
            clean = {k: v for k, v in overrides.items() if v is not None}
            clean.setdefault("kind", _KIND_BY_COMMAND[args.command])
            config = experiments.ExperimentConfig(**clean)
        extra = _parse_params(args.param)
        if extra:
            config.params = {**config.params, **extra}
        bundle = experiments.run(config)
    except (experiments.ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    n_units = max(sum(r.diagnostics.get("n_attempted", 1)
                      for r in bundle.records), 1)
    print(f"{config.kind}: {len(bundle.records)} task(s), "
          f"{bundle.n_failed}/{n_units} failed trial(s)")
    for key, val in bundle.summary.items():
        print(f"  {key}: {val}")
    if bundle.n_failed > args.fail_threshold * n_units:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
