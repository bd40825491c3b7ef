"""Command line surface: explain, metrics, sweep, benchmark.

Exit codes: 0 on success, 2 when the configuration or an input file is
invalid (nothing is computed in that case), 1 when a run fails at compute
time.  Diagnostics go to stderr; the ``EIX_LOG`` environment variable sets
the log level (DEBUG, INFO, WARNING, ERROR).
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import rng
from .errors import ExplainerError, ShapeMismatch
from .graphs import load_dataset, load_graph
from .metrics import DEFAULT_INFIDELITY_SAMPLES, evaluate_relevance
from .model import load_model
from .pipeline import ExplainConfig, explain, load_explanation, save_explanation
from .util import canonical_json, parallel_map

log = logging.getLogger("conceptrank")

SWEEP_CSV_SCHEMA = "# conceptrank-sweep-csv-v1"
BENCHMARK_CSV_SCHEMA = "# conceptrank-benchmark-csv-v1"

SWEEP_COLUMNS = [
    "dataset", "graph_id", "param_value", "repeat",
    "entropy", "infd_gauss", "infd_unit", "wallclock_s",
]
BENCHMARK_COLUMNS = [
    "dataset", "graph_id", "entropy",
    "infd_gauss", "infd_gauss_stderr", "infd_unit", "wallclock_s",
]


class _UsageError(Exception):
    """Invalid configuration or input; maps to exit code 2."""


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise _UsageError(f"{what} file not found: {p}")
    return p


def _require_dir(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_dir():
        raise _UsageError(f"{what} directory not found: {p}")
    return p


def _explain_config(args) -> ExplainConfig:
    if args.L < 2:
        raise _UsageError(f"--L must be >= 2, got {args.L}")
    if not (0.0 < args.p <= 1.0):
        raise _UsageError(f"--p must lie in (0, 1], got {args.p}")
    if args.workers < 1:
        raise _UsageError(f"--workers must be >= 1, got {args.workers}")
    if not (0.0 <= args.damping < 1.0):
        raise _UsageError(f"--damping must lie in [0, 1), got {args.damping}")
    if args.shapley_samples < 1:
        raise _UsageError("--shapley-samples must be >= 1")
    if args.shapley_exact_max < 0:
        raise _UsageError("--shapley-exact-max must be >= 0")
    return ExplainConfig(
        L=args.L,
        p=args.p,
        seed=args.seed,
        shapley_exact_max=args.shapley_exact_max,
        shapley_samples=args.shapley_samples,
        damping=args.damping,
        workers=args.workers,
    )


def _add_explain_flags(sp) -> None:
    sp.add_argument("--L", type=int, default=15, help="number of concepts (default 15)")
    sp.add_argument("--p", type=float, default=0.2,
                    help="concept size fraction in (0, 1] (default 0.2)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--shapley-samples", type=int, default=200)
    sp.add_argument("--shapley-exact-max", type=int, default=12)
    sp.add_argument("--damping", type=float, default=1e-3)
    sp.add_argument("--workers", type=int, default=1)


def _add_inf_samples_flag(sp) -> None:
    sp.add_argument("--inf-samples", type=int, default=DEFAULT_INFIDELITY_SAMPLES)


# --------------------------------------------------------------------------
# explain
# --------------------------------------------------------------------------

def cmd_explain(args) -> int:
    model_path = _require_file(args.model, "model")
    graph_path = _require_file(args.graph, "graph")
    cfg = _explain_config(args)
    model = load_model(model_path)
    graph = load_graph(graph_path)
    out = Path(args.output) if args.output else graph_path.with_name(
        graph_path.stem + ".explanation.json"
    )

    em = explain(model, graph, cfg)
    save_explanation(em, out)
    for stage, seconds in em.meta["stage_seconds"].items():
        log.info("timing %s=%.3fs", stage, seconds)
    print(f"wrote {out}")
    return 0


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------

def cmd_metrics(args) -> int:
    model_path = _require_file(args.model, "model")
    graph_path = _require_file(args.graph, "graph")
    expl_path = _require_file(args.explanation, "explanation")
    if args.inf_samples < 1:
        raise _UsageError("--inf-samples must be >= 1")

    model = load_model(model_path)
    graph = load_graph(graph_path)
    explanation = load_explanation(expl_path)
    relevance = np.asarray(explanation["node_relevance"], dtype=float)
    if relevance.shape != (graph.num_nodes,):
        raise ShapeMismatch(
            f"explanation covers {relevance.shape[0]} nodes, graph has {graph.num_nodes}"
        )

    report = evaluate_relevance(
        model, graph, relevance,
        perturbation=args.perturbation,
        samples=args.inf_samples,
        seed=args.seed,
        workers=args.workers,
    )
    print(f"entropy {report.entropy:.10g}")
    if report.infidelity_gaussian is not None:
        print(
            f"infidelity_gaussian {report.infidelity_gaussian:.10g}"
            f" ± {report.infidelity_gaussian_stderr:.4g}"
        )
    if report.infidelity_unit is not None:
        print(f"infidelity_unit {report.infidelity_unit:.10g}")

    if args.output:
        Path(args.output).write_text(canonical_json(report.to_dict()), encoding="utf-8")
    else:
        explanation["metrics"] = report.to_dict()
        Path(expl_path).write_text(canonical_json(explanation), encoding="utf-8")
    return 0


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------

def _run_one(model, graph, cfg: ExplainConfig, perturbation: str, inf_samples: int):
    t0 = time.perf_counter()
    em = explain(model, graph, cfg)
    report = evaluate_relevance(
        model, graph, em.node_relevance,
        perturbation=perturbation, samples=inf_samples, seed=cfg.seed,
    )
    return report, time.perf_counter() - t0


def _parse_grid(raw: str, param: str) -> list[float]:
    try:
        values = [float(v) for v in raw.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"--grid must be comma-separated numbers: {exc}")
    if not values:
        raise _UsageError("--grid must not be empty")
    if param == "L" and any(v != int(v) or v < 2 for v in values):
        raise _UsageError("--grid for L must contain integers >= 2")
    if param == "p" and any(not (0.0 < v <= 1.0) for v in values):
        raise _UsageError("--grid for p must lie in (0, 1]")
    return values


def cmd_sweep(args) -> int:
    model_path = _require_file(args.model, "model")
    dataset_dir = _require_dir(args.dataset, "dataset")
    grid = _parse_grid(args.grid, args.param)
    if args.repeats < 1:
        raise _UsageError("--repeats must be >= 1")
    base_cfg = _explain_config(args)

    model = load_model(model_path)
    entries = load_dataset(dataset_dir)
    if not entries:
        raise _UsageError(f"dataset at {dataset_dir} lists no graphs")

    dataset_name = dataset_dir.name

    tasks = []
    for vi, value in enumerate(grid):
        for gi, entry in enumerate(entries):
            for repeat in range(args.repeats):
                seed = int(
                    rng.derived_rng(args.seed, rng.SWEEP_STREAM, vi, gi, repeat).integers(2**63)
                )
                if args.param == "L":
                    cfg = ExplainConfig(
                        L=int(value), p=base_cfg.p, seed=seed,
                        shapley_exact_max=base_cfg.shapley_exact_max,
                        shapley_samples=base_cfg.shapley_samples,
                        damping=base_cfg.damping,
                    )
                else:
                    cfg = ExplainConfig(
                        L=base_cfg.L, p=float(value), seed=seed,
                        shapley_exact_max=base_cfg.shapley_exact_max,
                        shapley_samples=base_cfg.shapley_samples,
                        damping=base_cfg.damping,
                    )
                tasks.append((value, entry, repeat, cfg))

    def run_task(task):
        value, entry, repeat, cfg = task
        report, wallclock = _run_one(model, entry.graph, cfg, "both", args.inf_samples)
        return [
            dataset_name, entry.name, value, repeat,
            report.entropy, report.infidelity_gaussian, report.infidelity_unit, wallclock,
        ]

    rows = parallel_map(run_task, tasks, workers=args.workers)

    summary = _sweep_summary(rows, grid)
    out = Path(args.output)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        fh.write(SWEEP_CSV_SCHEMA + "\n")
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        writer.writerows(rows)
        writer.writerows(summary)
    for line in _spread_lines(rows, grid, dataset_name):
        print(line)
    print(f"wrote {out}")
    return 0


def _sweep_summary(rows, grid) -> list[list]:
    summary = []
    for value in grid:
        block = [r for r in rows if r[2] == value]
        for tag, fn in (("__mean__", np.mean), ("__std__", np.std)):
            summary.append([
                rows[0][0], tag, value, "",
                float(fn([r[4] for r in block])),
                float(fn([r[5] for r in block])),
                float(fn([r[6] for r in block])),
                float(fn([r[7] for r in block])),
            ])
    return summary


def _spread_lines(rows, grid, dataset_name) -> list[str]:
    # Relative spread of per-value medians; a flatness diagnostic for the
    # parameter study.
    lines = []
    for name, col in (("entropy", 4), ("infd_gauss", 5), ("infd_unit", 6)):
        medians = [statistics.median(r[col] for r in rows if r[2] == value) for value in grid]
        center = statistics.median(medians)
        spread = (max(medians) - min(medians)) / abs(center) if center != 0 else float("nan")
        lines.append(
            f"{dataset_name} {name}: medians per value = "
            + ", ".join(f"{m:.6g}" for m in medians)
            + f"; relative spread = {spread:.6g}"
        )
    return lines


# --------------------------------------------------------------------------
# benchmark
# --------------------------------------------------------------------------

def cmd_benchmark(args) -> int:
    model_path = _require_file(args.model, "model")
    dataset_dir = _require_dir(args.dataset, "dataset")
    base_cfg = _explain_config(args)

    model = load_model(model_path)
    entries = load_dataset(dataset_dir)
    if args.split != "all":
        entries = [e for e in entries if e.split == args.split]
    if not entries:
        raise _UsageError(f"dataset at {dataset_dir} has no graphs in split '{args.split}'")

    dataset_name = dataset_dir.name

    def run_entry(indexed):
        gi, entry = indexed
        seed = int(rng.derived_rng(args.seed, rng.BENCHMARK_STREAM, gi).integers(2**63))
        cfg = ExplainConfig(
            L=base_cfg.L, p=base_cfg.p, seed=seed,
            shapley_exact_max=base_cfg.shapley_exact_max,
            shapley_samples=base_cfg.shapley_samples,
            damping=base_cfg.damping,
        )
        t0 = time.perf_counter()
        try:
            em = explain(model, entry.graph, cfg)
            report = evaluate_relevance(
                model, entry.graph, em.node_relevance,
                perturbation="both", samples=args.inf_samples, seed=seed,
            )
        except Exception as exc:  # per-graph isolation: one failure must not void the run
            log.error("graph %s failed: %s", entry.name, exc)
            return None
        return [
            dataset_name, entry.name, report.entropy,
            report.infidelity_gaussian, report.infidelity_gaussian_stderr,
            report.infidelity_unit, time.perf_counter() - t0,
        ]

    results = parallel_map(run_entry, enumerate(entries), workers=args.workers)
    rows = [r for r in results if r is not None]
    failed = len(results) - len(rows)

    out = Path(args.output)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        fh.write(BENCHMARK_CSV_SCHEMA + "\n")
        writer = csv.writer(fh)
        writer.writerow(BENCHMARK_COLUMNS)
        writer.writerows(rows)
        if rows:
            for tag, fn in (("__mean__", np.mean), ("__std__", np.std)):
                writer.writerow([
                    dataset_name, tag,
                    float(fn([r[2] for r in rows])),
                    float(fn([r[3] for r in rows])),
                    float(fn([r[4] for r in rows])),
                    float(fn([r[5] for r in rows])),
                    float(fn([r[6] for r in rows])),
                ])
    if rows:
        mean_row = [float(np.mean([r[c] for r in rows])) for c in (2, 3, 5)]
        std_row = [float(np.std([r[c] for r in rows])) for c in (2, 3, 5)]
        print(
            f"{dataset_name}: entropy {mean_row[0]:.4g} ± {std_row[0]:.4g} | "
            f"infidelity_gaussian {mean_row[1]:.4g} ± {std_row[1]:.4g} | "
            f"infidelity_unit {mean_row[2]:.4g} ± {std_row[2]:.4g}"
        )
    print(f"wrote {out} ({len(rows)} graphs, {failed} failed)")
    return 1 if failed else 0


# --------------------------------------------------------------------------
# parser / entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptrank",
        description="Concept-based explanations for graph classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("explain", help="explain one graph and write the relevance map")
    sp.add_argument("--model", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--output", default=None)
    _add_explain_flags(sp)
    sp.set_defaults(func=cmd_explain)

    sp = sub.add_parser("metrics", help="score an explanation file")
    sp.add_argument("--model", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--explanation", required=True)
    sp.add_argument("--output", default=None,
                    help="write the report here instead of appending to the explanation")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--perturbation", choices=["gaussian", "unit", "both"], default="both")
    _add_inf_samples_flag(sp)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("sweep", help="parameter study over a dataset, CSV output")
    sp.add_argument("--model", required=True)
    sp.add_argument("--dataset", required=True)
    sp.add_argument("--param", choices=["L", "p"], required=True)
    sp.add_argument("--grid", required=True, help="comma-separated parameter values")
    sp.add_argument("--repeats", type=int, default=1)
    sp.add_argument("--output", default="sweep.csv")
    _add_explain_flags(sp)
    _add_inf_samples_flag(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("benchmark", help="per-graph metrics over a dataset, CSV output")
    sp.add_argument("--model", required=True)
    sp.add_argument("--dataset", required=True)
    sp.add_argument("--split", choices=["train", "test", "all"], default="test")
    sp.add_argument("--output", default="benchmark.csv")
    _add_explain_flags(sp)
    _add_inf_samples_flag(sp)
    sp.set_defaults(func=cmd_benchmark)

    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("EIX_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )
    log.setLevel(level)


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (_UsageError, ExplainerError) as exc:
        stage = getattr(exc, "stage", None)
        if stage is not None:
            # Validation passed but a pipeline stage rejected the data.
            print(f"error [{stage}]: {exc}", file=sys.stderr)
            return 1
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        stage = getattr(exc, "stage", None)
        tag = f" [{stage}]" if stage else ""
        print(f"runtime error{tag}: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
