"""Batch orchestration of diagonalization runs and emission of their results."""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg as la
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn

from ..config import get_thread_cap
from ..exceptions import NoSplitFoundError, SingularMatrixError
from ..pencil import Pencil
from ..solver.models.results import DiagResult
from ..solver.rpd import rpd
from ..solver.rpd_metrics import (
    EigenOrder,
    diag_errors,
    efficiency_factor,
    eigen_error,
    is_success,
)
from ..substrate.dense import is_at_infinity, ref_eig, solve
from ..substrate.rng import RngStream
from ..utils import atomic_write_csv, atomic_write_json
from .comparator import comparator_inversion
from .models.records import ExperimentConfig, ExperimentResult, RunRecord
from .recipes import build_pencil, eigen_order

console = Console(stderr=True)

# subproblems this small are left out of the split-size histogram
HISTOGRAM_MIN_M = 3
SPLIT_BINS = np.linspace(0.0, 1.0, 21)

RUN_FAILURES = (NoSplitFoundError, SingularMatrixError, np.linalg.LinAlgError)


def draw_stream(cfg: ExperimentConfig, draw: int) -> RngStream:
    return RngStream(cfg.seed, (f"draw-{draw}",))


def run_stream(cfg: ExperimentConfig, draw: int, run: int) -> RngStream:
    return RngStream(cfg.seed, (f"draw-{draw}", f"run-{run}"))


def _reference_error(
    res: DiagResult, oracle: np.ndarray, order: EigenOrder
) -> Optional[float]:
    """eigen_error of a dense solver on the very problem the algorithm saw"""
    try:
        if res.algorithm == "comparator":
            values = la.eigvals(solve(res.perturbed.B, res.perturbed.A))
        else:
            pairs = la.eigvals(res.perturbed.A, res.perturbed.B, homogeneous_eigvals=True)
            with np.errstate(divide="ignore", invalid="ignore"):
                values = pairs[0] / pairs[1]
            values[~np.isfinite(values)] = complex(np.inf, 0.0)
        return eigen_error(values, oracle, order)
    except (SingularMatrixError, np.linalg.LinAlgError):
        return None


def _target_distance(values: np.ndarray, target: complex) -> Optional[float]:
    finite = values[~is_at_infinity(values)]
    if finite.size == 0:
        return None
    return float(np.min(np.abs(finite - target)))


def evaluate_run(
    cfg: ExperimentConfig,
    pencil: Pencil,
    oracle: np.ndarray,
    draw: int,
    run: int,
    algorithm: str,
) -> RunRecord:
    """Run one diagonalization and measure it; expected failures become failed records"""
    rng = run_stream(cfg, draw, run)
    record = RunRecord(run=run, draw=draw, algorithm=algorithm)
    started = time.perf_counter()
    try:
        if algorithm == "comparator":
            res = comparator_inversion(pencil, cfg.eps_user, rng, cfg.cutoff, cfg.mode)
        else:
            res = rpd(pencil, cfg.eps_user, cfg.mode, rng, cfg.cutoff)
        errors = diag_errors(pencil, res)
    except RUN_FAILURES as e:
        record.wall_time = time.perf_counter() - started
        record.error = type(e).__name__
        logging.error(f"{algorithm} run {run} of draw {draw} failed: {e}")
        return record

    record.wall_time = time.perf_counter() - started
    record.diag_error = errors["diag_error"]
    record.diag_error_right = errors["diag_error_right"]
    record.success = is_success(record.diag_error, cfg.eps_user)
    record.splits = [(s.m, s.k) for s in res.stats.splits]
    record.lines_per_split = [s.lines_checked for s in res.stats.splits]
    record.efficiency_factor = efficiency_factor(res.stats, pencil.n, cfg.cutoff)
    record.delegated = res.stats.delegated

    values = res.eigenvalues()
    order = eigen_order(cfg.name)
    record.eigen_error = eigen_error(values, oracle, order)
    record.reference_error = _reference_error(res, oracle, order)
    if cfg.name == "singular_pencil":
        record.target_distance = _target_distance(values, 1.0)
    logging.info(
        f"{algorithm} run {run} of draw {draw}: diag error {record.diag_error:.2f} "
        f"in {record.wall_time:.2f}s"
    )
    return record


def _quantiles(values: Sequence[float]) -> Dict[str, Optional[float]]:
    series = pd.Series([v for v in values if v is not None and math.isfinite(v)], dtype=float)
    if series.empty:
        return {"count": 0, "min": None, "median": None, "mean": None, "p90": None, "max": None}
    return {
        "count": int(series.size),
        "min": float(series.min()),
        "median": float(series.median()),
        "mean": float(series.mean()),
        "p90": float(series.quantile(0.9)),
        "max": float(series.max()),
    }


def _histogram(values: Sequence[float], bins: np.ndarray) -> List[Dict[str, float]]:
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins)
    return [
        {"bin_lo": float(lo), "bin_hi": float(hi), "count": int(c)}
        for lo, hi, c in zip(edges[:-1], edges[1:], counts)
    ]


def summarize(cfg: ExperimentConfig, records: List[RunRecord]) -> Dict:
    summary: Dict = {"config": cfg.to_dict(), "algorithms": {}, "histograms": {}}
    for algorithm in sorted({r.algorithm for r in records}):
        runs = [r for r in records if r.algorithm == algorithm]
        splits = [
            k / m for r in runs for m, k in r.splits if m > HISTOGRAM_MIN_M
        ]
        efficiency = [r.efficiency_factor for r in runs if r.efficiency_factor is not None]
        summary["algorithms"][algorithm] = {
            "runs": len(runs),
            "failures": sum(1 for r in runs if not r.success),
            "errors": sum(1 for r in runs if r.error),
            "diag_error": _quantiles([r.diag_error for r in runs]),
            "eigen_error": _quantiles([r.eigen_error for r in runs]),
            "reference_error": _quantiles([r.reference_error for r in runs]),
            "efficiency_factor": _quantiles(efficiency),
            "split_range": [min(splits), max(splits)] if splits else None,
            "target_distance": _quantiles([r.target_distance for r in runs]),
        }
        upper = max(2.0, math.ceil(max(efficiency, default=1.0)))
        summary["histograms"][algorithm] = {
            "split_size": _histogram(splits, SPLIT_BINS),
            "efficiency_factor": _histogram(efficiency, np.linspace(1.0, upper, 21)),
        }
    rpd_summary = summary["algorithms"].get("rpd", {})
    summary["failures"] = rpd_summary.get("failures", 0)
    return summary


def run_experiment(
    cfg: ExperimentConfig, workers: Optional[int] = None, show_progress: bool = True
) -> ExperimentResult:
    """Execute every (draw, run) pair, in parallel, and summarize.

    Records come back sorted by draw, run and algorithm whatever the
    completion order.
    """
    workers = workers or get_thread_cap()
    algorithms = ["rpd"] + (["comparator"] if cfg.comparator else [])
    pencils: List[Tuple[Pencil, np.ndarray]] = []
    for draw in range(cfg.draws):
        pencil = build_pencil(cfg, draw_stream(cfg, draw))
        pencils.append((pencil, ref_eig(pencil)))

    tasks = [
        (draw, run, algorithm)
        for draw in range(cfg.draws)
        for run in range(cfg.runs)
        for algorithm in algorithms
    ]
    records: List[RunRecord] = []
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {
            executor.submit(evaluate_run, cfg, pencils[draw][0], pencils[draw][1], draw, run, algorithm): (
                draw,
                run,
                algorithm,
            )
            for draw, run, algorithm in tasks
        }
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}"),
            console=console,
            transient=True,
            disable=not show_progress,
        ) as progress:
            task = progress.add_task(f"[cyan]{cfg.name}: diagonalizing...", total=len(futures))
            for future in as_completed(futures):
                records.append(future.result())
                progress.advance(task)

    records.sort(key=lambda r: (r.draw, r.run, r.algorithm != "rpd"))
    return ExperimentResult(config=cfg, records=records, summary=summarize(cfg, records))


def emit(result: ExperimentResult, out_dir: Path, formats: Sequence[str] = ("json", "csv")) -> Dict[str, Path]:
    """Write summary.json, runs.csv and histograms.csv under out_dir"""
    out_dir = Path(out_dir)
    written: Dict[str, Path] = {}
    if "json" in formats:
        payload = {
            "config": result.config.to_dict(),
            "failures": result.summary.get("failures", 0),
            "summary": result.summary["algorithms"],
            "runs": [r.to_dict() for r in result.records],
            "histograms": result.summary["histograms"],
        }
        written["summary"] = atomic_write_json(out_dir / "summary.json", payload)
    if "csv" in formats:
        runs = pd.DataFrame([r.to_row() for r in result.records])
        written["runs"] = atomic_write_csv(out_dir / "runs.csv", runs)
        rows = [
            {"algorithm": algorithm, "histogram": kind, **entry}
            for algorithm, histograms in result.summary["histograms"].items()
            for kind, entries in histograms.items()
            for entry in entries
        ]
        frame = pd.DataFrame(rows, columns=["algorithm", "histogram", "bin_lo", "bin_hi", "count"])
        written["histograms"] = atomic_write_csv(out_dir / "histograms.csv", frame)
    return written
