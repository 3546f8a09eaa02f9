"""Execute an experiment config cell by cell and assemble its report."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ExperimentConfig
from .experiments import REGISTRY
from .report import Report, VerdictRow, emit


def worker_count(cfg: ExperimentConfig) -> int:
    n = cfg.threads or os.cpu_count() or 1
    env = os.environ.get("SCATTERLAB_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError as exc:
            raise ValueError(f"SCATTERLAB_THREADS must be an integer, got {env!r}") from exc
        if cap < 1:
            raise ValueError("SCATTERLAB_THREADS must be positive")
        n = min(n, cap)
    return max(1, n)


def _failed_row(cfg, cell, exc) -> VerdictRow:
    return VerdictRow(
        experiment=cfg.name, d=cfg.d, measured=math.nan, reference=math.nan, ref_provenance="error",
        passed=False, h_inv=cell.get("h_inv"), upsilon=cell.get("upsilon"), sigma=cfg.sigma, rho=cfg.rho,
        params=dict(cfg.parameters(), error=f"{type(exc).__name__}: {exc}"),
    )


def run(cfg: ExperimentConfig) -> Report:
    """Evaluate every grid cell (possibly in parallel) and append summary fits.

    Rows are assembled in config order, so the report does not depend on
    scheduling. A cell that raises ValueError or ArithmeticError becomes a
    failing row carrying the message.
    """
    exp = REGISTRY[cfg.kind]
    cells = exp.cells(cfg)

    def one(cell):
        try:
            return exp.run_cell(cfg, cell)
        except (ValueError, ArithmeticError) as exc:
            return [_failed_row(cfg, cell, exc)]

    workers = min(worker_count(cfg), len(cells))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(one, cells))
    else:
        chunks = [one(c) for c in cells]
    rows = [r for chunk in chunks for r in chunk]
    rows += exp.summarize(cfg, [r for r in rows if r.ref_provenance != "error"])
    return Report(cfg.name, cfg.kind, exp.anchor, cfg.seed, rows)


def write_outputs(report: Report, cfg: ExperimentConfig, out_dir=None) -> list[Path]:
    base = Path(out_dir) / cfg.name if out_dir is not None else Path(cfg.output_path or cfg.name)
    fmts = ("csv", "json") if cfg.output_format == "both" else (cfg.output_format,)
    return [emit(report, f, base.with_suffix(f".{f}")) for f in fmts]
