"""
Replicate runner and output plumbing shared by every experiment.

=== How replicates are scheduled ===
1. Replicate r at grid point q_index owns the stream RngStream(seed, (q_index << 32) | r),
   so its draws do not depend on which worker runs it or when.
2. The replicates of one grid point are cut into chunks and submitted to a
   ProcessPoolExecutor; with one worker the chunks run in this process.
3. Each chunk returns (start, rows); rows are placed at their replicate index as the
   futures complete, so the result is identical for any worker count.
"""
import logging
from logging import Logger
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Callable

import numpy as np
import pandas as pd
from fasteners import InterProcessLock

import constants
from context import ExperimentConfig
from errors import OutputLockedError
from sampler.rng import RngStream

logger: Logger = logging.getLogger(__name__)

ReplicateTask = Callable[[float, int, RngStream], np.ndarray]

_REPLICATE_BITS: int = 32
_AUXILIARY_BASE: int = 1 << 62
_CHUNKS_PER_WORKER: int = 4

def replicate_stream_id(q_index: int, replicate: int) -> int:
    """Stream id of one replicate"""
    return (q_index << _REPLICATE_BITS) | replicate

def auxiliary_stream_id(q_index: int, slot: int = 0) -> int:
    """Stream id for draws that are not replicates (estimator streams, bootstrap)"""
    return _AUXILIARY_BASE | (q_index << 8) | slot

def _run_chunk(task: ReplicateTask, q: float, n: int, seed: int, q_index: int,
               start: int, stop: int) -> tuple[int, np.ndarray]:
    rows = [np.atleast_1d(np.asarray(task(q, n, RngStream(seed, replicate_stream_id(q_index, r))),
                                     dtype=float))
            for r in range(start, stop)]
    return start, np.vstack(rows)

def _chunks(replicates: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(replicates / (workers * _CHUNKS_PER_WORKER)))
    return [(start, min(start + size, replicates)) for start in range(0, replicates, size)]

def run_replicates(task: ReplicateTask, config: ExperimentConfig, q_index: int, q: float,
                   n: int | None = None) -> np.ndarray:
    """
    Run `task` once per replicate and return one row per replicate, in replicate order.
    `task` must be a module-level callable so it can be shipped to worker processes.
    """
    n = config.n if n is None else n
    chunks = _chunks(config.replicates, config.workers)
    if config.workers == 1:
        parts = [_run_chunk(task, q, n, config.seed, q_index, start, stop) for start, stop in chunks]
    else:
        parts = []
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            pending = set(executor.submit(_run_chunk, task, q, n, config.seed, q_index, start, stop)
                          for start, stop in chunks)
            for future in as_completed(pending):
                parts.append(future.result())
    result: np.ndarray | None = None
    for start, rows in parts:
        if result is None:
            result = np.empty((config.replicates, rows.shape[1]), dtype=float)
        result[start:start + len(rows)] = rows
    logger.debug("%s: %d replicates at q=%.6g n=%d on %d workers",
                 config.name, config.replicates, q, n, config.workers)
    return result

def write_csv(frame: pd.DataFrame, path: Path,
              timeout: float = constants.OUTPUT_LOCK_TIMEOUT_SECONDS) -> Path:
    """
    Write `frame` to `path` with 12 significant digits while holding `<path>.lock`.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lock_file = path.with_name(path.name + ".lock")
    lock: InterProcessLock = InterProcessLock(lock_file)
    if not lock.acquire(blocking=True, timeout=timeout):
        raise OutputLockedError(f"could not lock {lock_file} within {timeout:g} seconds")
    try:
        frame.to_csv(path, index=False, float_format=constants.CSV_FLOAT_FORMAT)
    finally:
        lock.release()
        if lock_file.exists():
            lock_file.unlink()
    logger.info("wrote %d rows to %s", len(frame), path)
    return path

def log_verdict(log: Logger, config: ExperimentConfig, q: float, passed: bool, detail: str) -> None:
    """Acceptance verdict at INFO, carrying the provenance columns as structured extras"""
    log.info("%s q=%.6g %s: %s", config.name, q, "pass" if passed else "FAIL", detail,
             extra={"experiment": config.name, **config.provenance(q), "passed": passed})
