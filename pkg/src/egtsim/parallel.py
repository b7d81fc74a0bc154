"""Deterministic worker-pool helpers.

EGTSIM_WORKERS caps worker parallelism for Monte Carlo trials and tournament
matches; when it is absent everything runs single-threaded.  Work units carry
their own derived seeds and results are reassembled by index, so outputs are
identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def worker_count() -> int:
    value = os.environ.get("EGTSIM_WORKERS")
    if not value:
        return 1
    try:
        n = int(value)
    except ValueError:
        raise ValueError(f"EGTSIM_WORKERS must be an integer, got {value!r}") from None
    return max(1, n)


def run_indexed(tasks: Sequence[Callable[[], T]]) -> list[T]:
    """Run closures, possibly on a thread pool, returning results in task order."""
    workers = worker_count()
    if workers == 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]


def chunk_ranges(total: int, chunks: int) -> list[tuple[int, int]]:
    """Split range(total) into at most `chunks` contiguous (offset, length) spans."""
    chunks = max(1, min(chunks, total))
    base, extra = divmod(total, chunks)
    spans = []
    start = 0
    for k in range(chunks):
        length = base + (1 if k < extra else 0)
        spans.append((start, length))
        start += length
    return spans
