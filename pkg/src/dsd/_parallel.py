"""Fork-join helpers.

Every parallel phase in this package has the same shape: split a work array
into contiguous per-worker chunks, run one task per chunk, join (the barrier),
then reduce the per-worker partials in chunk order.  Reducing in chunk order
is what makes outputs independent of the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


def split(items: np.ndarray, parts: int) -> list[np.ndarray]:
    """Contiguous, order-preserving split into at most ``parts`` non-empty chunks."""
    if len(items) == 0:
        return []
    parts = max(1, min(parts, len(items)))
    bounds = np.linspace(0, len(items), parts + 1).astype(np.int64)
    return [items[a:b] for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


class ForkJoin:
    """A fixed team of workers.  ``map`` returns only after every task finished."""

    def __init__(self, workers: int):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self._pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def map(self, fn: Callable[[T], R], chunks: Sequence[T]) -> list[R]:
        if self._pool is None or len(chunks) <= 1:
            return [fn(c) for c in chunks]
        return list(self._pool.map(fn, chunks))

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self) -> "ForkJoin":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
