"""Deterministic chunked execution over a process pool.

Work items are split into fixed chunks, each chunk is processed
independently against shared immutable inputs, and results are merged in
chunk order.  Because every per-item value is computed the same way
regardless of chunk boundaries, outputs are identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

__all__ = ["split_chunks", "iter_chunked", "run_chunked"]


def split_chunks(items: Sequence[T], chunk_size: int) -> list[list[T]]:
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    return [list(items[i : i + chunk_size]) for i in range(0, len(items), chunk_size)]


def iter_chunked(
    fn: Callable[[list[T]], R],
    items: Sequence[T],
    workers: int = 1,
    chunk_size: int | None = None,
):
    """Apply ``fn`` to chunks of ``items``, yielding results in chunk order.

    Results stream as chunks complete (in order), so callers can persist
    partial progress while later chunks are still being computed.
    """
    if not items:
        return
    if chunk_size is None:
        chunk_size = max(1, (len(items) + max(workers, 1) * 4 - 1) // (max(workers, 1) * 4))
    chunks = split_chunks(items, chunk_size)
    if workers <= 1 or len(chunks) == 1:
        for chunk in chunks:
            yield fn(chunk)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(fn, chunks)


def run_chunked(
    fn: Callable[[list[T]], R],
    items: Sequence[T],
    workers: int = 1,
    chunk_size: int | None = None,
) -> list[R]:
    """Eager variant of :func:`iter_chunked`."""
    return list(iter_chunked(fn, items, workers, chunk_size))
