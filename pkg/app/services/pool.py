"""Order-preserving worker pool for exhaustive sweeps.

Work items must pickle into worker processes, so callers pass module-level
functions and plain tuples. One worker runs in-process.
"""

from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

from app.config import get_settings

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """Order-preserving map, in worker processes when ``workers`` > 1."""
    count = workers if workers is not None else get_settings().workers
    work = list(items)
    if count <= 1 or len(work) < 2:
        return [fn(item) for item in work]
    chunk = max(1, len(work) // (count * 4))
    with ProcessPoolExecutor(max_workers=count) as pool:
        return list(pool.map(fn, work, chunksize=chunk))
