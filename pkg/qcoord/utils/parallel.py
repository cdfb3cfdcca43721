from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from qcoord.core.config import settings

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> Optional[int]:
    """Thread cap from QCOORD_THREADS; None lets the executor decide."""
    threads = settings.QCOORD_THREADS
    return threads if threads and threads > 0 else None


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Map `fn` over `items` on a thread pool, preserving input order.
    """
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
