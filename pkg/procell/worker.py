# procell/worker.py

import asyncio
from typing import Any, Callable, Iterable, List, TypeVar

from config.settings import settings

from .utils import trace

T = TypeVar("T")
R = TypeVar("R")


async def worker_loop(worker_id: int, queue: asyncio.Queue, fn: Callable[[Any], Any], results: List[Any]) -> None:
    tag = f"Worker {worker_id}"
    trace(tag, "Started")

    while True:
        try:
            pos, item = queue.get_nowait()
        except asyncio.QueueEmpty:
            trace(tag, "Queue drained")
            return

        trace(tag, f"Processing job {pos}")
        # pure CPU work; a thread keeps the loop free to hand out the next job
        results[pos] = await asyncio.to_thread(fn, item)


async def main(fn: Callable[[T], R], items: List[T], num_workers: int) -> List[R]:
    queue: asyncio.Queue = asyncio.Queue()
    for pos, item in enumerate(items):
        queue.put_nowait((pos, item))

    results: List[Any] = [None] * len(items)
    tasks = [asyncio.create_task(worker_loop(i, queue, fn, results)) for i in range(num_workers)]
    await asyncio.gather(*tasks)
    return results


def run_parallel(fn: Callable[[T], R], items: Iterable[T], jobs: int | None = None) -> List[R]:
    """
    Apply fn to every item, fanned out over `jobs` workers.
    Results come back in input order; jobs <= 1 runs inline.
    """
    items = list(items)
    jobs = settings.DEFAULT_JOBS if jobs is None else jobs
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    return asyncio.run(main(fn, items, num_workers=min(jobs, len(items))))
