import logging
from concurrent.futures import Future, ProcessPoolExecutor
from math import comb
from os import cpu_count, getenv
from typing import Callable, Iterable, List, Optional, Sequence


log = logging.getLogger(__name__)


def trivial_motion_dim(d: int) -> int:
    """Dimension of the rigid motions of R^d."""
    return comb(d + 1, 2)


def maxwell_bound(d: int, size: int) -> int:
    """Largest edge count a vertex set of ``size`` may induce: d*size - (d+1 choose 2)."""
    return d * size - trivial_motion_dim(d)


def default_parallelism() -> int:
    value = getenv('HYPERBANANA_PARALLELISM')
    if value:
        return max(1, int(value))
    return 1


def resolve_parallelism(parallelism: Optional[int]) -> int:
    """Clamp a requested worker count; 0 means one worker per CPU."""
    if parallelism is None:
        return default_parallelism()
    if parallelism <= 0:
        return cpu_count() or 1
    return parallelism


def run_jobs(fn: Callable, jobs: Sequence[tuple], parallelism: int = 1,
             initializer: Optional[Callable] = None, initargs: Iterable = (),
             done_callback: Optional[Callable[[Future], None]] = None) -> List:
    """Run ``fn(*job)`` for every job and return the results in job order.

    With more than one worker the jobs go to a process pool; ``done_callback`` is
    attached to every future, as it is for inline runs (with an already completed future).
    """
    if parallelism <= 1 or len(jobs) <= 1:
        if initializer is not None:
            initializer(*initargs)
        results = []
        for job in jobs:
            future = Future()
            future.set_result(fn(*job))
            if done_callback is not None:
                done_callback(future)
            results.append(future.result())
        return results
    workers = min(parallelism, len(jobs))
    log.debug(f'Dispatching {len(jobs)} jobs to {workers} worker processes')
    with ProcessPoolExecutor(max_workers=workers, initializer=initializer, initargs=tuple(initargs)) as executor:
        futures = [executor.submit(fn, *job) for job in jobs]
        if done_callback is not None:
            for future in futures:
                future.add_done_callback(done_callback)
        return [future.result() for future in futures]
