"""Runtime configuration: worker-thread count."""

import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

THREADS_ENV = "KREIN_SPECTRA_THREADS"

_override = None


@contextmanager
def use_threads(n):
    """Use ``n`` worker threads inside the block (``None`` leaves the default)."""
    global _override
    saved, _override = _override, n
    try:
        yield
    finally:
        _override = saved


def thread_count(threads=None):
    """Resolve the number of worker threads.

    Priority: explicit argument, then an enclosing :func:`use_threads` block,
    then the ``KREIN_SPECTRA_THREADS`` environment variable, then the
    hardware count.
    """
    if threads is None:
        threads = _override
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        if env:
            try:
                threads = int(env)
            except ValueError:
                threads = None
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


def map_chunks(func, array, threads=None, min_chunk=2048):
    """Apply an elementwise ``func`` to ``array`` in parallel chunks.

    The output is the concatenation of the chunk results in input order, so
    it does not depend on the number of threads.
    """
    array = np.asarray(array)
    workers = thread_count(threads)
    if workers == 1 or array.size <= min_chunk:
        return func(array)
    nchunks = min(workers, max(1, array.size // min_chunk))
    pieces = np.array_split(array, nchunks)
    with ThreadPoolExecutor(max_workers=nchunks) as pool:
        results = list(pool.map(func, pieces))
    if isinstance(results[0], tuple):
        return tuple(np.concatenate(parts) for parts in zip(*results))
    return np.concatenate(results)
