from concurrent.futures import ThreadPoolExecutor

import numpy as np


def pmap(fn, items, n_jobs=1):
    """Order-preserving map, threaded when ``n_jobs > 1``.

    Results never depend on ``n_jobs``: each item carries its own
    randomness (see :func:`rng_for`) and results are collected by position.
    """
    items = list(items)
    if n_jobs is None or n_jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))


PRNG_NAME = "numpy.PCG64 via SeedSequence(seed, *row_key)"


def rng_for(seed, *key):
    """Independent generator keyed by ``(seed, *key)``; keys must be nonnegative ints."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, key)])))
