"""Deterministic derivation of independent random streams.

Every source of randomness in the package draws from a generator obtained
through :func:`derived_rng`, keyed by a root seed plus a structural path
(stream namespace, item index, ...).  Results therefore depend only on the
seed and the key, never on scheduling or worker count.
"""

from __future__ import annotations

import numpy as np

# Stream namespaces; distinct first key component per consumer keeps
# independently derived generators from ever colliding.
CONCEPT_STREAM = 1
SHAPLEY_STREAM = 2
PERTURBATION_STREAM = 3
SWEEP_STREAM = 4
BENCHMARK_STREAM = 5

_MASK64 = (1 << 64) - 1


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Return the generator for stream ``key`` under ``seed``.

    The same (seed, key) pair always yields the same stream, independent of
    creation order, so parallel consumers can derive their own generators.
    """
    seq = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(seq))
