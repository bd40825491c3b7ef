"""Small shared helpers: deterministic reductions, parallel mapping, JSON."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def tree_sum(values) -> float:
    """Sum floats by pairwise reduction in a fixed order.

    The reduction tree depends only on the number of items, so the result is
    bit-stable across runs and worker counts (a left-to-right accumulation
    would be as stable, but the fixed tree also keeps rounding error lower
    for long lists).
    """
    vals = [float(v) for v in values]
    if not vals:
        return 0.0
    while len(vals) > 1:
        vals = [vals[i] + vals[i + 1] if i + 1 < len(vals) else vals[i] for i in range(0, len(vals), 2)]
    return vals[0]


def parallel_map(fn, items, workers: int = 1) -> list:
    """Map ``fn`` over ``items``, preserving order.

    With ``workers > 1`` the calls run on a thread pool; callers must pass
    pure functions whose randomness, if any, is pre-derived per item.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def to_jsonable(obj):
    """Recursively convert numpy containers/scalars to plain Python."""
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()] if obj.ndim > 1 else obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    """Serialize deterministically: sorted keys, fixed layout, trailing newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"
