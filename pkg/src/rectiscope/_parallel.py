"""Deterministic data-parallel helpers.

Work items are pure functions of immutable inputs; results are gathered in
input order, so the outcome is independent of the worker count.  The pool
size is capped by the RECTISCOPE_THREADS environment variable (0 or unset
means auto).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .core import InputError


def worker_count() -> int:
    raw = os.environ.get("RECTISCOPE_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"RECTISCOPE_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise InputError("RECTISCOPE_THREADS must be >= 0")
    if n == 0:
        return os.cpu_count() or 1
    return n


def map_ordered(fn, items):
    """Map fn over items, results in input order."""
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
