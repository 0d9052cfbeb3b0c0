"""Deterministic chunked map for bulk runs.

Work is split into fixed-size chunks whose random substreams are derived from
(seed, label, chunk index) via SHA-256, and partial results are merged in
chunk order.  The outcome is therefore a function of the seed alone: bitwise
identical for any worker count, including the sequential path.
"""
from __future__ import annotations

import hashlib
import multiprocessing
import os


def derive_seed(seed: int, label: str, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:{label}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def default_threads() -> int:
    env = os.environ.get("CLGCD_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def map_chunks(worker, chunks, threads: int = 1) -> list:
    """Apply ``worker`` to every chunk descriptor, preserving chunk order.

    ``worker`` must be a module-level function (picklable) when threads > 1.
    """
    chunks = list(chunks)
    if threads <= 1 or len(chunks) <= 1:
        return [worker(c) for c in chunks]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(processes=min(threads, len(chunks))) as pool:
        return pool.map(worker, chunks)
