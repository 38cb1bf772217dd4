"""Deterministic counter-based random substreams for Monte-Carlo runs.

Work is split into fixed-size blocks; block ``b`` of a run seeded with
``master_seed`` always draws from ``default_rng([*master_seed, b])``.
Blocks are independent, so any degree of parallelism reproduces the
single-threaded numbers bit for bit.  BLOCK_SIZE is part of this protocol:
changing it changes the stream layout and therefore the sampled values.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

__all__ = ["BLOCK_SIZE", "substream", "blocks", "map_blocks"]

BLOCK_SIZE = 4096


def _entropy(master_seed) -> tuple[int, ...]:
    if isinstance(master_seed, (int, np.integer)):
        return (int(master_seed),)
    return tuple(int(s) for s in master_seed)


def substream(master_seed, index: int) -> np.random.Generator:
    """Generator for block ``index`` of the run keyed by ``master_seed``."""
    return np.random.default_rng([*_entropy(master_seed), int(index)])


def blocks(total: int, block_size: int = BLOCK_SIZE) -> list[tuple[int, int]]:
    """(block_index, count) pairs covering ``total`` items."""
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    out = []
    done = 0
    index = 0
    while done < total:
        cnt = min(block_size, total - done)
        out.append((index, cnt))
        done += cnt
        index += 1
    return out


def map_blocks(fn: Callable, work: Sequence, threads: int = 1) -> list:
    """Apply ``fn`` over block descriptors, preserving block order.

    Results are returned in submission order so that any later floating
    point reduction sums them in a fixed sequence.
    """
    if threads <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, work))
