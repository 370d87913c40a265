"""Shared brute-force oracles for the test suite.

These stay deliberately naive (nested loops, exhaustive enumeration) so the
fast library paths are checked against independent computations.
"""

from __future__ import annotations

import itertools

import numpy as np


def exhaustive_kernel(a, m: int) -> set[tuple[int, ...]]:
    """All x with a @ x == 0 mod m, by scanning the full space m**ncols."""
    arr = np.asarray(a, dtype=np.int64) % m
    rows, cols = arr.shape
    out = set()
    for x in itertools.product(range(m), repeat=cols):
        vec = np.array(x, dtype=np.int64)
        if not ((arr @ vec) % m).any():
            out.add(x)
    return out


def module_span(gens, m: int, ncols: int) -> set[tuple[int, ...]]:
    """Closure of the given generator rows under addition mod m."""
    span = {(0,) * ncols}
    frontier = [np.zeros(ncols, dtype=np.int64)]
    gen_rows = [np.asarray(g, dtype=np.int64) % m for g in gens]
    while frontier:
        cur = frontier.pop()
        for g in gen_rows:
            nxt = tuple((cur + g) % m)
            if nxt not in span:
                span.add(nxt)
                frontier.append(np.array(nxt, dtype=np.int64))
    return span


def abelian_group_order(invariants) -> int:
    order = 1
    for d in invariants:
        order *= d
    return order
