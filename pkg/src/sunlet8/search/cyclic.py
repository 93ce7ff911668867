"""Cyclic L8-decompositions of K_m x K_n for odd m, n by the difference method.

Identify the vertex ``(i, j)`` with the element ``(i, j)`` of Z_m x Z_n.  The
translations of the group are automorphisms of K_m x K_n, and they split the
edges into ``(m-1)/2 + (n-1)/2`` orbits of size ``mn``: an edge joining two
vertices in one column is classified by its row difference up to sign, and
likewise for rows.  A set of base blocks whose edges hit every orbit exactly
once develops (under all ``mn`` translations) into a decomposition.  When
``m + n - 2 = 16k`` exactly ``k`` base blocks are needed, which keeps the
search tiny even where plain exact cover is hopeless (K_15 x K_19 has 4560
edges).  ``m = 1`` gives cyclic decompositions of K_n.
"""

from __future__ import annotations

import random
import time
from typing import Iterator, Optional

from ..graphs import CartesianComplete, Complete, GraphSpec, Vertex
from ..sunlet import SunletBlock
from ..verify import Decomposition, verify
from .engine import SearchError, SearchOutcome, SearchStats


def _orbit_class(m: int, n: int, a: tuple[int, int], b: tuple[int, int]) -> Optional[tuple[int, int]]:
    """Orbit label of edge ab, or None when a, b are not adjacent."""
    dr = (b[0] - a[0]) % m
    dc = (b[1] - a[1]) % n
    if dr and not dc:
        return (0, min(dr, m - dr))
    if dc and not dr:
        return (1, min(dc, n - dc))
    return None


def base_block_count(m: int, n: int) -> int:
    if m % 2 == 0 or n % 2 == 0:
        raise ValueError("the difference method here needs odd m and n")
    if (m + n - 2) % 16:
        raise ValueError(f"m + n - 2 = {m + n - 2} is not a multiple of 16")
    return (m + n - 2) // 16


def find_base_blocks(
    m: int, n: int, seed: int = 0, time_budget: float = 60.0
) -> tuple[Optional[list[SunletBlock]], SearchStats]:
    """Base blocks covering every edge orbit once, or None on timeout/exhaustion."""
    k = base_block_count(m, n)
    rng = random.Random(seed)
    classes = [(0, d) for d in range(1, (m - 1) // 2 + 1)] + [(1, d) for d in range(1, (n - 1) // 2 + 1)]
    steps = [(d, 0) for d in range(1, m)] + [(0, d) for d in range(1, n)]
    stats = SearchStats()
    t0 = time.monotonic()
    deadline = t0 + time_budget
    used: set[tuple[int, int]] = set()
    chosen: list[SunletBlock] = []

    def add(a, b):
        return ((a[0] + b[0]) % m, (a[1] + b[1]) % n)

    def shuffled(seq):
        seq = list(seq)
        rng.shuffle(seq)
        return seq

    def neighbours(a, block_classes):
        for s in shuffled(steps):
            b = add(a, s)
            cl = _orbit_class(m, n, a, b)
            if cl not in used and cl not in block_classes:
                yield b, cl

    def blocks_from(first: tuple[int, int]) -> Iterator[SunletBlock]:
        kind, d = first
        delta = (d, 0) if kind == 0 else (0, d)
        origin = (0, 0)
        tip = delta
        # first edge on the cycle (c0 -> c1), or as the spoke of c0
        for role in shuffled(["cycle", "spoke"]):
            if role == "cycle":
                c0, c1 = origin, tip
                cls = {first}
                for c2, k2 in neighbours(c1, cls):
                    if c2 == c0:
                        continue
                    cls2 = cls | {k2}
                    for c3, k3 in neighbours(c2, cls2):
                        if c3 in (c0, c1):
                            continue
                        k4 = _orbit_class(m, n, c3, c0)
                        if k4 is None or k4 in used or k4 in cls2 or k4 == k3:
                            continue
                        yield from _pendants((c0, c1, c2, c3), {}, cls2 | {k3, k4})
            else:
                c0 = origin
                cls = {first}
                for c1, k1 in neighbours(c0, cls):
                    if c1 == tip:
                        continue
                    for c2, k2 in neighbours(c1, cls | {k1}):
                        if c2 in (c0, tip):
                            continue
                        for c3, k3 in neighbours(c2, cls | {k1, k2}):
                            if c3 in (c0, c1, tip):
                                continue
                            k4 = _orbit_class(m, n, c3, c0)
                            if k4 is None or k4 in used or k4 in cls | {k1, k2, k3}:
                                continue
                            yield from _pendants((c0, c1, c2, c3), {0: tip}, cls | {k1, k2, k3, k4})

    def _pendants(cyc, fixed, cls) -> Iterator[SunletBlock]:
        pend = [fixed.get(i) for i in range(4)]
        taken = set(cyc) | {p for p in pend if p is not None}

        def rec(i, cls):
            if i == 4:
                yield SunletBlock(
                    tuple(Vertex(*c) for c in cyc), tuple(Vertex(*p) for p in pend)
                ), cls
                return
            if pend[i] is not None:
                yield from rec(i + 1, cls)
                return
            for p, kp in neighbours(cyc[i], cls):
                if p in taken:
                    continue
                pend[i] = p
                taken.add(p)
                yield from rec(i + 1, cls | {kp})
                taken.discard(p)
                pend[i] = None

        for blk, cls_final in rec(0, cls):
            yield blk, cls_final

    def dfs() -> bool:
        if len(chosen) == k:
            return True
        stats.nodes += 1
        if time.monotonic() > deadline:
            return False
        first = next(c for c in classes if c not in used)
        for blk, cls in blocks_from(first):
            stats.blocks_tried += 1
            if stats.blocks_tried & 1023 == 0 and time.monotonic() > deadline:
                return False
            used.update(cls)
            chosen.append(blk)
            if dfs():
                return True
            chosen.pop()
            used.difference_update(cls)
        return False

    ok = dfs()
    stats.wall_time = time.monotonic() - t0
    return (list(chosen) if ok else None), stats


def develop(m: int, n: int, base: list[SunletBlock]) -> list[SunletBlock]:
    """All translates of the base blocks, in a fixed order."""
    out = []
    for blk in base:
        for i in range(m):
            for j in range(n):
                out.append(blk.map(lambda v: Vertex((v.row + i) % m, (v.col + j) % n)))
    return out


def host_for(m: int, n: int) -> GraphSpec:
    if m == 1:
        return Complete(n)
    return CartesianComplete(m, n)


def cyclic_search(m: int, n: int, seed: int = 0, time_budget: float = 60.0) -> SearchOutcome:
    """Decompose K_m x K_n (K_n when m == 1) from cyclically developed base blocks."""
    base, stats = find_base_blocks(m, n, seed=seed, time_budget=time_budget)
    if base is None:
        return SearchOutcome("timeout", None, stats)
    blocks = develop(m, n, base)
    if m == 1:
        blocks = [b.map(lambda v: Vertex(v.col, 0)) for b in blocks]
    d = Decomposition(host_for(m, n), tuple(blocks))
    rep = verify(d)
    if not rep.valid:
        raise SearchError(f"cyclic development failed verification: {rep.summary()}")
    return SearchOutcome("found", d, stats)
