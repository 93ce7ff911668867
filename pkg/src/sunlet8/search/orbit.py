"""Exact cover by orbits of base blocks under a group of host automorphisms.

Pick an uncovered edge, try each block through it, and keep the block if its
orbit under the group covers every edge it touches exactly once.  Blocks with
a nontrivial stabiliser give short orbits, which is what lets this cover edge
orbits of odd length (e.g. the distance-5 edges of K_10 under Z_10).  The
search space is the base blocks only, so a host with a large group needs very
few levels.
"""

from __future__ import annotations

import random
import time
from typing import Callable, Optional, Sequence

from ..graphs import CartesianComplete, GraphSpec, Vertex, edge_list
from ..sunlet import SunletBlock
from ..verify import Decomposition, verify
from .engine import SearchError, SearchOutcome, SearchStats, _Timeout, blocks_through, luby

Perm = Callable[[Vertex], Vertex]


def column_rotation(m: int, n: int) -> Perm:
    return lambda v: Vertex(v.row, (v.col + 1) % n)


def row_rotation(m: int, n: int) -> Perm:
    return lambda v: Vertex((v.row + 1) % m, v.col)


def _closure(verts: list[Vertex], gens: Sequence[Perm]) -> list[tuple[int, ...]]:
    index = {v: i for i, v in enumerate(verts)}
    ident = tuple(range(len(verts)))
    gen_perms = [tuple(index[g(v)] for v in verts) for g in gens]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gen_perms:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)


def orbit_search(
    host: GraphSpec,
    generators: Sequence[Perm],
    time_budget: float = 60.0,
    seed: int = 0,
    restart_unit: int = 200,
) -> SearchOutcome:
    """Decompose ``host`` into whole orbits of blocks under the generated group."""
    edges = edge_list(host)
    verts = sorted({v for e in edges for v in e})
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    group = _closure(verts, generators)
    eset = {frozenset((index[a], index[b])) for a, b in edges}
    for p in group:
        for e in eset:
            if frozenset(p[x] for x in e) not in eset:
                raise SearchError("a generator is not an automorphism of the host")
    t0 = time.monotonic()
    deadline = t0 + time_budget
    stats = SearchStats()
    rng = random.Random(seed)

    def orbit(cyc, pend) -> Optional[tuple[list, set]]:
        images = {}
        for p in group:
            c = tuple(p[x] for x in cyc)
            q = tuple(p[x] for x in pend)
            key = frozenset(
                [frozenset((c[i], c[(i + 1) % 4])) for i in range(4)]
                + [frozenset((c[i], q[i])) for i in range(4)]
            )
            images.setdefault(key, (c, q))
        covered: set = set()
        for key in images:
            if covered & key:
                return None
            covered |= key
        return list(images.values()), covered

    def run(limit: Optional[int], shuffle: bool):
        left = set(eset)
        adj = [set() for _ in range(n)]
        for e in left:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        order = (lambda s: rng.sample(sorted(s), len(s))) if shuffle else sorted
        chosen: list = []
        budget = [limit]

        def rec() -> bool:
            stats.nodes += 1
            if stats.nodes & 63 == 0 and time.monotonic() > deadline:
                raise _Timeout
            if budget[0] is not None:
                budget[0] -= 1
                if budget[0] < 0:
                    raise _Restart
            if not left:
                return True
            e = min(left, key=lambda f: (len(adj[min(f)]) + len(adj[max(f)]), sorted(f)))
            u, v = sorted(e)
            for cyc, pend in blocks_through(adj, u, v, order):
                stats.blocks_tried += 1
                got = orbit(cyc, pend)
                if got is None or not got[1] <= left:
                    continue
                blocks, cov = got
                left.difference_update(cov)
                for f in cov:
                    a, b = tuple(f)
                    adj[a].discard(b)
                    adj[b].discard(a)
                chosen.append(blocks)
                if rec():
                    return True
                chosen.pop()
                left.update(cov)
                for f in cov:
                    a, b = tuple(f)
                    adj[a].add(b)
                    adj[b].add(a)
            return False

        return rec(), chosen

    attempt = 0
    try:
        while True:
            attempt += 1
            limit = restart_unit * luby(attempt)
            try:
                ok, chosen = run(limit, shuffle=attempt > 1)
            except _Restart:
                stats.restarts += 1
                continue
            if ok:
                break
            if attempt == 1:
                # the deterministic first pass ran to the end within its limit
                stats.wall_time = time.monotonic() - t0
                return SearchOutcome("timeout", None, stats, reason="no orbit cover exists under this group")
    except _Timeout:
        stats.wall_time = time.monotonic() - t0
        return SearchOutcome("timeout", None, stats)
    stats.wall_time = time.monotonic() - t0
    blocks = tuple(
        SunletBlock(tuple(verts[x] for x in c), tuple(verts[x] for x in q)) for orb in chosen for c, q in orb
    )
    d = Decomposition(host, blocks)
    rep = verify(d)
    if not rep.valid:
        raise SearchError(f"orbit search produced an invalid cover: {rep.summary()}")
    return SearchOutcome("found", d, stats)


class _Restart(Exception):
    pass


def rotation_search(m: int, n: int, time_budget: float = 60.0, seed: int = 0) -> SearchOutcome:
    """K_m x K_n as orbits under rotation of the columns."""
    return orbit_search(CartesianComplete(m, n), [column_rotation(m, n)], time_budget, seed)
