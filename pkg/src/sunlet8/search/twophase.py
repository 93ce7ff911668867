"""Cycles first, spokes second.

In an L8-decomposition every vertex v lies on some number c_v of the 4-cycles
and is a pendant p_v times, with 3 c_v + p_v = deg(v) and sum(c_v) = 4 * blocks.
When those equations pin c_v down (e.g. K_4 x K_6: every vertex has degree 8
and there are 12 blocks over 24 vertices, so c_v = 2 everywhere) it pays to
choose the cycles first: pick edge-disjoint 4-cycles meeting every vertex
exactly c_v times, then hand each cycle vertex one of the leftover edges as
its spoke.  The second phase is a small matching problem with the extra rule
that a block's four pendants are distinct and off its cycle.

Given an explicit target ``c`` this search is exhaustive over that target,
so running out of options proves nothing unless the target was forced.
"""

from __future__ import annotations

import time
from collections import defaultdict
from typing import Optional, Sequence

from ..graphs import Edge, GraphSpec, Vertex, edge_list
from ..sunlet import SunletBlock
from ..verify import Decomposition, verify
from .engine import SearchError, SearchOutcome, SearchStats, _Timeout


def forced_cycle_counts(edges: Sequence[Edge]) -> Optional[dict[Vertex, int]]:
    """c_v when the degree equations leave a single choice, else None."""
    deg: dict[Vertex, int] = defaultdict(int)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    slots = len(edges) // 2  # 4 cycle slots per 8 edges
    top = {v: d // 3 for v, d in deg.items()}
    if sum(top.values()) == slots:
        return top
    return None


def _max_slots(edges: Sequence[Edge]) -> int:
    deg: dict[Vertex, int] = defaultdict(int)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    return sum(d // 3 for d in deg.values())


def uniform_cycle_counts(edges: Sequence[Edge]) -> Optional[dict[Vertex, int]]:
    """Equal c_v on every vertex, when the numbers allow it."""
    verts = sorted({v for e in edges for v in e})
    slots = len(edges) // 2
    if not verts or slots % len(verts):
        return None
    c = slots // len(verts)
    deg: dict[Vertex, int] = defaultdict(int)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    if any(3 * c > d for d in deg.values()):
        return None
    return {v: c for v in verts}


def _four_cycles(n: int, adj: list[set[int]]) -> list[tuple[int, int, int, int]]:
    out = set()
    for a in range(n):
        for b in adj[a]:
            if b < a:
                continue
            for c in adj[b]:
                if c <= a:
                    continue
                for d in adj[c] & adj[a]:
                    if d <= a or d == b:
                        continue
                    # a is the minimum; orient toward the smaller neighbour
                    out.add((a, b, c, d) if b < d else (a, d, c, b))
    return sorted(out)


class _TwoPhase:
    def __init__(self, edges, counts, deadline):
        self.verts = sorted({v for e in edges for v in e})
        index = {v: i for i, v in enumerate(self.verts)}
        n = len(self.verts)
        self.adj = [set() for _ in range(n)]
        self.eid: dict[tuple[int, int], int] = {}
        for k, (a, b) in enumerate(edges):
            i, j = index[a], index[b]
            self.adj[i].add(j)
            self.adj[j].add(i)
            self.eid[(i, j)] = self.eid[(j, i)] = k
        self.n_edges = len(edges)
        self.need = len(edges) // 8
        self.slots = [counts.get(v, 0) for v in self.verts]
        self.cycles = _four_cycles(n, self.adj)
        self.cyc_edges = [
            frozenset(self.eid[(c[i], c[(i + 1) % 4])] for i in range(4)) for c in self.cycles
        ]
        self.through: list[list[int]] = [[] for _ in range(n)]
        for j, c in enumerate(self.cycles):
            for v in c:
                self.through[v].append(j)
        self.deadline = deadline
        self.stats = SearchStats()
        self.used: set[int] = set()
        self.chosen: list[int] = []
        self.result: Optional[list[SunletBlock]] = None

    def _tick(self):
        self.stats.nodes += 1
        if self.stats.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _Timeout

    def cycles_dfs(self, last: tuple[int, int]) -> bool:
        self._tick()
        if len(self.chosen) == self.need:
            return self.spokes()
        v = next((i for i, s in enumerate(self.slots) if s), None)
        if v is None:
            return False
        for j in self.through[v]:
            # cycles through the same pivot in increasing order only
            if last[0] == v and j <= last[1]:
                continue
            c = self.cycles[j]
            if any(self.slots[x] == 0 for x in c) or self.cyc_edges[j] & self.used:
                continue
            self.stats.blocks_tried += 1
            self.chosen.append(j)
            self.used |= self.cyc_edges[j]
            for x in c:
                self.slots[x] -= 1
            if self.cycles_dfs((v, j)):
                return True
            for x in c:
                self.slots[x] += 1
            self.used -= self.cyc_edges[j]
            self.chosen.pop()
        return False

    def spokes(self) -> bool:
        free_adj: list[list[tuple[int, int]]] = [[] for _ in self.verts]
        for (a, b), k in self.eid.items():
            if a < b and k not in self.used:
                free_adj[a].append((b, k))
                free_adj[b].append((a, k))
        slots = [(z, i) for z in range(len(self.chosen)) for i in range(4)]
        opts = []
        for z, i in slots:
            cyc = self.cycles[self.chosen[z]]
            opts.append([(u, k) for u, k in free_adj[cyc[i]] if u not in cyc])
        if any(not o for o in opts):
            return False
        taken: set[int] = set()
        pend: list[set[int]] = [set() for _ in self.chosen]
        pick: dict[int, int] = {}

        def rec() -> bool:
            self._tick()
            if len(pick) == len(slots):
                return True
            best, best_n = None, None
            for s in range(len(slots)):
                if s in pick:
                    continue
                z = slots[s][0]
                cnt = sum(1 for u, k in opts[s] if k not in taken and u not in pend[z])
                if best_n is None or cnt < best_n:
                    best, best_n = s, cnt
                    if cnt == 0:
                        return False
            z = slots[best][0]
            for u, k in opts[best]:
                if k in taken or u in pend[z]:
                    continue
                taken.add(k)
                pend[z].add(u)
                pick[best] = u
                if rec():
                    return True
                del pick[best]
                pend[z].discard(u)
                taken.discard(k)
            return False

        if not rec():
            return False
        blocks = []
        for z, j in enumerate(self.chosen):
            cyc = self.cycles[j]
            blocks.append(
                SunletBlock(
                    tuple(self.verts[v] for v in cyc),
                    tuple(self.verts[pick[slots.index((z, i))]] for i in range(4)),
                )
            )
        self.result = blocks
        return True


def two_phase_search(
    host: GraphSpec,
    time_budget: float = 60.0,
    counts: Optional[dict[Vertex, int]] = None,
) -> SearchOutcome:
    """Cycles-first search with per-vertex cycle counts ``counts``.

    Defaults to the forced counts when they exist, else to uniform counts.
    Returns ``infeasible-proven`` only when the counts were forced.
    """
    edges = edge_list(host)
    t0 = time.monotonic()
    if len(edges) % 8:
        return SearchOutcome("infeasible-proven", reason=f"{len(edges)} edges, not a multiple of 8")
    forced = forced_cycle_counts(edges)
    room = _max_slots(edges)
    if room < len(edges) // 2:
        return SearchOutcome(
            "infeasible-proven", reason=f"vertices can carry {room} cycle slots, {len(edges) // 2} needed"
        )
    if counts is None:
        counts = forced or uniform_cycle_counts(edges)
        if counts is None:
            raise SearchError("no cycle-count target; pass counts explicitly")
    eng = _TwoPhase(edges, counts, t0 + time_budget)
    try:
        ok = eng.cycles_dfs((-1, -1))
    except _Timeout:
        eng.stats.wall_time = time.monotonic() - t0
        return SearchOutcome("timeout", None, eng.stats)
    eng.stats.wall_time = time.monotonic() - t0
    if ok:
        d = Decomposition(host, tuple(eng.result))
        rep = verify(d)
        if not rep.valid:
            raise SearchError(f"two-phase search produced an invalid cover: {rep.summary()}")
        return SearchOutcome("found", d, eng.stats)
    if forced is not None and counts == forced:
        return SearchOutcome("infeasible-proven", None, eng.stats, reason="forced cycle counts exhausted")
    return SearchOutcome("timeout", None, eng.stats, reason="cycle-count target exhausted")
