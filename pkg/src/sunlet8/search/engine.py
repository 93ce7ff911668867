"""Backtracking exact cover of a graph's edges by L8 copies.

The cover matrix is never built: blocks through the branching edge are
generated lazily from the adjacency of the still-uncovered edges.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Literal, Optional, Sequence

from ..graphs import (
    CartesianComplete,
    Complete,
    CompleteBipartite,
    Edge,
    EdgeSet,
    GraphSpec,
    Vertex,
    describe,
    edge_count,
    edge_list,
)
from ..sunlet import SunletBlock
from ..verify import Decomposition, verify

DEFAULT_CEILING = 2000

Mode = Literal["find-one", "prove-exhaustive"]


class SearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    time_budget: float = 60.0
    seed: int = 0
    restart_policy: Literal["none", "luby-scaled"] = "none"
    symmetry_breaking: bool = True
    mode: Mode = "find-one"
    ceiling: int = DEFAULT_CEILING
    # nodes per Luby unit when restarting
    restart_unit: int = 2000

    def __post_init__(self) -> None:
        if self.time_budget <= 0:
            raise ValueError("time_budget must be positive")
        if self.restart_policy not in ("none", "luby-scaled"):
            raise ValueError(f"unknown restart policy {self.restart_policy!r}")
        if self.mode not in ("find-one", "prove-exhaustive"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class SearchStats:
    nodes: int = 0
    blocks_tried: int = 0
    restarts: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "blocks_tried": self.blocks_tried,
            "restarts": self.restarts,
            "wall_time": round(self.wall_time, 3),
        }


@dataclass
class SearchOutcome:
    result: Literal["found", "infeasible-proven", "timeout"]
    decomposition: Optional[Decomposition] = None
    stats: SearchStats = field(default_factory=SearchStats)
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.result == "found"


class _Timeout(Exception):
    pass


class _NodeLimit(Exception):
    pass


def luby(i: int) -> int:
    """i-th term (1-based) of the Luby sequence 1,1,2,1,1,2,4,..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


# --------------------------------------------------------------------------
# Block enumeration over an adjacency structure of available edges
# --------------------------------------------------------------------------


def _pendant_choices(
    adj: Sequence[set[int]], cyc: tuple[int, ...], fixed: dict[int, int], order: Callable
) -> Iterator[tuple[int, int, int, int]]:
    """All injective pendant assignments for cycle ``cyc`` (``fixed`` pins some)."""
    cset = set(cyc)
    banned = cset | set(fixed.values())
    opts = []
    for c in cyc:
        if c in fixed:
            opts.append(None)
        else:
            cand = [w for w in order(adj[c]) if w not in banned]
            if not cand:
                return
            opts.append(cand)
    p = [fixed.get(c, -1) for c in cyc]

    def rec(i: int, used: set[int]) -> Iterator[tuple[int, int, int, int]]:
        if i == 4:
            yield (p[0], p[1], p[2], p[3])
            return
        if opts[i] is None:
            yield from rec(i + 1, used)
            return
        for w in opts[i]:
            if w in used:
                continue
            p[i] = w
            used.add(w)
            yield from rec(i + 1, used)
            used.discard(w)

    yield from rec(0, set())


def blocks_through(
    adj: Sequence[set[int]], u: int, v: int, order: Callable = sorted
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every L8 (as (cycle, pendants) int tuples) using edge uv, each once.

    ``adj`` holds only available edges.  ``order`` fixes iteration order of
    neighbour sets (sorted for determinism, shuffled for randomised search).
    """
    # uv on the cycle: u -> v -> w -> x -> u
    for w in order(adj[v]):
        if w == u:
            continue
        for x in order(adj[u] & adj[w]):
            if x == v:
                continue
            cyc = (u, v, w, x)
            for pend in _pendant_choices(adj, cyc, {}, order):
                yield cyc, pend
    # uv as a spoke: c on the cycle, p its pendant
    for c, p in ((u, v), (v, u)):
        nc = [a for a in order(adj[c]) if a != p]
        for a in nc:
            for d in nc:
                if d <= a:
                    continue
                for b in order(adj[a] & adj[d]):
                    if b == c or b == p:
                        continue
                    cyc = (c, a, b, d)
                    for pend in _pendant_choices(adj, cyc, {c: p}, order):
                        yield cyc, pend


# --------------------------------------------------------------------------
# Symmetry breaking at the root
# --------------------------------------------------------------------------


def _root_canonicalizer(host: GraphSpec, verts: list[Vertex], u: int, v: int):
    """Map a block to a label under automorphisms of ``host`` fixing u and v.

    Returns ``None`` when no symmetry is known for the host.
    """
    U, V = verts[u], verts[v]
    if isinstance(host, (Complete, CompleteBipartite)):
        if isinstance(host, Complete):
            classes = {w: 0 for w in range(len(verts))}
        else:
            classes = {w: int(verts[w].row < host.left) for w in range(len(verts))}
        fixed = {u: (-1, 0), v: (-1, 1)}

        def relabel(seq):
            seen: dict[int, tuple] = {}
            counters: dict[int, int] = {}
            out = []
            for w in seq:
                if w in fixed:
                    out.append(fixed[w])
                    continue
                if w not in seen:
                    k = classes[w]
                    counters[k] = counters.get(k, 0) + 1
                    seen[w] = (k, counters[k])
                out.append(seen[w])
            return tuple(out)

    elif isinstance(host, CartesianComplete) and U.row == V.row:
        # rows other than U.row interchangeable; columns other than U.col, V.col too
        def relabel(seq):
            rows: dict[int, int] = {U.row: -1}
            cols: dict[int, int] = {U.col: -2, V.col: -1}
            out = []
            for w in seq:
                r, c = verts[w]
                if r not in rows:
                    rows[r] = len(rows)
                if c not in cols:
                    cols[c] = len(cols)
                out.append((rows[r], cols[c]))
            return tuple(out)

    else:
        return None

    def key(cyc, pend):
        best = None
        for s in range(4):
            for sign in (1, -1):
                idx = [(s + sign * i) % 4 for i in range(4)]
                seq = [cyc[i] for i in idx] + [pend[i] for i in idx]
                lab = relabel(seq)
                if best is None or lab < best:
                    best = lab
        return best

    return key


# --------------------------------------------------------------------------
# The engine
# --------------------------------------------------------------------------


class _Engine:
    def __init__(self, edges: list[Edge], cfg: SearchConfig, host: GraphSpec, deadline: float):
        self.cfg = cfg
        self.host = host
        self.verts = sorted({w for e in edges for w in e})
        index = {w: i for i, w in enumerate(self.verts)}
        self.edges = sorted((index[a], index[b]) for a, b in edges)
        self.adj: list[set[int]] = [set() for _ in self.verts]
        for a, b in self.edges:
            self.adj[a].add(b)
            self.adj[b].add(a)
        self.remaining = len(self.edges)
        self.deadline = deadline
        self.stats = SearchStats()
        self.chosen: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        self.node_limit: Optional[int] = None
        self.rng: Optional[random.Random] = None

    # -- helpers
    def _order(self, s):
        if self.rng is None:
            return sorted(s)
        lst = list(s)
        self.rng.shuffle(lst)
        return lst

    def _place(self, cyc, pend):
        adj = self.adj
        for i in range(4):
            a, b = cyc[i], cyc[(i + 1) % 4]
            adj[a].discard(b)
            adj[b].discard(a)
            a, b = cyc[i], pend[i]
            adj[a].discard(b)
            adj[b].discard(a)
        self.remaining -= 8

    def _unplace(self, cyc, pend):
        adj = self.adj
        for i in range(4):
            a, b = cyc[i], cyc[(i + 1) % 4]
            adj[a].add(b)
            adj[b].add(a)
            a, b = cyc[i], pend[i]
            adj[a].add(b)
            adj[b].add(a)
        self.remaining += 8

    def _stranded(self, cyc, pend) -> bool:
        """True if some uncovered edge now joins two vertices of degree < 3.

        Such an edge can be neither a cycle edge nor a spoke of any block.
        """
        adj = self.adj
        for w in cyc + pend:
            s = adj[w]
            if 0 < len(s) < 3:
                for x in s:
                    if len(adj[x]) < 3:
                        return True
        return False

    def _tick(self):
        st = self.stats
        st.nodes += 1
        if st.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _Timeout
        if self.node_limit is not None and st.nodes > self.node_limit:
            raise _NodeLimit

    def _pick_lowest(self, ptr: int) -> tuple[int, int, int]:
        edges, adj = self.edges, self.adj
        while True:
            a, b = edges[ptr]
            if b in adj[a]:
                return ptr, a, b
            ptr += 1

    def _pick_heuristic(self) -> tuple[int, int]:
        # fewest remaining edges at a vertex, then its lowest-degree neighbour
        adj = self.adj
        best, bd = -1, 1 << 30
        for w, s in enumerate(adj):
            d = len(s)
            if 0 < d < bd:
                best, bd = w, d
                if d == 1:
                    break
        nb = min(adj[best], key=lambda x: (len(adj[x]), x))
        return best, nb

    # -- DFS
    def dfs(self, ptr: int, root: bool) -> bool:
        if self.remaining == 0:
            return True
        self._tick()
        if self.cfg.mode == "prove-exhaustive":
            ptr, u, v = self._pick_lowest(ptr)
        else:
            u, v = self._pick_heuristic()
        seen_keys = set()
        key = None
        if root and self.cfg.symmetry_breaking:
            key = _root_canonicalizer(self.host, self.verts, u, v)
        for cyc, pend in blocks_through(self.adj, u, v, self._order):
            self.stats.blocks_tried += 1
            if key is not None:
                k = key(cyc, pend)
                if k in seen_keys:
                    continue
                seen_keys.add(k)
            self._place(cyc, pend)
            if self._stranded(cyc, pend):
                self._unplace(cyc, pend)
                continue
            self.chosen.append((cyc, pend))
            if self.dfs(ptr, False):
                return True
            self.chosen.pop()
            self._unplace(cyc, pend)
        return False

    def blocks(self) -> list[SunletBlock]:
        vs = self.verts
        return [
            SunletBlock(tuple(vs[i] for i in cyc), tuple(vs[i] for i in pend))
            for cyc, pend in self.chosen
        ]


def search_edges(edges: Sequence[Edge], cfg: SearchConfig, host: Optional[GraphSpec] = None) -> SearchOutcome:
    """Search an L8-decomposition of an explicit edge list."""
    edges = list(edges)
    if host is None:
        host = EdgeSet(tuple(edges))
    t0 = time.monotonic()
    deadline = t0 + cfg.time_budget
    if len(edges) % 8:
        return SearchOutcome("infeasible-proven", reason=f"{len(edges)} edges, not a multiple of 8")
    if not edges:
        return SearchOutcome("found", Decomposition(host, ()))
    eng = _Engine(edges, cfg, host, deadline)
    result = None
    try:
        if cfg.mode == "prove-exhaustive" or cfg.restart_policy == "none":
            if cfg.mode == "find-one" and cfg.seed:
                eng.rng = random.Random(cfg.seed)
            ok = eng.dfs(0, True)
            result = "found" if ok else "infeasible-proven"
        else:
            run = 0
            while True:
                run += 1
                eng.rng = random.Random((cfg.seed << 20) + run)
                eng.node_limit = eng.stats.nodes + cfg.restart_unit * luby(run)
                try:
                    ok = eng.dfs(0, True)
                except _NodeLimit:
                    eng.stats.restarts += 1
                    eng.chosen.clear()
                    eng.adj = [set() for _ in eng.verts]
                    for a, b in eng.edges:
                        eng.adj[a].add(b)
                        eng.adj[b].add(a)
                    eng.remaining = len(eng.edges)
                    continue
                result = "found" if ok else "infeasible-proven"
                break
    except _Timeout:
        result = "timeout"
    eng.stats.wall_time = time.monotonic() - t0
    if result == "found":
        d = Decomposition(host, tuple(eng.blocks()))
        rep = verify(d)
        if not rep.valid:
            raise SearchError(f"engine produced an invalid cover: {rep.summary()}")
        return SearchOutcome("found", d, eng.stats)
    return SearchOutcome(result, None, eng.stats)


def search(host: GraphSpec, cfg: SearchConfig = SearchConfig()) -> SearchOutcome:
    """Find an L8-decomposition of ``host`` or prove there is none."""
    e = edge_count(host)
    if e > cfg.ceiling:
        raise SearchError(
            f"{describe(host)} has {e} edges, above the search ceiling {cfg.ceiling}; use the composer"
        )
    if e % 8:
        return SearchOutcome("infeasible-proven", reason=f"{e} edges, not a multiple of 8")
    return search_edges(edge_list(host), cfg, host)


def enumerate_blocks_through(edge: Edge, available: Sequence[Edge]) -> Iterator[SunletBlock]:
    """Every L8 whose edges lie in ``available`` and include ``edge``, once each."""
    verts = sorted({w for e in available for w in e})
    index = {w: i for i, w in enumerate(verts)}
    adj: list[set[int]] = [set() for _ in verts]
    for a, b in available:
        adj[index[a]].add(index[b])
        adj[index[b]].add(index[a])
    a, b = edge
    if a not in index or b not in index or index[b] not in adj[index[a]]:
        raise ValueError(f"{a}-{b} is not an available edge")
    for cyc, pend in blocks_through(adj, index[a], index[b]):
        yield SunletBlock(tuple(verts[i] for i in cyc), tuple(verts[i] for i in pend))
