"""The sunlet graph of order eight: a 4-cycle with one pendant per cycle vertex."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, NamedTuple, Optional, Tuple

from .graphs import Edge, GraphSpec, Vertex, has_edge, has_vertex, make_edge


class InvalidBlockError(ValueError):
    pass


class NotASunlet(ValueError):
    """Raised by :func:`recognize_sunlet`; ``reason`` is a short code."""

    def __init__(self, reason: str, detail: str = "") -> None:
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


class SunletBlock(NamedTuple):
    """One L8 copy.  ``pendants[i]`` hangs off ``cycle[i]``; the cycle closes
    from ``cycle[3]`` back to ``cycle[0]``."""

    cycle: Tuple[Vertex, Vertex, Vertex, Vertex]
    pendants: Tuple[Vertex, Vertex, Vertex, Vertex]

    @classmethod
    def of(cls, cycle: Iterable, pendants: Iterable) -> "SunletBlock":
        return cls(tuple(Vertex(*v) for v in cycle), tuple(Vertex(*v) for v in pendants))

    def vertices(self) -> Tuple[Vertex, ...]:
        return self.cycle + self.pendants

    def map(self, f) -> "SunletBlock":
        return SunletBlock(tuple(f(v) for v in self.cycle), tuple(f(v) for v in self.pendants))


def block_edges(block: SunletBlock) -> list[Edge]:
    """The 8 edges: cycle edges first, then spokes, each canonically oriented."""
    c, p = block.cycle, block.pendants
    if len(c) != 4 or len(p) != 4:
        raise InvalidBlockError("a block needs 4 cycle vertices and 4 pendants")
    if len(set(c + p)) != 8:
        raise InvalidBlockError(f"repeated vertex in {format_block(block)}")
    return [make_edge(c[i], c[(i + 1) % 4]) for i in range(4)] + [
        make_edge(c[i], p[i]) for i in range(4)
    ]


def block_edges_unchecked(block: SunletBlock) -> list[Edge]:
    # hot path for the verifier and composer; caller guarantees distinctness
    c0, c1, c2, c3 = block.cycle
    p0, p1, p2, p3 = block.pendants
    pairs = ((c0, c1), (c1, c2), (c2, c3), (c3, c0), (c0, p0), (c1, p1), (c2, p2), (c3, p3))
    return [(a, b) if a < b else (b, a) for a, b in pairs]


def validate_block(block: SunletBlock, host: GraphSpec) -> Optional[str]:
    """``None`` if ``block`` is a valid L8 inside ``host``, else the first violation.

    Violation strings start with one of ``duplicate-vertex``,
    ``out-of-range``, ``non-host-edge``.
    """
    vs = block.vertices()
    if len(vs) != 8 or len(set(vs)) != 8:
        return f"duplicate-vertex in {format_block(block)}"
    for v in vs:
        if not has_vertex(host, v):
            return f"out-of-range vertex {v}"
    for e in block_edges_unchecked(block):
        if not has_edge(host, e):
            return f"non-host-edge {e[0]}-{e[1]}"
    return None


def canonical(block: SunletBlock) -> SunletBlock:
    """Representative of ``block`` under the 8 automorphisms of L8.

    The cycle starts at its smallest vertex and runs toward the smaller of
    that vertex's two cycle neighbours.
    """
    c, p = block.cycle, block.pendants
    k = min(range(4), key=lambda i: c[i])
    fwd, back = c[(k + 1) % 4], c[(k - 1) % 4]
    if fwd <= back:
        order = [(k + i) % 4 for i in range(4)]
    else:
        order = [(k - i) % 4 for i in range(4)]
    return SunletBlock(tuple(c[i] for i in order), tuple(p[i] for i in order))


def recognize_sunlet(edges: Iterable[Edge]) -> SunletBlock:
    """Recover the (canonical) block whose edge set is ``edges``.

    Raises :class:`NotASunlet` with reason ``edge-count``, ``degree-sequence``,
    ``not-c4`` or ``pendant-collision``.
    """
    es = {make_edge(a, b) for a, b in edges}
    if len(es) != 8:
        raise NotASunlet("edge-count", f"{len(es)} distinct edges")
    adj: dict[Vertex, set[Vertex]] = defaultdict(set)
    for a, b in es:
        adj[a].add(b)
        adj[b].add(a)
    degs = sorted(len(s) for s in adj.values())
    if degs != [1, 1, 1, 1, 3, 3, 3, 3]:
        raise NotASunlet("degree-sequence", str(degs))
    core = sorted(v for v, s in adj.items() if len(s) == 3)
    core_set = set(core)
    for v in core:
        if len(adj[v] & core_set) != 2:
            raise NotASunlet("not-c4", f"{v} has {len(adj[v] & core_set)} cycle neighbours")
    # four vertices, each with two neighbours among them: C4 (no two triangles on 4 vertices)
    start = core[0]
    cycle = [start, min(adj[start] & core_set)]
    while len(cycle) < 4:
        nxt = (adj[cycle[-1]] & core_set) - {cycle[-2]}
        cycle.append(next(iter(nxt)))
    if start not in adj[cycle[-1]]:
        raise NotASunlet("not-c4")
    pendants = []
    for v in cycle:
        (pv,) = adj[v] - core_set
        pendants.append(pv)
    if len(set(pendants)) != 4:
        raise NotASunlet("pendant-collision")
    return SunletBlock(tuple(cycle), tuple(pendants))


def format_block(block: SunletBlock) -> str:
    return " ".join(str(v) for v in block.cycle) + " | " + " ".join(str(v) for v in block.pendants)
