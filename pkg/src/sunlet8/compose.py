"""Constructive L8-decompositions of K_m x K_n by splitting the host into pieces.

The host's rows and columns are cut into contiguous groups.  With row groups
R_1..R_p and column groups C_1..C_q the edge set splits into

* cells K_|R| x K_|C| on every R x C,
* in-column bipartite pieces K_{|R|,|R'|} between two row groups, one per column,
* in-row bipartite pieces K_{|C|,|C'|} between two column groups, one per row.

Each case of :mod:`sunlet8.feasibility` picks group sizes whose cells and
bipartite pieces are already known to decompose (from the corpus, from a
smaller plan, or from the complete/bipartite providers).  Piece counts are
whatever the grouping produces.

A :class:`PlanNode` places its own local host inside its parent's local host;
the root's parent is itself.  Subtrees for equal local hosts are shared, and
:func:`materialize` decomposes each distinct subtree once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .corpus import lookup
from .feasibility import classify
from .graphs import (
    CartesianComplete,
    Complete,
    CompleteBipartite,
    CompleteMinusClique,
    GraphSpec,
    Region,
    Vertex,
    describe,
    edge_count,
    grid_map,
)
from .search.engine import DEFAULT_CEILING, SearchConfig, search
from .sunlet import SunletBlock
from .verify import Decomposition, VerificationReport, verify

RULES = (
    "lemma-2.2",
    "lemma-2.3",
    "lemma-2.4",
    "lemma-2.5",
    "lemma-2.6",
    "lemma-2.7",
    "lemma-2.8",
    "lemma-2.9",
    "supplement-4x2",
    "complete-split",
    "bipartite-split",
    "complete-16p1",
    "lemma-2.6-cell",
    "transpose",
    "base-corpus",
    "base-search",
)


class PlanningError(ValueError):
    pass


class InfeasibleError(PlanningError):
    pass


class InfeasibleBrickError(PlanningError):
    pass


class MaterializationError(RuntimeError):
    pass


class CompositionBugError(RuntimeError):
    def __init__(self, message: str, report: Optional[VerificationReport] = None) -> None:
        super().__init__(message)
        self.report = report


@dataclass(frozen=True, eq=False)
class PlanNode:
    rule: str
    region: Region
    children: tuple["PlanNode", ...] = ()
    # corpus id for base-corpus leaves
    source: str = ""

    @property
    def local(self) -> GraphSpec:
        return self.region.local

    def is_leaf(self) -> bool:
        return self.rule in ("base-corpus", "base-search")

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def leaves(self) -> list["PlanNode"]:
        return [n for n in self.walk() if n.is_leaf()]

    def summary(self) -> dict[str, int]:
        """Count of pieces by (rule, local host) over the whole tree."""
        out: dict[str, int] = {}
        for n in self.walk():
            key = f"{n.rule} {describe(n.local)}"
            out[key] = out.get(key, 0) + 1
        return out


def _identity(v: Vertex) -> Vertex:
    return v


def _root(rule: str, host: GraphSpec, children: Sequence[PlanNode] = (), source: str = "") -> PlanNode:
    node = PlanNode(rule, Region(host, host, _identity, describe(host)), tuple(children), source)
    _check_conservation(node)
    return node


def _place(node: PlanNode, parent: GraphSpec, vmap: Callable[[Vertex], Vertex], label: str) -> PlanNode:
    return PlanNode(node.rule, Region(parent, node.local, vmap, label), node.children, node.source)


def _check_conservation(node: PlanNode) -> None:
    if not node.children:
        return
    total = sum(edge_count(c.local) for c in node.children)
    want = edge_count(node.local)
    if total != want:
        raise CompositionBugError(
            f"{node.rule} on {describe(node.local)}: children hold {total} edges, host has {want}"
        )


# --------------------------------------------------------------------------
# Leaves
# --------------------------------------------------------------------------


def _leaf(host: GraphSpec) -> Optional[PlanNode]:
    entry = lookup(host)
    if entry is not None:
        return _root("base-corpus", host, source=entry.id)
    return None


# --------------------------------------------------------------------------
# Complete graphs
# --------------------------------------------------------------------------


def _complete_map(idx: Sequence[int]) -> Callable[[Vertex], Vertex]:
    idx = tuple(idx)
    return lambda v: Vertex(idx[v.row], 0)


def _bip_map(left: Sequence[int], right: Sequence[int]) -> Callable[[Vertex], Vertex]:
    both = tuple(left) + tuple(right)
    return lambda v: Vertex(both[v.row], 0)


@lru_cache(maxsize=None)
def complete_plan(order: int) -> PlanNode:
    host = Complete(order)
    if order == 1:
        return _root("complete-split", host)
    leaf = _leaf(host)
    if leaf is not None:
        return leaf
    if order % 16 == 1 and order > 17:
        # K_{16p+1} = K_{16(p-1)+1} + K_17 (sharing one vertex) + (p-1) K_{16,16}
        p = order // 16
        old = list(range(16 * (p - 1) + 1))
        new = list(range(16 * (p - 1), order))
        kids = [
            _place(complete_plan(len(old)), host, _complete_map(old), "old"),
            _place(complete_plan(17), host, _complete_map(new), "new"),
        ]
        fresh = new[1:]
        for g in range(p - 1):
            grp = list(range(16 * g, 16 * g + 16))
            kids.append(_place(bipartite_plan(16, 16), host, _bip_map(grp, fresh), f"bip{g}"))
        return _root("complete-16p1", host, kids)
    if order % 16 == 0 and order > 16:
        s = order // 16
        groups = [list(range(16 * g, 16 * g + 16)) for g in range(s)]
        kids = [_place(complete_plan(16), host, _complete_map(g), f"k16#{i}") for i, g in enumerate(groups)]
        for i in range(s):
            for j in range(i + 1, s):
                kids.append(_place(bipartite_plan(16, 16), host, _bip_map(groups[i], groups[j]), f"b{i}{j}"))
        return _root("complete-split", host, kids)
    raise PlanningError(f"no construction for K{order}")


def complete_provider(order: int) -> Decomposition:
    return materialize(complete_plan(order))


# --------------------------------------------------------------------------
# Complete bipartite graphs
# --------------------------------------------------------------------------


def bipartite_feasible(a: int, b: int) -> bool:
    """Whether K_{a,b} has an L8-decomposition."""
    if a * b == 0:
        return True
    if (a * b) % 8 or min(a, b) < 4:
        return False
    lo, hi = sorted((a, b))
    # A 4-cycle takes two vertices from each side, so side a carries ab/4
    # cycle slots while a vertex of degree b sits on at most b // 3 cycles.
    # This rules out lo == 5 for every hi, not only hi == 8.
    if a * (b // 3) < a * b / 4 or b * (a // 3) < a * b / 4:
        return False
    if lo == 4 and hi % 4 == 2:
        return False
    return True


@lru_cache(maxsize=None)
def bipartite_plan(a: int, b: int) -> PlanNode:
    host = CompleteBipartite(a, b)
    if a * b == 0:
        return _root("bipartite-split", host)
    if not bipartite_feasible(a, b):
        raise InfeasibleBrickError(f"K{a},{b} has no L8-decomposition")
    leaf = _leaf(host)
    if leaf is not None:
        return leaf
    swapped = lookup(CompleteBipartite(b, a))
    if swapped is not None:
        inner = _root("base-corpus", CompleteBipartite(b, a), source=swapped.id)
        # local (b, a) vertex i < b is on our right side
        vmap = lambda v: Vertex(a + v.row if v.row < b else v.row - b, 0)
        return _root("bipartite-split", host, [_place(inner, host, vmap, "swap")])
    # cut the larger side into pieces whose halves both decompose
    for side in sorted((0, 1), key=lambda s: -(a, b)[s]):
        n, other = (a, b)[side], (b, a)[side]
        for x in _cuts(n):
            y = n - x
            if bipartite_feasible(x, other) and bipartite_feasible(y, other):
                return _root("bipartite-split", host, _bip_children(host, a, b, side, x))
    raise PlanningError(f"no construction for K{a},{b}")


def _cuts(n: int) -> list[int]:
    return [x for x in (8, 16, 4, 12) if 4 <= x <= n - 4]


def _bip_children(host, a, b, side, x) -> list[PlanNode]:
    left, right = list(range(a)), list(range(a, a + b))
    if side == 0:
        parts = [(left[:x], right), (left[x:], right)]
    else:
        parts = [(left, right[:x]), (left, right[x:])]
    return [
        _place(bipartite_plan(len(l), len(r)), host, _bip_map(l, r), f"part{i}")
        for i, (l, r) in enumerate(parts)
    ]


def bipartite_provider(a: int, b: int) -> Decomposition:
    return materialize(bipartite_plan(a, b))


# --------------------------------------------------------------------------
# Products
# --------------------------------------------------------------------------


def _groups(sizes: Sequence[int]) -> list[list[int]]:
    out, at = [], 0
    for s in sizes:
        out.append(list(range(at, at + s)))
        at += s
    return out


def _fill(total: int, unit: int, last: int) -> list[int]:
    """``unit``-sized groups followed by one group of size ``last``."""
    k, r = divmod(total - last, unit)
    if r or k < 0:
        raise PlanningError(f"cannot cut {total} into {unit}s plus {last}")
    return [unit] * k + ([last] if last else [])


def grid_children(host: CartesianComplete, rows: Sequence[int], cols: Sequence[int]) -> list[PlanNode]:
    """Cells, in-column and in-row bipartite pieces for the given group sizes."""
    R, C = _groups(rows), _groups(cols)
    kids = []
    for gi, rg in enumerate(R):
        for gj, cg in enumerate(C):
            kids.append(_place(product_plan(len(rg), len(cg)), host, grid_map(rg, cg), f"cell{gi},{gj}"))
    for i in range(len(R)):
        for j in range(i + 1, len(R)):
            sub = bipartite_plan(len(R[i]), len(R[j]))
            for c in range(host.n):
                kids.append(_place(sub, host, _col_bip(R[i], R[j], c), f"colbip{i},{j}@{c}"))
    for i in range(len(C)):
        for j in range(i + 1, len(C)):
            sub = bipartite_plan(len(C[i]), len(C[j]))
            for r in range(host.m):
                kids.append(_place(sub, host, _row_bip(C[i], C[j], r), f"rowbip{i},{j}@{r}"))
    return kids


def _col_bip(r1, r2, c):
    both = tuple(r1) + tuple(r2)
    return lambda v: Vertex(both[v.row], c)


def _row_bip(c1, c2, r):
    both = tuple(c1) + tuple(c2)
    return lambda v: Vertex(r, both[v.row])


def _col_clique(rows, c):
    rows = tuple(rows)
    return lambda v: Vertex(rows[v.row], c)


def _row_clique(cols, r):
    cols = tuple(cols)
    return lambda v: Vertex(r, cols[v.row])


def _transposed(inner: PlanNode, host: CartesianComplete) -> PlanNode:
    return _root("transpose", host, [_place(inner, host, lambda v: Vertex(v.col, v.row), "T")])


def _col_groups_case2(n: int) -> list[int]:
    if n == 2:
        return [2]
    return _fill(n, 8, {2: 10, 6: 6, 0: 0, 4: 4}[n % 8])


def _col_groups_case3(n: int) -> list[int]:
    r = n % 8
    if n < 8:
        return [n]
    return _fill(n, 8, {1: 9, 3: 11, 5: 13, 7: 7, 0: 0}[r])


def _tail16(n: int, last: int) -> list[int]:
    return _fill(n, 16, last)


def _triangle_free_k19():
    from .corpus import by_host

    for spec, entry in sorted(by_host().items(), key=lambda kv: kv[1].id):
        if isinstance(spec, CompleteMinusClique) and spec.order == 19 and len(spec.clique) == 3:
            return entry
    raise PlanningError("corpus lacks K19 minus a triangle")


def lemma26_cell() -> PlanNode:
    """K_16 x K_19: each row as K_19 minus a triangle on the last three columns,
    the triangles with the last three columns' vertical edges as K_16 x K_3, and
    the first 16 columns' vertical edges as copies of K_16."""
    host = CartesianComplete(16, 19)
    kmc = _triangle_free_k19()
    # send the removed triangle to the last three columns
    order = [x for x in range(19) if x not in kmc.host.clique] + list(kmc.host.clique)
    col_of = {x: i for i, x in enumerate(order)}
    kids = []
    row_piece = _root("base-corpus", kmc.host, source=kmc.id)
    for r in range(16):
        kids.append(_place(row_piece, host, lambda v, r=r: Vertex(r, col_of[v.row]), f"row{r}"))
    kids.append(
        _place(product_plan(16, 3), host, grid_map(range(16), range(16, 19)), "k16xk3")
    )
    k16 = complete_plan(16)
    for c in range(16):
        kids.append(_place(k16, host, _col_clique(range(16), c), f"col{c}"))
    return _root("lemma-2.6-cell", host, kids)


def lemma26_split(s: int, t: int) -> PlanNode:
    """Plan for K_{16s+15} x K_{16t+3}."""
    if s < 0 or t < 0:
        raise PlanningError("s and t must be non-negative")
    m, n = 16 * s + 15, 16 * t + 3
    host = CartesianComplete(m, n)
    leaf = _leaf(host)
    if leaf is not None:
        return leaf
    rows = _tail16(m, 15)
    cols = [3] if t == 0 else _tail16(n, 19)
    return _root("lemma-2.6", host, grid_children(host, rows, cols))


@lru_cache(maxsize=None)
def product_plan(m: int, n: int) -> PlanNode:
    """Plan for K_m x K_n; raises for infeasible pairs."""
    host = CartesianComplete(m, n)
    if m * n == 0:
        raise PlanningError("empty factor")
    v = classify(m, n)
    if not v.feasible:
        raise InfeasibleError(v.describe())
    leaf = _leaf(host)
    if leaf is not None:
        return leaf
    if m == 1 or n == 1:
        k = complete_plan(max(m, n))
        if m == 1:
            vmap = lambda w: Vertex(0, w.row)
        else:
            vmap = lambda w: Vertex(w.row, 0)
        return _root(v.chosen_route, host, [_place(k, host, vmap, "line")])
    if lookup(CartesianComplete(n, m)) is not None or v.oriented != (m, n):
        return _transposed(product_plan(n, m), host)
    if (m, n) == (16, 19):
        return lemma26_cell()
    rule = v.chosen_route
    case = min(v.satisfied_cases)
    if case == 1:
        return _root(rule, host, grid_children(host, [4] * (m // 4), [4] * (n // 4)))
    if case == 2:
        return _root(rule, host, grid_children(host, [8] * (m // 8), _col_groups_case2(n)))
    if case == 3:
        return _root(rule, host, grid_children(host, [16] * (m // 16), _col_groups_case3(n)))
    if case == 4:
        kids = []
        col_k, row_k = complete_plan(m), complete_plan(n)
        for c in range(n):
            kids.append(_place(col_k, host, _col_clique(range(m), c), f"col{c}"))
        for r in range(m):
            kids.append(_place(row_k, host, _row_clique(range(n), r), f"row{r}"))
        return _root(rule, host, kids)
    if case == 5:
        return lemma26_split(m // 16, n // 16)
    if case == 6:
        # K_{16,5} does not decompose, so the 5 columns ride along with 16 more
        cols = [5] if n == 5 else _tail16(n, 21)
        return _root(rule, host, grid_children(host, _tail16(m, 13), cols))
    if case == 7:
        return _root(rule, host, grid_children(host, _tail16(m, 11), _tail16(n, 7)))
    if case == 8:
        return _root(rule, host, grid_children(host, _tail16(m, 9), _tail16(n, 9)))
    if case == 9:
        rows = _fill(m, 8, 4)
        cols = [n] if n < 8 else _fill(n, 8, {2: 10, 6: 6}[n % 8])
        if (m, n) == (rows[0], cols[0]):
            raise PlanningError(f"K{m} x K{n} needs a base decomposition in the corpus")
        return _root(rule, host, grid_children(host, rows, cols))
    raise PlanningError(f"no route for case {case}")


def plan(m: int, n: int) -> PlanNode:
    if m < 1 or n < 1:
        raise PlanningError(f"factors must be >= 1, got ({m}, {n})")
    if m == 1 and n == 1:
        return _root("base-corpus", CartesianComplete(1, 1))
    return product_plan(m, n)


# --------------------------------------------------------------------------
# Materialization
# --------------------------------------------------------------------------


def _leaf_blocks(node: PlanNode, cfg: SearchConfig) -> tuple[SunletBlock, ...]:
    if edge_count(node.local) == 0:
        return ()
    if node.rule == "base-corpus":
        entry = lookup(node.local)
        if entry is None:
            raise MaterializationError(f"corpus entry for {describe(node.local)} is missing")
        return entry.blocks
    if node.rule == "base-search":
        if edge_count(node.local) > DEFAULT_CEILING:
            raise MaterializationError(f"{describe(node.local)} exceeds the search ceiling")
        out = search(node.local, cfg)
        if not out.found:
            raise MaterializationError(f"search for {describe(node.local)} ended: {out.result}")
        return out.decomposition.blocks
    return ()


@dataclass
class _Materializer:
    cfg: SearchConfig
    cache: dict = field(default_factory=dict)

    def local(self, node: PlanNode) -> tuple[SunletBlock, ...]:
        key = (node.rule, node.local, node.source, id(node.children))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        if node.is_leaf() or not node.children:
            blocks = _leaf_blocks(node, self.cfg)
        else:
            _check_conservation(node)
            blocks = []
            for child in node.children:
                f = child.region.image
                blocks.extend(b.map(f) for b in self.local(child))
            blocks = tuple(blocks)
        rep = verify(Decomposition(node.local, blocks))
        if not rep.valid:
            raise CompositionBugError(
                f"{node.rule} on {describe(node.local)} does not verify: {rep.summary()}", rep
            )
        self.cache[key] = blocks
        return blocks


def materialize(node: PlanNode, cfg: Optional[SearchConfig] = None) -> Decomposition:
    """Blocks of ``node`` in the coordinates of its own host, verified."""
    m = _Materializer(cfg or SearchConfig(time_budget=60.0, restart_policy="luby-scaled"))
    return Decomposition(node.local, m.local(node))


def decompose(m: int, n: int, cfg: Optional[SearchConfig] = None) -> Decomposition:
    return materialize(plan(m, n), cfg)
