"""Host graphs described symbolically, plus the canonical vertex/edge encoding.

Every vertex is a ``Vertex(row, col)``.  Product graphs use both coordinates;
plain complete graphs (and the other non-product variants) keep ``col == 0``
and carry the vertex index in ``row``.  ``CompleteBipartite(a, b)`` numbers its
left part ``0..a-1`` and its right part ``a..a+b-1``.

Edges are plain tuples ``(u, v)`` with ``u < v`` in the lexicographic order of
``(row, col)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Tuple, Union


class SpecError(ValueError):
    """Malformed graph description."""


class EmbeddingError(ValueError):
    """A local vertex has no image under a region's vertex map."""


class Vertex(NamedTuple):
    row: int
    col: int = 0

    def __str__(self) -> str:
        return f"{self.row},{self.col}"


Edge = Tuple[Vertex, Vertex]


def make_edge(a: Vertex, b: Vertex) -> Edge:
    if a == b:
        raise SpecError(f"loop at {a}")
    return (a, b) if a < b else (b, a)


# --------------------------------------------------------------------------
# GraphSpec variants
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Complete:
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise SpecError(f"complete graph order must be >= 1, got {self.order}")


@dataclass(frozen=True)
class CompleteBipartite:
    left: int
    right: int

    def __post_init__(self) -> None:
        if self.left < 1 or self.right < 1:
            raise SpecError(f"bipartite parts must be >= 1, got {self.left},{self.right}")


@dataclass(frozen=True)
class CartesianComplete:
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise SpecError(f"product factors must be >= 1, got {self.m},{self.n}")


@dataclass(frozen=True)
class CompleteMinusClique:
    order: int
    clique: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.order < 1:
            raise SpecError(f"order must be >= 1, got {self.order}")
        clique = tuple(sorted(set(self.clique)))
        if len(clique) != len(self.clique):
            raise SpecError(f"repeated clique vertex in {self.clique}")
        if len(clique) < 2:
            raise SpecError("removed clique needs at least 2 vertices")
        if clique[0] < 0 or clique[-1] >= self.order:
            raise SpecError(f"clique {self.clique} outside 0..{self.order - 1}")
        object.__setattr__(self, "clique", clique)


@dataclass(frozen=True)
class EdgeSet:
    """An explicit edge list; used for search residuals."""

    edges: Tuple[Edge, ...]

    def __post_init__(self) -> None:
        canon = tuple(sorted({make_edge(a, b) for a, b in self.edges}))
        if len(canon) != len(self.edges):
            raise SpecError("edge list contains duplicates")
        object.__setattr__(self, "edges", canon)


@dataclass(frozen=True)
class Region:
    """A local spec placed inside a parent host by an explicit vertex map.

    ``vertex_map`` sends each local vertex to a host vertex.  It is either a
    mapping or a callable; callables are how the composer expresses large
    index arithmetic without building dictionaries.
    """

    parent: "GraphSpec"
    local: "GraphSpec"
    vertex_map: Union[Mapping[Vertex, Vertex], Callable[[Vertex], Vertex]] = field(
        compare=False, hash=False
    )
    label: str = ""

    def image(self, v: Vertex) -> Vertex:
        vm = self.vertex_map
        if callable(vm):
            try:
                w = vm(v)
            except (KeyError, IndexError) as exc:
                raise EmbeddingError(f"{v} outside region domain") from exc
        else:
            try:
                w = vm[v]
            except KeyError as exc:
                raise EmbeddingError(f"{v} outside region domain") from exc
        return w


GraphSpec = Union[Complete, CompleteBipartite, CartesianComplete, CompleteMinusClique, EdgeSet, Region]


# --------------------------------------------------------------------------
# Vertex sets, membership, edge sets, counts
# --------------------------------------------------------------------------


def vertices(spec: GraphSpec) -> list[Vertex]:
    if isinstance(spec, Complete):
        return [Vertex(i, 0) for i in range(spec.order)]
    if isinstance(spec, CompleteMinusClique):
        return [Vertex(i, 0) for i in range(spec.order)]
    if isinstance(spec, CompleteBipartite):
        return [Vertex(i, 0) for i in range(spec.left + spec.right)]
    if isinstance(spec, CartesianComplete):
        return [Vertex(i, j) for i in range(spec.m) for j in range(spec.n)]
    if isinstance(spec, EdgeSet):
        return sorted({v for e in spec.edges for v in e})
    if isinstance(spec, Region):
        return sorted(spec.image(v) for v in vertices(spec.local))
    raise SpecError(f"unknown spec {spec!r}")


def has_vertex(spec: GraphSpec, v: Vertex) -> bool:
    r, c = v
    if isinstance(spec, (Complete, CompleteMinusClique)):
        return c == 0 and 0 <= r < spec.order
    if isinstance(spec, CompleteBipartite):
        return c == 0 and 0 <= r < spec.left + spec.right
    if isinstance(spec, CartesianComplete):
        return 0 <= r < spec.m and 0 <= c < spec.n
    return v in set(vertices(spec))


def _iter_edges(spec: GraphSpec) -> Iterator[Edge]:
    if isinstance(spec, Complete):
        vs = [Vertex(i, 0) for i in range(spec.order)]
        yield from combinations(vs, 2)
    elif isinstance(spec, CompleteMinusClique):
        removed = set(spec.clique)
        for i, j in combinations(range(spec.order), 2):
            if i in removed and j in removed:
                continue
            yield (Vertex(i, 0), Vertex(j, 0))
    elif isinstance(spec, CompleteBipartite):
        a = spec.left
        for i in range(a):
            for j in range(a, a + spec.right):
                yield (Vertex(i, 0), Vertex(j, 0))
    elif isinstance(spec, CartesianComplete):
        m, n = spec.m, spec.n
        # lexicographic: for each vertex, neighbours greater than it
        for i in range(m):
            for j in range(n):
                u = Vertex(i, j)
                for jj in range(j + 1, n):
                    yield (u, Vertex(i, jj))
                for ii in range(i + 1, m):
                    yield (u, Vertex(ii, j))
    elif isinstance(spec, EdgeSet):
        yield from spec.edges
    elif isinstance(spec, Region):
        for a, b in _iter_edges(spec.local):
            yield make_edge(spec.image(a), spec.image(b))
    else:
        raise SpecError(f"unknown spec {spec!r}")


def edge_list(spec: GraphSpec) -> list[Edge]:
    """Edges of ``spec`` in sorted canonical order."""
    return sorted(_iter_edges(spec))


def edge_set(spec: GraphSpec) -> set[Edge]:
    return set(_iter_edges(spec))


def edge_count(spec: GraphSpec) -> int:
    if isinstance(spec, Complete):
        return spec.order * (spec.order - 1) // 2
    if isinstance(spec, CompleteMinusClique):
        k = len(spec.clique)
        return spec.order * (spec.order - 1) // 2 - k * (k - 1) // 2
    if isinstance(spec, CompleteBipartite):
        return spec.left * spec.right
    if isinstance(spec, CartesianComplete):
        return spec.m * spec.n * (spec.m + spec.n - 2) // 2
    if isinstance(spec, EdgeSet):
        return len(spec.edges)
    if isinstance(spec, Region):
        return edge_count(spec.local)
    raise SpecError(f"unknown spec {spec!r}")


def has_edge(spec: GraphSpec, e: Edge) -> bool:
    """Membership test without materialising the edge set (closed-form variants)."""
    a, b = e
    if a == b:
        return False
    if isinstance(spec, Complete):
        return has_vertex(spec, a) and has_vertex(spec, b)
    if isinstance(spec, CompleteMinusClique):
        return (
            has_vertex(spec, a)
            and has_vertex(spec, b)
            and not (a.row in spec.clique and b.row in spec.clique)
        )
    if isinstance(spec, CompleteBipartite):
        if not (has_vertex(spec, a) and has_vertex(spec, b)):
            return False
        return (a.row < spec.left) != (b.row < spec.left)
    if isinstance(spec, CartesianComplete):
        if not (has_vertex(spec, a) and has_vertex(spec, b)):
            return False
        return (a.row == b.row) != (a.col == b.col)
    return make_edge(a, b) in edge_set(spec)


# --------------------------------------------------------------------------
# Regions
# --------------------------------------------------------------------------


def embed(region: Region, local_edge: Edge) -> Edge:
    a, b = local_edge
    if not (has_vertex(region.local, a) and has_vertex(region.local, b)):
        raise EmbeddingError(f"edge {a}-{b} outside local spec {region.local}")
    return make_edge(region.image(a), region.image(b))


def compose(outer: Region, inner: Region) -> Region:
    """Collapse ``inner`` (placed in ``outer.local``) into one map on ``outer.parent``."""
    return Region(
        parent=outer.parent,
        local=inner.local,
        vertex_map=lambda v: outer.image(inner.image(v)),
        label=f"{outer.label}/{inner.label}".strip("/"),
    )


def transpose(v: Vertex) -> Vertex:
    return Vertex(v.col, v.row)


def grid_map(rows: Iterable[int], cols: Iterable[int]) -> Callable[[Vertex], Vertex]:
    """Vertex map sending local ``(i, j)`` to ``(rows[i], cols[j])``."""
    rows, cols = tuple(rows), tuple(cols)

    def f(v: Vertex) -> Vertex:
        return Vertex(rows[v.row], cols[v.col])

    return f


def describe(spec: GraphSpec) -> str:
    if isinstance(spec, Complete):
        return f"K{spec.order}"
    if isinstance(spec, CompleteBipartite):
        return f"K{spec.left},{spec.right}"
    if isinstance(spec, CartesianComplete):
        return f"K{spec.m}xK{spec.n}"
    if isinstance(spec, CompleteMinusClique):
        return f"K{spec.order}\\K{len(spec.clique)}"
    if isinstance(spec, EdgeSet):
        return f"edges[{len(spec.edges)}]"
    if isinstance(spec, Region):
        return f"{describe(spec.local)}@{spec.label or '?'}"
    return repr(spec)


# --------------------------------------------------------------------------
# Textual host specs: ``complete N``, ``bipartite A B``, ``cartesian M N``,
# ``complete-minus-clique N v1 v2 ...`` (0-based clique vertices)
# --------------------------------------------------------------------------

_ARITY = {"complete": 1, "bipartite": 2, "cartesian": 2}


def parse_spec(text: Union[str, Iterable[str]]) -> GraphSpec:
    toks = text.split() if isinstance(text, str) else list(text)
    if not toks:
        raise SpecError("empty host spec")
    kind, args = toks[0], toks[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError as exc:
        raise SpecError(f"non-integer parameter in {' '.join(toks)!r}") from exc
    if kind in _ARITY:
        if len(nums) != _ARITY[kind]:
            raise SpecError(f"{kind} takes {_ARITY[kind]} parameter(s), got {len(nums)}")
        if kind == "complete":
            return Complete(nums[0])
        if kind == "bipartite":
            return CompleteBipartite(*nums)
        return CartesianComplete(*nums)
    if kind == "complete-minus-clique":
        if len(nums) < 3:
            raise SpecError("complete-minus-clique needs an order and at least 2 clique vertices")
        return CompleteMinusClique(nums[0], tuple(nums[1:]))
    raise SpecError(f"unknown host variant {kind!r}")


def format_spec(spec: GraphSpec) -> str:
    if isinstance(spec, Complete):
        return f"complete {spec.order}"
    if isinstance(spec, CompleteBipartite):
        return f"bipartite {spec.left} {spec.right}"
    if isinstance(spec, CartesianComplete):
        return f"cartesian {spec.m} {spec.n}"
    if isinstance(spec, CompleteMinusClique):
        return "complete-minus-clique " + " ".join(str(x) for x in (spec.order,) + spec.clique)
    raise SpecError(f"{describe(spec)} has no textual form")
