import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

import oracles
from sunlet8.graphs import CartesianComplete, Complete, CompleteBipartite, CompleteMinusClique, Vertex, edge_list
from sunlet8.sunlet import (
    InvalidBlockError,
    NotASunlet,
    SunletBlock,
    block_edges,
    canonical,
    recognize_sunlet,
    validate_block,
)


def V(*xs):
    return tuple(Vertex(x) for x in xs)


def blk(c, p):
    return SunletBlock(V(*c), V(*p))


def test_block_edges_unrolled():
    b = blk((0, 1, 2, 3), (4, 5, 6, 7))
    got = [(a.row, b.row) for a, b in block_edges(b)]
    assert got == [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (1, 5), (2, 6), (3, 7)]


def test_first_block_of_the_k19_table():
    # cycle x1 x2 x18 x19, pendants x9 x12 x5 x6 (1-based)
    b = blk((0, 1, 17, 18), (8, 11, 4, 5))
    got = {frozenset((a.row + 1, b.row + 1)) for a, b in block_edges(b)}
    want = {frozenset(p) for p in [(1, 2), (2, 18), (18, 19), (1, 19), (1, 9), (2, 12), (5, 18), (6, 19)]}
    assert got == want
    assert validate_block(b, CompleteMinusClique(19, (12, 14, 16))) is None


def test_repeated_vertex():
    b = blk((0, 1, 2, 3), (2, 5, 6, 7))
    with pytest.raises(InvalidBlockError):
        block_edges(b)
    assert validate_block(b, Complete(8)).startswith("duplicate-vertex")


def test_validate_violations():
    host = CartesianComplete(4, 4)
    diag = SunletBlock(
        (Vertex(0, 0), Vertex(1, 1), Vertex(1, 0), Vertex(0, 1)),
        (Vertex(2, 0), Vertex(3, 1), Vertex(1, 2), Vertex(0, 3)),
    )
    assert validate_block(diag, host).startswith("non-host-edge")
    far = SunletBlock(
        (Vertex(0, 0), Vertex(0, 1), Vertex(1, 1), Vertex(1, 0)),
        (Vertex(4, 0), Vertex(0, 2), Vertex(1, 2), Vertex(2, 0)),
    )
    assert validate_block(far, host).startswith("out-of-range")


def test_recognize_round_trip_and_canonical_form():
    b = blk((5, 2, 7, 3), (0, 1, 4, 6))
    got = recognize_sunlet(block_edges(b))
    assert got.cycle[0] == Vertex(2)
    assert got.cycle[1] == min(got.cycle[1], got.cycle[3])
    assert set(block_edges(got)) == set(block_edges(b))
    assert got == canonical(b)


def test_recognize_rejections():
    star = [(Vertex(0), Vertex(i)) for i in range(1, 9)]
    with pytest.raises(NotASunlet) as ei:
        recognize_sunlet(star)
    assert ei.value.reason == "degree-sequence"
    c8 = [(Vertex(i), Vertex((i + 1) % 8)) for i in range(8)]
    with pytest.raises(NotASunlet) as ei:
        recognize_sunlet(c8)
    assert ei.value.reason == "degree-sequence"
    with pytest.raises(NotASunlet) as ei:
        recognize_sunlet(c8[:7])
    assert ei.value.reason == "edge-count"


def test_recognize_not_c4():
    # triangle 0-1-2 with tail 2-3: degrees 3,3,3,3,1,1,1,1 but no 4-cycle
    e = [(0, 1), (1, 2), (0, 2), (2, 3), (0, 4), (1, 5), (3, 6), (3, 7)]
    with pytest.raises(NotASunlet) as ei:
        recognize_sunlet([(Vertex(a), Vertex(b)) for a, b in e])
    assert ei.value.reason == "not-c4"


def _check_recognition(edges) -> None:
    want = oracles.is_l8([frozenset(e) for e in edges])
    try:
        got = recognize_sunlet(edges)
    except NotASunlet:
        assert not want
    else:
        assert want
        assert set(block_edges(got)) == {tuple(sorted(e)) for e in edges}


@pytest.mark.parametrize("host", [CartesianComplete(4, 2), CompleteBipartite(4, 4)])
def test_recognize_exhaustive_on_16_edge_hosts(host):
    es = edge_list(host)
    hits = 0
    for combo in itertools.combinations(es, 8):
        _check_recognition(list(combo))
        try:
            recognize_sunlet(combo)
            hits += 1
        except NotASunlet:
            pass
    assert hits == len(oracles.all_l8_subgraphs(
        oracles.cartesian(4, 2) if isinstance(host, CartesianComplete) else oracles.bipartite(4, 4)
    ))


def test_small_graphs_never_recognised():
    for g in nx.graph_atlas_g():
        if g.number_of_edges() == 8:
            edges = [(Vertex(a), Vertex(b)) for a, b in g.edges]
            with pytest.raises(NotASunlet):
                recognize_sunlet(edges)


@given(st.lists(st.sampled_from(list(itertools.combinations(range(8), 2))), min_size=8, max_size=8, unique=True))
def test_recognize_agrees_with_isomorphism(pairs):
    _check_recognition([(Vertex(a), Vertex(b)) for a, b in pairs])


@given(st.permutations(range(10)))
def test_round_trip_property(perm):
    b = blk(perm[:4], perm[4:8])
    got = recognize_sunlet(block_edges(b))
    assert got == canonical(b)
    # the 8 automorphisms all canonicalise to the same block
    rots = []
    for k in range(4):
        c = b.cycle[k:] + b.cycle[:k]
        p = b.pendants[k:] + b.pendants[:k]
        rots.append(SunletBlock(c, p))
        rots.append(SunletBlock((c[0],) + c[1:][::-1], (p[0],) + p[1:][::-1]))
    assert {canonical(r) for r in rots} == {got}
