import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from sunlet8.graphs import (
    CartesianComplete,
    Complete,
    CompleteBipartite,
    EdgeSet,
    Vertex,
    edge_list,
    make_edge,
)
from sunlet8.search.cyclic import base_block_count, cyclic_search, develop
from sunlet8.search.engine import (
    SearchConfig,
    SearchError,
    enumerate_blocks_through,
    luby,
    search,
    search_edges,
)
from sunlet8.search.orbit import column_rotation, orbit_search, rotation_search
from sunlet8.search.twophase import forced_cycle_counts, two_phase_search, uniform_cycle_counts
from sunlet8.sunlet import SunletBlock, block_edges
from sunlet8.verify import verify

PROVE = SearchConfig(time_budget=120, mode="prove-exhaustive")
PROVE_PLAIN = SearchConfig(time_budget=120, mode="prove-exhaustive", symmetry_breaking=False)


def edge_keys_of(block):
    return frozenset(frozenset(e) for e in block_edges(block))


def test_luby():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


# -- block enumeration


def test_blocks_through_k8_edge_matches_brute_force():
    avail = edge_list(Complete(8))
    e = (Vertex(0), Vertex(1))
    got = [edge_keys_of(b) for b in enumerate_blocks_through(e, avail)]
    assert len(got) == len(set(got))
    want = {
        frozenset(frozenset(x) for x in s)
        for s in oracles.all_l8_by_tuples(oracles.complete(8))
        if frozenset(((0, 0), (1, 0))) in s
    }
    assert set(got) == want
    assert len(want) == 5040 * 8 // 28


def test_blocks_through_single_block():
    b = SunletBlock.of([(0, 0), (1, 0), (2, 0), (3, 0)], [(4, 0), (5, 0), (6, 0), (7, 0)])
    es = block_edges(b)
    for e in es:
        (only,) = list(enumerate_blocks_through(e, es))
        assert edge_keys_of(only) == edge_keys_of(b)


def test_blocks_through_star_is_empty():
    star = [(Vertex(0), Vertex(i)) for i in range(1, 9)]
    assert list(enumerate_blocks_through(star[0], star)) == []
    with pytest.raises(ValueError):
        list(enumerate_blocks_through((Vertex(1), Vertex(2)), star))


@given(st.integers(0, 2**32))
@settings(max_examples=25)
def test_blocks_through_random_subgraphs(seed):
    rng = random.Random(seed)
    all_e = edge_list(CartesianComplete(3, 3)) + edge_list(Complete(9))
    es = sorted({make_edge(*e) for e in rng.sample(all_e, 26)})
    g = nx.Graph()
    g.add_edges_from(es)
    ref = oracles.all_l8_subgraphs(g)
    e = es[0]
    got = [edge_keys_of(b) for b in enumerate_blocks_through(e, es)]
    assert len(got) == len(set(got))
    assert set(got) == {s for s in ref if frozenset(e) in s}


# -- engine


def test_k44_found_quickly():
    out = search(CompleteBipartite(4, 4), SearchConfig(time_budget=1))
    assert out.found and len(out.decomposition.blocks) == 2
    assert out.stats.wall_time < 1


def test_fig1_host_and_k16():
    out = search(CartesianComplete(4, 4), SearchConfig(time_budget=30, restart_policy="luby-scaled", seed=7))
    assert out.found and len(out.decomposition.blocks) == 6
    out = search(Complete(16), SearchConfig(time_budget=60, restart_policy="luby-scaled"))
    assert out.found and len(out.decomposition.blocks) == 15
    assert verify(out.decomposition).valid


def test_k46_unsat():
    out = search(CompleteBipartite(4, 6), PROVE)
    assert out.result == "infeasible-proven"


def test_counting_unsat_and_ceiling():
    out = search(CartesianComplete(5, 5), SearchConfig())
    assert out.result == "infeasible-proven" and "multiple of 8" in out.reason
    with pytest.raises(SearchError):
        search(CartesianComplete(16, 16), SearchConfig())


def test_timeout_is_not_unsat():
    out = search(Complete(33), SearchConfig(time_budget=0.05, ceiling=10**4))
    assert out.result == "timeout" and out.decomposition is None


def test_determinism():
    cfg = SearchConfig(time_budget=30)
    a = search(CartesianComplete(4, 4), cfg)
    b = search(CartesianComplete(4, 4), cfg)
    assert a.decomposition == b.decomposition
    assert (a.stats.nodes, a.stats.blocks_tried) == (b.stats.nodes, b.stats.blocks_tried)
    cfg = SearchConfig(time_budget=30, restart_policy="luby-scaled", seed=3)
    assert search(CartesianComplete(4, 4), cfg).decomposition == search(CartesianComplete(4, 4), cfg).decomposition


def _small_hosts():
    yield "K44", edge_list(CompleteBipartite(4, 4))
    yield "L8", block_edges(SunletBlock.of([(i, 0) for i in range(4)], [(i, 0) for i in range(4, 8)]))
    yield "K4xK2", edge_list(CartesianComplete(4, 2))
    yield "K46", edge_list(CompleteBipartite(4, 6))
    # K_{8,5} restricted to 4 + 4 vertices, and to 4 + 5 with one side thinned
    k85 = edge_list(CompleteBipartite(8, 5))
    yield "K85|4+4", [e for e in k85 if e[0].row < 4 and e[1].row < 12]
    yield "K85|8 edges", [e for e in k85 if e[0].row < 2 and e[1].row < 12]
    yield "K85|24", [e for e in k85 if e[0].row < 3 and e[1].row < 13][:24]


@pytest.mark.parametrize("name,edges", list(_small_hosts()))
def test_exhaustive_verdict_matches_brute_force(name, edges):
    g = nx.Graph()
    g.add_edges_from(edges)
    want = oracles.exact_cover_exists(g)
    for cfg in (PROVE_PLAIN, PROVE):
        out = search_edges(edges, cfg)
        assert out.result == ("found" if want else "infeasible-proven"), name


@given(st.integers(0, 2**32), st.sampled_from([16, 24]))
@settings(max_examples=30)
def test_exhaustive_random_subgraphs(seed, size):
    rng = random.Random(seed)
    pool = edge_list(CartesianComplete(3, 3)) if seed % 2 else edge_list(Complete(8))
    es = sorted(rng.sample(pool, min(size, len(pool) // 8 * 8)))
    g = nx.Graph()
    g.add_edges_from(es)
    want = oracles.exact_cover_exists(g)
    verdicts = {search_edges(es, cfg).result for cfg in (PROVE_PLAIN, PROVE)}
    assert verdicts == {"found" if want else "infeasible-proven"}


def test_edge_set_host():
    es = edge_list(CompleteBipartite(4, 4))
    out = search(EdgeSet(tuple(es)), SearchConfig())
    assert out.found


# -- cyclic difference method


def test_cyclic_k17_and_odd_products():
    for m, n in [(1, 17), (9, 9), (11, 7)]:
        out = cyclic_search(m, n, time_budget=60)
        assert out.found and verify(out.decomposition).valid
        assert len(out.decomposition.blocks) == base_block_count(m, n) * m * n


def test_cyclic_rejects_bad_orders():
    with pytest.raises(ValueError):
        base_block_count(4, 6)
    with pytest.raises(ValueError):
        base_block_count(3, 5)


def test_develop_translates():
    b = SunletBlock.of([(0, 0), (0, 1), (1, 1), (1, 0)], [(2, 0), (0, 2), (1, 2), (2, 1)])
    out = develop(3, 3, [b])
    assert len(out) == 9 and out[0] == b
    assert out[4].cycle[0] == Vertex(1, 1)


# -- cycles-first and orbit strategies


def test_forced_counts():
    es = edge_list(CartesianComplete(4, 6))
    c = forced_cycle_counts(es)
    assert c is not None and set(c.values()) == {2}
    assert forced_cycle_counts(edge_list(CartesianComplete(4, 10))) is None
    assert set(uniform_cycle_counts(edge_list(CartesianComplete(4, 10))).values()) == {3}


@pytest.mark.parametrize("m,n", [(4, 2), (4, 6), (8, 2)])
def test_two_phase(m, n):
    out = two_phase_search(CartesianComplete(m, n), time_budget=60)
    assert out.found and verify(out.decomposition).valid
    assert oracles.is_decomposition(oracles.cartesian(m, n), out.decomposition.blocks)


def test_two_phase_counting_bound():
    c8 = [(Vertex(i), Vertex((i + 1) % 8)) for i in range(8)]
    out = two_phase_search(EdgeSet(tuple(make_edge(*e) for e in c8)))
    assert out.result == "infeasible-proven" and "cycle slots" in out.reason
    with pytest.raises(SearchError):
        two_phase_search(CompleteBipartite(16, 5))


@given(st.integers(0, 2**32))
@settings(max_examples=40)
def test_two_phase_matches_brute_force_when_forced(seed):
    rng = random.Random(seed)
    pool = edge_list(CartesianComplete(3, 3)) if seed % 2 else edge_list(Complete(8))
    es = sorted(rng.sample(pool, 16))
    if forced_cycle_counts(es) is None:
        return
    g = nx.Graph()
    g.add_edges_from(es)
    want = oracles.exact_cover_exists(g)
    out = two_phase_search(EdgeSet(tuple(es)), time_budget=60)
    assert out.result == ("found" if want else "infeasible-proven")


@pytest.mark.parametrize("m,n", [(4, 6), (4, 10)])
def test_rotation_orbits(m, n):
    out = rotation_search(m, n, time_budget=120)
    assert out.found
    assert oracles.is_decomposition(oracles.cartesian(m, n), out.decomposition.blocks)


def test_orbit_rejects_non_automorphism():
    with pytest.raises(SearchError):
        orbit_search(CartesianComplete(2, 3), [lambda v: Vertex(v.col % 2, v.row)], time_budget=1)


def test_orbit_column_rotation_is_automorphism():
    f = column_rotation(3, 5)
    es = set(edge_list(CartesianComplete(3, 5)))
    assert {make_edge(f(a), f(b)) for a, b in es} == es
