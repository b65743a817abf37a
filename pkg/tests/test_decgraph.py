"""Spacetime decoding graph, oracled by exhaustive simple-path search."""

import math

import pytest

from qecdesk import decgraph, geometry, gf2
from qecdesk.errors import InvalidParameter


def all_simple_path_min(graph, u, v):
    """Exhaustive minimum qweight over simple paths; tiny graphs only."""
    best = [None]

    def walk(cur, cost, seen):
        if cur == v:
            if best[0] is None or cost < best[0]:
                best[0] = cost
            return
        for eid in graph.adj[cur]:
            ed = graph.edges[eid]
            nxt = ed.v if ed.u == cur else ed.u
            if nxt not in seen:
                walk(nxt, cost + ed.qweight, seen | {nxt})

    walk(u, 0, {u})
    return best[0]


def test_edge_weight_is_log_likelihood_ratio():
    for p in (0.001, 0.01, 0.1, 0.3):
        assert decgraph.edge_weight(p) == pytest.approx(math.log((1 - p) / p))
    assert decgraph.edge_weight(0.5) == 0.0
    assert decgraph.edge_weight(0.01) > decgraph.edge_weight(0.1)


def test_edge_weight_rejects_degenerate_probability():
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(InvalidParameter):
            decgraph.edge_weight(bad)


def test_planar_graph_shape(planar3):
    g = decgraph.build_spacetime(planar3, 1, 0.01, 0.0)
    assert g.n_nodes == planar3.m_x + 1
    assert g.boundary_node == planar3.m_x
    kinds = [e.kind for e in g.edges]
    assert decgraph.TIME not in kinds
    assert decgraph.BOUNDARY in kinds
    # every space edge corresponds to a weight-2 column of the check matrix
    for e in g.edges:
        if e.kind == decgraph.SPACE:
            assert len(e.data_edges) == 1
            col = gf2.vec_from_indices(
                i for i, row in enumerate(planar3.h_x)
                if (row >> e.data_edges[0]) & 1)
            assert col == (1 << e.u) | (1 << e.v)


def test_toric_graph_has_no_boundary_edges(toric4):
    g = decgraph.build_spacetime(toric4, 1, 0.01, 0.0)
    assert all(e.kind != decgraph.BOUNDARY for e in g.edges)
    assert not g.adj[g.boundary_node]


def test_time_edges_connect_consecutive_slots(planar3):
    g = decgraph.build_spacetime(planar3, 3, 0.01, 0.02)
    m = planar3.m_x
    time_edges = [e for e in g.edges if e.kind == decgraph.TIME]
    assert len(time_edges) == 2 * m
    for e in time_edges:
        assert e.v - e.u == m and e.u % m == e.v % m
        assert e.data_edges == ()
        assert e.weight == pytest.approx(decgraph.edge_weight(0.02))


def test_distances_match_exhaustive_search(planar3):
    g = decgraph.build_spacetime(planar3, 1, 0.03, 0.0)
    for u in range(g.n_nodes):
        for v in range(u + 1, g.n_nodes):
            r = decgraph.shortest_distance(g, u, v)
            assert r.reachable
            assert r.qweight == all_simple_path_min(g, u, v)


def test_distances_match_exhaustive_search_spacetime(planar3):
    g = decgraph.build_spacetime(planar3, 2, 0.03, 0.01)
    for u in range(0, g.n_nodes, 3):
        for v in range(u + 1, g.n_nodes, 2):
            r = decgraph.shortest_distance(g, u, v)
            assert r.qweight == all_simple_path_min(g, u, v)


def test_path_endpoints_and_data_edges(planar3):
    g = decgraph.build_spacetime(planar3, 1, 0.03, 0.0)
    b = g.boundary_node
    for u in range(planar3.m_x):
        r = decgraph.shortest_distance(g, u, b)
        assert r.nodes[0] == u and r.nodes[-1] == b
        # selected data edges must terminate on exactly this check
        chain = gf2.vec_from_indices(r.data_edges)
        assert geometry.boundary(planar3, chain) == 1 << u


def test_interior_path_reproduces_check_pair(planar3):
    g = decgraph.build_spacetime(planar3, 1, 0.03, 0.0)
    for u in range(planar3.m_x):
        for v in range(u + 1, planar3.m_x):
            r = decgraph.shortest_distance(g, u, v)
            chain = gf2.vec_from_indices(r.data_edges)
            assert geometry.boundary(planar3, chain) == (1 << u) | (1 << v)


def test_path_is_deterministic(planar5):
    g = decgraph.build_spacetime(planar5, 1, 0.02, 0.0)
    a = decgraph.shortest_distance(g, 0, planar5.m_x - 1)
    b = decgraph.shortest_distance(g, 0, planar5.m_x - 1)
    assert a == b


def test_zero_length_and_bad_ids(planar3):
    g = decgraph.build_spacetime(planar3, 1, 0.03, 0.0)
    r = decgraph.shortest_distance(g, 2, 2)
    assert r.qweight == 0 and r.nodes == (2,) and r.data_edges == ()
    with pytest.raises(InvalidParameter):
        decgraph.shortest_distance(g, 0, g.n_nodes)


def test_quantization_is_monotone():
    ws = [decgraph.edge_weight(p) for p in (0.4, 0.2, 0.1, 0.02)]
    qs = [decgraph._quantize(w) for w in ws]
    assert qs == sorted(qs) and len(set(qs)) == len(qs)
