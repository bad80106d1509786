import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyguard.central import (
    GuardPlacement,
    central_guards,
    decompose_triplets,
    guard_for_triplet,
    triplet_graph_components,
)
from polyguard.corpus import corpus, regular_polygon
from polyguard.geometry import GeometryError, SimplePolygon
from polyguard.triangulate import root_at_leaf, tree_from_edges, triangulate, weak_dual
from polyguard.verify import check_connected, check_coverage

POLYS = corpus(31, 20, (5, 60))


def _rooted(nodes, edges):
    return root_at_leaf(tree_from_edges(nodes, edges))


def test_path_of_three_is_one_triplet():
    trip = decompose_triplets(_rooted([0, 1, 2], [(0, 1), (1, 2)]))
    assert len(trip) == 1
    assert sorted(trip[0].members) == [0, 1, 2]
    assert trip[0].middle == 1


def test_triplets_cover_every_node_and_stay_connected():
    # a caterpillar with branches, max degree 3
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (6, 7), (3, 8), (8, 9), (4, 10)]
    D = _rooted(range(11), edges)
    trip = decompose_triplets(D)
    covered = set()
    for t in trip:
        covered.update(t.members)
    assert covered == set(range(11))
    assert triplet_graph_components(trip) == 1
    assert len(trip) <= len(D.nodes) // 2


def test_requires_leaf_root():
    D = tree_from_edges(range(3), [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        decompose_triplets(D)


@pytest.mark.parametrize("k", range(len(POLYS)))
def test_triplet_structure(k):
    P = POLYS[k]
    T = triangulate(P)
    D = root_at_leaf(weak_dual(T))
    trip = decompose_triplets(D)
    covered = set()
    for t in trip:
        assert len(set(t.members)) == 3
        assert t.middle in D.adjacency[t.members[0]] and t.middle in D.adjacency[t.members[2]]
        guard_for_triplet(t, T)
        covered.update(t.members)
    assert covered == set(D.nodes)
    assert triplet_graph_components(trip) == 1


@pytest.mark.parametrize("k", range(len(POLYS)))
def test_guard_count_bound(k):
    P = POLYS[k]
    G = central_guards(P)
    assert 1 <= len(G) <= max(1, P.n // 2 - 1)
    assert all(P.vertices[v] == g for g, v in zip(G.guards, G.vertex_ids))


@given(k=st.integers(0, len(POLYS) - 1))
@settings(max_examples=20, deadline=None)
def test_guards_cover_and_connect(k):
    P = POLYS[k]
    G = central_guards(P)
    assert check_coverage(P, G.guards, samples=1500).ok
    ok, _ = check_connected(P, G.guards)
    assert ok


def test_square_gets_one_guard(square):
    G = central_guards(square)
    assert len(G) == 1


def test_convex_polygon_bound():
    P = regular_polygon(12)
    assert len(central_guards(P)) <= 5


def test_triangle_rejected():
    with pytest.raises(GeometryError):
        central_guards(SimplePolygon([(0, 0), (1, 0), (0, 1)]))


def test_placement_round_trip(comb):
    G = central_guards(comb)
    H = GuardPlacement.from_dict(G.to_dict())
    assert H.guards == G.guards and H.vertex_ids == G.vertex_ids and H.provenance == G.provenance
