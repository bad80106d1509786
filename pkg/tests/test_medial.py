import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyguard.corpus import corpus
from polyguard.geometry import GeometryError, ObjectRef, point_segment_distances
from polyguard.medial import clearance, medial_axis, tree_diameter, unweighted_diameter

POLYS = corpus(41, 12, (4, 40))


def _boundary_distance(P, pts):
    d, _ = point_segment_distances(np.atleast_2d(pts), P.edge_starts, P.edge_ends)
    return d.min(axis=1)


def _object_distance(P, pts, o):
    pts = np.atleast_2d(pts)
    if o.kind == "vertex":
        return np.hypot(*(pts - P.coords[o.index]).T)
    a, b = P.edge(o.index)
    d, _ = point_segment_distances(pts, np.array([a]), np.array([b]))
    return d[:, 0]


def test_rectangle_axis(rect):
    M = medial_axis(rect)
    inner = sorted(nd.position for nd in M.nodes if not nd.is_leaf)
    assert inner == pytest.approx([(1.0, 1.0), (3.0, 1.0)])
    assert len(M.leaves()) == 4
    assert len(M.edges) == 5
    assert M.diameter == 3


def test_square_axis(square):
    M = medial_axis(square)
    inner = [nd for nd in M.nodes if not nd.is_leaf]
    assert len(inner) == 1
    assert inner[0].position == pytest.approx((0.5, 0.5))
    assert inner[0].clearance == pytest.approx(0.5)
    assert M.diameter == 2


def test_clearance_of_square_center(square):
    r, objs = clearance(square, (0.5, 0.5))
    assert r == pytest.approx(0.5)
    assert objs == [ObjectRef("edge", i) for i in range(4)]


def test_clearance_outside_raises(square):
    with pytest.raises(GeometryError):
        clearance(square, (2.0, 2.0))


@pytest.mark.parametrize("k", range(len(POLYS)))
def test_tree_shape(k):
    P = POLYS[k]
    M = medial_axis(P)
    assert len(M.edges) == len(M.nodes) - 1
    assert sorted(M.nodes[i].vertex for i in M.leaves()) == P.convex_vertices()
    adj = M.adjacency()
    assert tree_diameter(adj) == unweighted_diameter(M)
    for i, nd in enumerate(M.nodes):
        if not nd.is_leaf:
            assert len(adj[i]) >= 2


@pytest.mark.parametrize("k", range(len(POLYS)))
def test_nodes_are_centres_of_empty_discs(k):
    P = POLYS[k]
    M = medial_axis(P)
    for nd in M.nodes:
        if nd.is_leaf:
            continue
        x = np.array(nd.position)
        assert P.contains(nd.position)
        assert _boundary_distance(P, x)[0] == pytest.approx(nd.clearance, rel=1e-6, abs=1e-9 * P.scale)
        assert len(nd.defining_objects) >= 3


@given(k=st.integers(0, len(POLYS) - 1))
@settings(max_examples=12, deadline=None)
def test_edge_points_are_equidistant(k):
    # independent check by direct distance sums rather than the closed form curves
    P = POLYS[k]
    M = medial_axis(P)
    for e in M.edges:
        pts = e.sample(7)
        a, b = e.defining_pair
        da = _object_distance(P, pts, a)
        db = _object_distance(P, pts, b)
        near = _boundary_distance(P, pts)
        tol = 1e-6 * P.scale
        assert np.all(np.abs(da - db) <= tol)
        assert np.all(np.abs(da - near) <= tol)


def test_diameter_of_a_path():
    assert tree_diameter({0: [1], 1: [0, 2], 2: [1]}) == 2
    assert tree_diameter({}) == 0


def test_to_dict_is_json_ready(lpoly):
    import json

    d = medial_axis(lpoly).to_dict()
    assert json.loads(json.dumps(d))["diameter"] == d["diameter"]
