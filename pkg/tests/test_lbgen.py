import numpy as np
import pytest

from polyguard.geometry import GeometryError
from polyguard.lbgen import embed_tree, max_epsilon, thicken, tree_polygon
from polyguard.medial import medial_axis

CASES = [(2, 1), (2, 2), (2, 3), (2, 4), (4, 2)]


@pytest.mark.parametrize("delta,h", CASES)
def test_embedding_shape(delta, h):
    E = embed_tree(delta, h)
    assert E.size == sum(delta**q for q in range(h + 1))
    assert E.diameter() == 2 * h
    for v in range(E.size):
        r = float(np.hypot(*E.positions[v]))
        assert r == pytest.approx(0.0 if E.depth[v] == 0 else 3.0 ** E.depth[v])
        kids = E.children(v)
        assert len(kids) == (delta if E.depth[v] < h else 0)


@pytest.mark.parametrize("delta,h", CASES)
def test_no_straight_joints(delta, h):
    E = embed_tree(delta, h)
    pos = E.positions
    for v in range(1, E.size):
        p = E.parent[v]
        inc = pos[v] - pos[p]
        for c in E.children(v):
            out = pos[c] - pos[v]
            cos = inc @ out / (np.hypot(*inc) * np.hypot(*out))
            assert cos < 1 - 1e-6


@pytest.mark.parametrize("delta,h", CASES)
def test_thickened_polygon(delta, h):
    T = tree_polygon(delta, h)
    P = T.polygon
    assert P.area > 0
    assert set(i for vs in T.chambers.values() for i in vs) == set(range(P.n))
    assert set(T.corridors) == {(min(a, b), max(a, b)) for a, b in T.source.edges()}
    for v in range(T.source.size):
        assert P.contains(tuple(T.source.positions[v]))


def test_epsilon_limits():
    E = embed_tree(2, 2)
    with pytest.raises(GeometryError):
        thicken(E, max_epsilon(E) * 1.01)
    with pytest.raises(GeometryError):
        thicken(E, 0.0)


def test_bad_parameters():
    with pytest.raises(ValueError):
        embed_tree(3, 2)
    with pytest.raises(ValueError):
        embed_tree(2, 0)


@pytest.mark.parametrize("h", [1, 2, 3])
def test_medial_diameter_grows_with_height(h):
    T = tree_polygon(2, h)
    assert medial_axis(T.polygon).diameter >= T.source.diameter()


def test_annotations_json_ready():
    import json

    a = tree_polygon(2, 2).annotations()
    assert json.loads(json.dumps(a))["tree_diameter"] == 4
