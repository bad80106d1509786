"""Shared audits for finished proximity runs."""
import numpy as np
from shapely.geometry import Polygon as ShapelyPolygon

from polyguard.geometry import crop_indices, points_visible, vertex_limited_visibility_polygon
from polyguard.verify import check_connected, check_coverage, territory_partition


def audit_territories(P, res):
    """Partition, connectivity, budget and the territory definition checked by a second route."""
    w = res.world
    assert not w.connectivity_violations
    assert w.peak_agents <= P.n
    regions = [t.coords(P) for _, t in sorted(res.territories.items())]
    residual, overlap = territory_partition(P, regions)
    assert residual <= 1e-9 and overlap <= 1e-9
    for i, t in res.territories.items():
        a = w.agents[i]
        if a.parent is None:
            continue
        par = w.agents[a.parent]
        # territory = limited view of the settler intersected with the side of its gap edge away from the parent
        side = crop_indices(P, P.vertices[par.settled_vertex], a.settled_vertex, a.orient)
        view = vertex_limited_visibility_polygon(P, P.vertices[a.settled_vertex])
        expect = ShapelyPolygon(view.coords(P)).intersection(ShapelyPolygon(P.coords[side]))
        assert abs(expect.area - t.area(P)) <= 1e-9 * P.area
        assert set(t.vertices) <= set(side)


def audit_grandparents(P, res):
    w = res.world
    for a in w.agents.values():
        if a.status != "settled" or a.parent is None:
            continue
        p = w.agents[a.parent]
        if p.parent is None:
            continue
        g = w.agents[p.parent]
        assert not points_visible(P, P.vertices[a.settled_vertex], P.vertices[g.settled_vertex])


def audit_guards(P, guards, samples=2000):
    assert check_coverage(P, guards, samples=samples).ok
    ok, _ = check_connected(P, guards)
    assert ok


def loglog_slope(xs, ys):
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(x, y, 1)[0])
