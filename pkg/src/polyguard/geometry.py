"""Planar primitives and visibility constructions over simple polygons.

Vertices are indexed from 0.  Edge ``i`` is the segment from vertex ``i`` to
vertex ``(i + 1) % n``.  Polygons are stored counterclockwise.
"""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

Point = tuple[float, float]

#: relative tolerance used by all tolerance-based tests
TOL = float(os.environ.get("POLYGUARD_TOLERANCE", "1e-9"))

_FILTER = 1e-12


class GeometryError(ValueError):
    """Raised for invalid polygons or points outside the polygon."""


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    """Sign of ``(q - p) x (r - p)``.

    Near-zero determinants are recomputed exactly with rationals, so the
    answer does not depend on floating point rounding.
    """
    det = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    mag = max(abs(p[0]), abs(p[1]), abs(q[0]), abs(q[1]), abs(r[0]), abs(r[1]), 1e-300)
    if abs(det) < _FILTER * mag * mag:
        fp = [Fraction(c) for c in (*p, *q, *r)]
        det = (fp[2] - fp[0]) * (fp[5] - fp[1]) - (fp[3] - fp[1]) * (fp[4] - fp[0])
    if det > 0:
        return Orientation.COUNTERCLOCKWISE
    if det < 0:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def signed_area(pts) -> float:
    a = np.asarray(pts, dtype=float)
    x, y = a[:, 0], a[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@dataclass(frozen=True)
class ObjectRef:
    """A polygon object: a vertex or an (open) edge."""

    kind: str  # "vertex" | "edge"
    index: int

    def __post_init__(self):
        if self.kind not in ("vertex", "edge"):
            raise ValueError(f"bad object kind {self.kind!r}")

    def __repr__(self):
        return f"{self.kind[0]}{self.index}"


def _seg_intersect_matrix(a, b, c, d, eps):
    """Proper-crossing matrix between segments a[i]b[i] and c[j]d[j]."""
    ab = b - a
    cd = d - c
    o1 = ab[:, None, 0] * (c[None, :, 1] - a[:, None, 1]) - ab[:, None, 1] * (c[None, :, 0] - a[:, None, 0])
    o2 = ab[:, None, 0] * (d[None, :, 1] - a[:, None, 1]) - ab[:, None, 1] * (d[None, :, 0] - a[:, None, 0])
    o3 = cd[None, :, 0] * (a[:, None, 1] - c[None, :, 1]) - cd[None, :, 1] * (a[:, None, 0] - c[None, :, 0])
    o4 = cd[None, :, 0] * (b[:, None, 1] - c[None, :, 1]) - cd[None, :, 1] * (b[:, None, 0] - c[None, :, 0])
    return ((o1 > eps) & (o2 < -eps) | (o1 < -eps) & (o2 > eps)) & (
        (o3 > eps) & (o4 < -eps) | (o3 < -eps) & (o4 > eps)
    )


class SimplePolygon:
    """A simple polygon given by its counterclockwise vertex list.

    Construction checks finiteness, orientation, simplicity and that no three
    consecutive vertices are collinear.  The stricter "no three vertices
    collinear anywhere" condition is reported by :meth:`general_position_violations`
    but not enforced, since several standard test shapes break it.
    """

    def __init__(self, vertices: Iterable[Sequence[float]], *, validate: bool = True):
        coords = np.array([[float(v[0]), float(v[1])] for v in vertices], dtype=float)
        if coords.ndim != 2 or coords.shape[0] < 3:
            raise GeometryError("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(coords)):
            raise GeometryError("vertex coordinates must be finite")
        coords.setflags(write=False)
        self.coords = coords
        self.n = coords.shape[0]
        self.vertices: tuple[Point, ...] = tuple((float(x), float(y)) for x, y in coords)
        span = coords.max(axis=0) - coords.min(axis=0)
        self.scale = float(max(np.hypot(*span), 1e-300))
        self.eps = TOL * self.scale
        self._ends = None
        if validate:
            self._validate()
        self._reflex = None

    @classmethod
    def from_points(cls, pts, **kw) -> "SimplePolygon":
        """Build a polygon, reversing the vertex order if it is clockwise."""
        pts = [tuple(map(float, p)) for p in pts]
        if len(pts) >= 3 and signed_area(pts) < 0:
            pts = pts[::-1]
        return cls(pts, **kw)

    def _validate(self):
        c = self.coords
        n = self.n
        if signed_area(c) <= 0:
            raise GeometryError("vertices must be in counterclockwise order")
        d = np.hypot(*(c[:, None, :] - c[None, :, :]).transpose(2, 0, 1))
        np.fill_diagonal(d, np.inf)
        if d.min() <= self.eps:
            raise GeometryError("duplicate vertices")
        for i in range(n):
            if orientation(self.vertices[i - 1], self.vertices[i], self.vertices[(i + 1) % n]) == 0:
                raise GeometryError(f"vertices {(i - 1) % n}, {i}, {(i + 1) % n} are collinear")
        a, b = c, np.roll(c, -1, axis=0)
        hit = _seg_intersect_matrix(a, b, a, b, self.eps * self.scale)
        if hit.any():
            i, j = np.argwhere(hit)[0]
            raise GeometryError(f"edges {i} and {j} cross")
        # touching contacts: a vertex lying on a non-incident edge
        dist, _ = point_segment_distances(c, a, b)
        idx = np.arange(n)
        dist[idx, idx] = np.inf
        dist[idx, (idx - 1) % n] = np.inf
        if dist.min() <= self.eps:
            i, j = np.unravel_index(np.argmin(dist), dist.shape)
            raise GeometryError(f"vertex {i} touches edge {j}")

    # -- basic queries ----------------------------------------------------
    def __len__(self):
        return self.n

    def __repr__(self):
        return f"SimplePolygon(n={self.n})"

    def __eq__(self, other):
        return isinstance(other, SimplePolygon) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    @property
    def area(self) -> float:
        return signed_area(self.coords)

    @property
    def edge_starts(self) -> np.ndarray:
        return self.coords

    @property
    def edge_ends(self) -> np.ndarray:
        if self._ends is None:
            ends = np.roll(self.coords, -1, axis=0)
            ends.setflags(write=False)
            self._ends = ends
        return self._ends

    def edge(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i], self.vertices[(i + 1) % self.n]

    def reflex_mask(self) -> np.ndarray:
        if self._reflex is None:
            c = self.coords
            prev, nxt = np.roll(c, 1, axis=0), np.roll(c, -1, axis=0)
            cr = (c[:, 0] - prev[:, 0]) * (nxt[:, 1] - c[:, 1]) - (c[:, 1] - prev[:, 1]) * (nxt[:, 0] - c[:, 0])
            self._reflex = cr < 0
        return self._reflex

    def is_reflex(self, i: int) -> bool:
        return bool(self.reflex_mask()[i])

    def convex_vertices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(~self.reflex_mask())]

    def reflex_vertices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.reflex_mask())]

    def general_position_violations(self, limit: int = 10) -> list[tuple[int, int, int]]:
        """Triples of (not necessarily consecutive) collinear vertices."""
        c = self.coords
        out = []
        for i in range(self.n):
            d = c - c[i]
            cr = d[:, None, 0] * d[None, :, 1] - d[:, None, 1] * d[None, :, 0]
            js, ks = np.nonzero(np.abs(cr) <= self.eps * self.scale)
            for j, k in zip(js, ks):
                if i < j < k:
                    out.append((i, int(j), int(k)))
                    if len(out) >= limit:
                        return out
        return out

    def locate(self, p: Point) -> tuple[str, int]:
        """Classify ``p`` as ("vertex", i), ("edge", i), ("interior", -1) or ("exterior", -1)."""
        q = np.asarray(p, dtype=float)
        dv = np.hypot(*(self.coords - q).T)
        i = int(np.argmin(dv))
        if dv[i] <= self.eps:
            return "vertex", i
        dist, _ = point_segment_distances(q[None, :], self.edge_starts, self.edge_ends)
        j = int(np.argmin(dist[0]))
        if dist[0, j] <= self.eps:
            return "edge", j
        return ("interior", -1) if _crossing_parity(q[None, :], self.coords)[0] else ("exterior", -1)

    def contains(self, p: Point) -> bool:
        """Closed containment test (boundary counts as inside)."""
        return self.locate(p)[0] != "exterior"

    def contains_many(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        inside = _crossing_parity(pts, self.coords)
        if not inside.all():
            dist, _ = point_segment_distances(pts[~inside], self.edge_starts, self.edge_ends)
            inside[~inside] = dist.min(axis=1) <= self.eps
        return inside

    # -- serialization ----------------------------------------------------
    def to_text(self) -> str:
        lines = [str(self.n)] + [f"{x!r} {y!r}" for x, y in self.vertices]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SimplePolygon":
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        n = int(rows[0][0])
        if len(rows) - 1 != n:
            raise GeometryError(f"expected {n} vertex lines, found {len(rows) - 1}")
        return cls([(float(r[0]), float(r[1])) for r in rows[1:]])

    def to_dict(self) -> dict:
        return {"n": self.n, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_dict(cls, d: dict) -> "SimplePolygon":
        poly = cls(d["vertices"])
        if "n" in d and d["n"] != poly.n:
            raise GeometryError("vertex count mismatch")
        return poly


def _crossing_parity(pts: np.ndarray, poly: np.ndarray, block: int = 1 << 21) -> np.ndarray:
    """Even-odd point-in-polygon test, vectorized over points in blocks of bounded size."""
    step = max(1, block // max(1, len(poly)))
    if len(pts) > step:
        return np.concatenate([_crossing_parity(pts[i : i + step], poly, block) for i in range(0, len(pts), step)])
    x, y = pts[:, 0:1], pts[:, 1:2]
    x1, y1 = poly[None, :, 0], poly[None, :, 1]
    x2, y2 = np.roll(poly[:, 0], -1)[None, :], np.roll(poly[:, 1], -1)[None, :]
    cond = (y1 > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
    return (np.count_nonzero(cond & (x < xint), axis=1) % 2) == 1


def point_segment_distances(pts, a, b):
    """Distances (m, k) from points to segments a[j]b[j] plus the foot parameters."""
    pts = np.asarray(pts, dtype=float)
    ab = b - a
    L2 = np.einsum("ij,ij->i", ab, ab)
    L2 = np.where(L2 == 0, 1e-300, L2)
    ap = pts[:, None, :] - a[None, :, :]
    t = np.einsum("mkj,kj->mk", ap, ab) / L2[None, :]
    tc = np.clip(t, 0.0, 1.0)
    foot = a[None, :, :] + tc[..., None] * ab[None, :, :]
    return np.hypot(*(pts[:, None, :] - foot).transpose(2, 0, 1)), t


def _as_point(p) -> np.ndarray:
    return np.asarray(p, dtype=float).reshape(2)


def _require_inside(P: SimplePolygon, p, what="point"):
    loc = P.locate(tuple(_as_point(p)))
    if loc[0] == "exterior":
        raise GeometryError(f"{what} {tuple(map(float, p))} lies outside the polygon")
    return loc


def points_visible(P: SimplePolygon, a: Point, b: Point, *, check: bool = True) -> bool:
    """True iff the open segment ab stays inside the closed polygon.

    Grazing contact with the boundary does not block visibility.
    """
    pa, pb = _as_point(a), _as_point(b)
    if check:
        _require_inside(P, pa, "a")
        _require_inside(P, pb, "b")
    return _visible(P, pa, pb)


def _visible(P: SimplePolygon, pa: np.ndarray, pb: np.ndarray) -> bool:
    d = pb - pa
    L = math.hypot(*d)
    if L <= P.eps:
        return True
    A = P.edge_starts
    u = d / L
    # signed lateral offsets of the polygon vertices from the line ab
    side = (A[:, 0] - pa[0]) * u[1] - (A[:, 1] - pa[1]) * u[0]
    along = (A[:, 0] - pa[0]) * u[0] + (A[:, 1] - pa[1]) * u[1]
    eps = P.eps
    s = np.where(side > eps, 1, np.where(side < -eps, -1, 0))
    s2 = np.roll(s, -1)
    side2, along2 = np.roll(side, -1), np.roll(along, -1)
    crossing = s * s2 < 0
    if crossing.any():
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (side * along2 - side2 * along) / (side - side2)
        # the crossing must also be a proper crossing of the edge interior
        t = t[crossing]
        if np.any((t > eps) & (t < L - eps)):
            return False
    cuts = [0.0, L]
    on = (s == 0) & (along > eps) & (along < L - eps)
    cuts.extend(along[on].tolist())
    # edges that touch the segment at an interior edge point (collinear overlaps handled by vertices)
    cuts = np.unique(np.round(np.array(cuts) / eps) * eps) if len(cuts) > 2 else np.array(cuts)
    cuts.sort()
    mids = []
    for t0, t1 in zip(cuts[:-1], cuts[1:]):
        if t1 - t0 > eps:
            mids.append(pa + u * (0.5 * (t0 + t1)))
    if not mids:
        return True
    return bool(P.contains_many(np.array(mids)).all())


# ---------------------------------------------------------------------------
# visibility polygon
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VisibilityPolygon:
    """Star-shaped region seen from ``viewpoint``.

    ``vertex_ids[k]`` is the polygon vertex at ``points[k]`` or -1 for a
    spurious vertex; ``window[k]`` flags the edge ``points[k] -> points[k+1]``
    as a window (not part of the polygon boundary).
    """

    viewpoint: Point
    points: np.ndarray
    vertex_ids: tuple[int, ...]
    window: tuple[bool, ...]

    @property
    def area(self) -> float:
        return signed_area(self.points)

    def spurious(self) -> list[int]:
        return [k for k, v in enumerate(self.vertex_ids) if v < 0]

    def visible_vertices(self) -> set[int]:
        return {v for v in self.vertex_ids if v >= 0}


def _viewpoint_frame(P: SimplePolygon, g: np.ndarray, orient: Optional[int]):
    kind, idx = _require_inside(P, g, "viewpoint")
    n = P.n
    if kind == "vertex":
        g = P.coords[idx].copy()
        ref = P.coords[(idx + 1) % n] - g
        back = P.coords[idx - 1] - g
        cone = math.atan2(ref[0] * back[1] - ref[1] * back[0], ref @ back) % (2 * math.pi)
        if cone == 0:
            cone = 2 * math.pi
    elif kind == "edge":
        ref = P.coords[(idx + 1) % n] - g
        cone = math.pi
    else:
        if orient is not None:
            ref = P.coords[orient] - g
        else:
            ref = np.array([1.0, 0.0])
        cone = None
    return kind, idx, g, ref, cone


def visibility_polygon(P: SimplePolygon, g: Point, orient: Optional[int] = None) -> VisibilityPolygon:
    """Exact visibility polygon of ``g`` (open-segment semantics).

    The boundary is listed counterclockwise.  For an interior viewpoint it
    starts at the first critical ray at or after the direction of vertex
    ``orient`` (or the +x axis); for a boundary viewpoint it starts at the
    viewpoint itself.
    """
    g = _as_point(g)
    kind, idx, g, ref, cone = _viewpoint_frame(P, g, orient)
    n = P.n
    C = P.coords
    eps = P.eps
    X = C - g  # vertex offsets
    dist = np.hypot(X[:, 0], X[:, 1])
    cand = np.ones(n, dtype=bool)
    if kind == "vertex":
        cand[idx] = False
    U = np.zeros_like(X)
    U[cand] = X[cand] / dist[cand, None]
    # side[r, j]: lateral offset of vertex j from ray r; T[r, j]: its distance along the ray
    side = U[:, None, 0] * X[None, :, 1] - U[:, None, 1] * X[None, :, 0]
    T = U[:, None, 0] * X[None, :, 0] + U[:, None, 1] * X[None, :, 1]
    s = np.where(side > eps, 1, np.where(side < -eps, -1, 0)).astype(np.int8)
    s_next = np.roll(s, -1, axis=1)
    s_prev = np.roll(s, 1, axis=1)
    side_n, T_n = np.roll(side, -1, axis=1), np.roll(T, -1, axis=1)

    excluded_edges = np.zeros(n, dtype=bool)
    if kind == "vertex":
        excluded_edges[idx] = excluded_edges[idx - 1] = True
    elif kind == "edge":
        excluded_edges[idx] = True
    crossing = (s * s_next < 0) & ~excluded_edges[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        tc = (side * T_n - side_n * T) / (side - side_n)
    tc = np.where(crossing & (tc > eps), tc, np.inf)
    cross_min = tc.min(axis=1)
    cross_arg = tc.argmin(axis=1)

    onray = (s == 0) & (T > eps)
    if kind == "vertex":
        onray[:, idx] = False
    hasL = (s_prev > 0) | (s_next > 0)
    hasR = (s_prev < 0) | (s_next < 0)
    Tp = np.where(onray & hasL, T, np.inf)
    Tm = np.where(onray & hasR, T, np.inf)
    r_plus = np.minimum(cross_min, Tp.min(axis=1))
    r_minus = np.minimum(cross_min, Tm.min(axis=1))

    # visibility of the candidate vertices themselves
    full = np.where(onray & (s_prev * s_next < 0), T, np.inf).min(axis=1)
    full = np.minimum(full, cross_min)
    chain = (onray & ((s_prev == 0) | (s_next == 0))).any(axis=1)
    visible = cand & (full >= dist - eps)
    if kind != "interior":
        # direction must lie in the closed interior cone at g
        ang = np.arctan2(ref[0] * U[:, 1] - ref[1] * U[:, 0], U @ ref) % (2 * math.pi)
        ang = np.where(ang > 2 * math.pi - 1e-12, 0.0, ang)
        visible &= ang <= cone + 1e-12
    for r in np.flatnonzero(cand & (chain | ~np.isfinite(full) | (abs(full - dist) <= 4 * eps))):
        visible[r] = _visible(P, g, C[r]) and (kind == "interior" or _in_cone(ref, cone, U[r]))
    if kind == "edge":
        # rays along the supporting edge
        for r in (idx, (idx + 1) % n):
            visible[r] = _visible(P, g, C[r])

    rays = np.flatnonzero(visible)
    if rays.size == 0:
        raise GeometryError("viewpoint sees no polygon vertex")
    ang = np.arctan2(ref[0] * U[rays, 1] - ref[1] * U[rays, 0], U[rays] @ ref) % (2 * math.pi)
    if kind != "interior":
        ang = np.where(ang > 2 * math.pi - 1e-9, 0.0, ang)
    order = np.argsort(ang, kind="stable")
    rays, ang = rays[order], ang[order]

    # group rays through collinear vertices
    groups: list[list[int]] = []
    for k, r in enumerate(rays):
        if groups:
            r0 = groups[-1][0]
            if abs(U[r0, 0] * U[r, 1] - U[r0, 1] * U[r, 0]) <= 1e-12 and U[r0] @ U[r] > 0:
                groups[-1].append(int(r))
                continue
        groups.append([int(r)])
    if kind == "interior" and len(groups) > 1:
        r0, rl = groups[0][0], groups[-1][0]
        if abs(U[r0, 0] * U[rl, 1] - U[r0, 1] * U[rl, 0]) <= 1e-12 and U[r0] @ U[rl] > 0:
            groups[0] = groups.pop() + groups[0]

    pts: list[np.ndarray] = []
    ids: list[int] = []
    seg: list[int] = []  # polygon edge carrying a spurious vertex (-1 otherwise)

    def emit(r: int, t: float, group_vs: list[int], minus: bool):
        # point on ray r at distance t: either a group vertex or a spurious hit
        for v in group_vs:
            if abs(dist[v] - t) <= 4 * eps:
                pts.append(C[v].copy())
                ids.append(v)
                seg.append(-1)
                return
        if not np.isfinite(t):
            raise GeometryError("ray escaped the polygon")
        pts.append(g + U[r] * t)
        ids.append(-1)
        # blocking edge: crossing edge or edge incident to the blocking vertex
        if abs(cross_min[r] - t) <= 4 * eps:
            seg.append(int(cross_arg[r]))
        else:
            on = np.flatnonzero(onray[r] & (np.abs(T[r] - t) <= 4 * eps))
            seg.append(-1 if on.size == 0 else int(on[0]))

    if kind != "interior":
        pts.append(g.copy())
        ids.append(idx if kind == "vertex" else -1)
        seg.append(-1 if kind == "vertex" else idx)
    last = len(groups) - 1
    for gi, grp in enumerate(groups):
        r = grp[0]
        vs = sorted(grp, key=lambda v: dist[v])
        rm, rp = float(r_minus[r]), float(r_plus[r])
        first_bound = kind != "interior" and gi == 0
        last_bound = kind != "interior" and gi == last
        if first_bound and last_bound:
            raise GeometryError("degenerate viewpoint cone")
        if first_bound:
            for v in vs:
                if dist[v] < rp - 4 * eps:
                    pts.append(C[v].copy())
                    ids.append(v)
                    seg.append(-1)
            emit(r, rp, vs, False)
            continue
        if last_bound:
            emit(r, rm, vs, True)
            for v in reversed(vs):
                if dist[v] < rm - 4 * eps:
                    pts.append(C[v].copy())
                    ids.append(v)
                    seg.append(-1)
            continue
        emit(r, rm, vs, True)
        lo, hi = min(rm, rp), max(rm, rp)
        mids = [v for v in vs if lo + 4 * eps < dist[v] < hi - 4 * eps]
        if rm > rp:
            mids = mids[::-1]
        for v in mids:
            pts.append(C[v].copy())
            ids.append(v)
            seg.append(-1)
        if abs(rm - rp) > 4 * eps:
            emit(r, rp, vs, False)

    # drop consecutive duplicates
    keep_pts, keep_ids, keep_seg = [], [], []
    for p, i, e in zip(pts, ids, seg):
        if keep_pts and np.hypot(*(p - keep_pts[-1])) <= 4 * eps:
            if keep_ids[-1] < 0 and i >= 0:
                keep_pts[-1], keep_ids[-1], keep_seg[-1] = p, i, e
            continue
        keep_pts.append(p)
        keep_ids.append(i)
        keep_seg.append(e)
    if len(keep_pts) > 1 and np.hypot(*(keep_pts[0] - keep_pts[-1])) <= 4 * eps:
        if keep_ids[0] < 0 and keep_ids[-1] >= 0:
            keep_pts[0], keep_ids[0], keep_seg[0] = keep_pts[-1], keep_ids[-1], keep_seg[-1]
        keep_pts.pop()
        keep_ids.pop()
        keep_seg.pop()

    m = len(keep_pts)
    window = []
    for k in range(m):
        window.append(not _on_common_edge(P, keep_ids[k], keep_seg[k], keep_ids[(k + 1) % m], keep_seg[(k + 1) % m]))
    return VisibilityPolygon(
        viewpoint=(float(g[0]), float(g[1])),
        points=np.array(keep_pts),
        vertex_ids=tuple(keep_ids),
        window=tuple(window),
    )


def _in_cone(ref, cone, u) -> bool:
    a = math.atan2(ref[0] * u[1] - ref[1] * u[0], ref @ u) % (2 * math.pi)
    if a > 2 * math.pi - 1e-12:
        a = 0.0
    return a <= cone + 1e-12


def _edges_of(P: SimplePolygon, vid: int, seg: int) -> set[int]:
    if vid >= 0:
        return {vid, (vid - 1) % P.n}
    return {seg} if seg >= 0 else set()


def _on_common_edge(P, v1, e1, v2, e2) -> bool:
    return bool(_edges_of(P, v1, e1) & _edges_of(P, v2, e2))


# ---------------------------------------------------------------------------
# vertex-limited visibility polygon
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexLimitedVisibilityPolygon:
    """Visibility region whose boundary vertices are all polygon vertices.

    ``vertices`` is a counterclockwise cycle of polygon vertex indices and
    ``gap[k]`` flags the edge ``vertices[k] -> vertices[k+1]`` as a gap edge
    (an internal diagonal rather than a polygon edge).
    """

    viewpoint: Point
    vertices: tuple[int, ...]
    gap: tuple[bool, ...]

    def edges(self) -> list[tuple[int, int, bool]]:
        m = len(self.vertices)
        return [(self.vertices[k], self.vertices[(k + 1) % m], self.gap[k]) for k in range(m)]

    def gap_edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b, is_gap in self.edges() if is_gap]

    def coords(self, P: SimplePolygon) -> np.ndarray:
        return P.coords[list(self.vertices)]

    def area(self, P: SimplePolygon) -> float:
        return signed_area(self.coords(P))

    def to_dict(self) -> dict:
        return {"viewpoint": list(self.viewpoint), "vertices": list(self.vertices), "gap": list(self.gap)}


def clip_spurious(P: SimplePolygon, vis: VisibilityPolygon, order: Optional[Sequence[int]] = None) -> list[int]:
    """Iteratively cut away spurious vertices of ``vis``.

    Each cut runs along the segment joining the predecessor and successor of a
    spurious vertex and discards the piece away from the viewpoint.  ``order``
    lists positions in ``vis`` giving the processing order (default: boundary
    order).  Returns the surviving polygon vertex ids in boundary order.
    """
    pts = [p for p in vis.points]
    ids = list(vis.vertex_ids)
    alive = list(range(len(pts)))
    todo = list(order) if order is not None else [k for k in range(len(ids)) if ids[k] < 0]
    if sorted(todo) != sorted(k for k in range(len(ids)) if ids[k] < 0):
        raise ValueError("order must list every spurious vertex exactly once")
    g = _as_point(vis.viewpoint)
    for k in todo:
        pos = alive.index(k)
        p = pts[alive[pos - 1]]
        s = pts[alive[(pos + 1) % len(alive)]]
        v = pts[k]
        turn = (v[0] - p[0]) * (s[1] - v[1]) - (v[1] - p[1]) * (s[0] - v[0])
        if turn < -P.eps * P.scale:
            raise GeometryError("spurious vertex is not cut off by its neighbours")
        # the cut keeps the viewpoint's side of segment ps
        gside = (s[0] - p[0]) * (g[1] - p[1]) - (s[1] - p[1]) * (g[0] - p[0])
        if gside < -P.eps * P.scale:
            raise GeometryError("viewpoint lies beyond the cut")
        alive.pop(pos)
    out = [ids[k] for k in alive]
    dedup = [v for i, v in enumerate(out) if v != out[i - 1]] if len(out) > 1 else out
    return dedup


def vertex_limited_visibility_polygon(
    P: SimplePolygon, g: Point, orient: Optional[int] = None, order: Optional[Sequence[int]] = None
) -> VertexLimitedVisibilityPolygon:
    vis = visibility_polygon(P, g, orient)
    verts = clip_spurious(P, vis, order)
    n = P.n
    m = len(verts)
    gap = tuple(verts[(k + 1) % m] != (verts[k] + 1) % n for k in range(m))
    return VertexLimitedVisibilityPolygon(viewpoint=vis.viewpoint, vertices=tuple(verts), gap=gap)


# ---------------------------------------------------------------------------
# diagonals and cropping
# ---------------------------------------------------------------------------


def is_diagonal(P: SimplePolygon, i: int, j: int) -> bool:
    """True iff the open segment p_i p_j lies in the interior of P."""
    n = P.n
    i, j = i % n, j % n
    if i == j or (i + 1) % n == j or (j + 1) % n == i:
        return False
    a, b = P.coords[i], P.coords[j]
    if not _in_cone(P.coords[(i + 1) % n] - a, _cone_angle(P, i), b - a):
        return False
    if not _visible(P, a, b):
        return False
    # strict interior: no other vertex on the open segment
    d = b - a
    L = math.hypot(*d)
    u = d / L
    X = P.coords - a
    side = X[:, 0] * u[1] - X[:, 1] * u[0]
    along = X @ u
    touching = (np.abs(side) <= P.eps) & (along > P.eps) & (along < L - P.eps)
    touching[[i, j]] = False
    if touching.any():
        return False
    # the interior cone test must be strict at both ends
    return _strictly_in_cone(P, i, b - a) and _strictly_in_cone(P, j, a - b)


def _cone_angle(P, i):
    n = P.n
    g = P.coords[i]
    ref = P.coords[(i + 1) % n] - g
    back = P.coords[i - 1] - g
    cone = math.atan2(ref[0] * back[1] - ref[1] * back[0], ref @ back) % (2 * math.pi)
    return cone if cone > 0 else 2 * math.pi


def _strictly_in_cone(P, i, u) -> bool:
    n = P.n
    ref = P.coords[(i + 1) % n] - P.coords[i]
    a = math.atan2(ref[0] * u[1] - ref[1] * u[0], ref @ u) % (2 * math.pi)
    tiny = 1e-12
    return tiny < a < _cone_angle(P, i) - tiny


def crop_indices(P: SimplePolygon, c: Point, i: int, j: int) -> list[int]:
    """Vertex indices (counterclockwise) of the side of diagonal p_i p_j not containing ``c``."""
    n = P.n
    i, j = i % n, j % n
    if not is_diagonal(P, i, j):
        raise GeometryError(f"p{i} p{j} is not an internal diagonal")
    cpt = _as_point(c)
    _require_inside(P, cpt, "c")
    a, b = P.coords[i], P.coords[j]
    dseg, _ = point_segment_distances(cpt[None, :], a[None, :], b[None, :])
    if dseg[0, 0] <= P.eps:
        raise GeometryError("c lies on the cut")
    chain1 = [(i + k) % n for k in range((j - i) % n + 1)]
    chain2 = [(j + k) % n for k in range((i - j) % n + 1)]
    sub1 = P.coords[chain1]
    if _closed_contains(sub1, cpt, P.eps):
        return chain2
    return chain1


def _closed_contains(poly: np.ndarray, p: np.ndarray, eps: float) -> bool:
    if _crossing_parity(p[None, :], poly)[0]:
        return True
    dist, _ = point_segment_distances(p[None, :], poly, np.roll(poly, -1, axis=0))
    return bool(dist.min() <= eps)


def crop(P: SimplePolygon, c: Point, i: int, j: int) -> SimplePolygon:
    """Cut P along the diagonal p_i p_j and keep the part not containing ``c``."""
    return SimplePolygon(P.coords[crop_indices(P, c, i, j)])
