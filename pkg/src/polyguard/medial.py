"""Medial axis of a simple polygon by tracing maximal discs from a convex corner.

The objects of a polygon are its edges (open segments) and its reflex
vertices.  A medial curve is the locus equidistant from two objects:

* two edges  -> a straight bisector (``ee``), or a midline if the edges are parallel (``eep``)
* two vertices -> the perpendicular bisector (``vv``)
* vertex and edge -> a parabola (``ve``)

Every curve is written as ``x(s) = X0 + X1 s + X2 s**2`` so that the parameter
values at which a third object becomes equidistant are roots of at most
quadratic equations.  Tracing a curve means finding the first such root in
the direction of travel.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import GeometryError, ObjectRef, Point, SimplePolygon, point_segment_distances

TIE = 1e-9  # relative tolerance for simultaneous events
ADVANCE = 1e-10  # relative minimum progress along a curve


# ---------------------------------------------------------------------------
# clearance
# ---------------------------------------------------------------------------


def clearance(P: SimplePolygon, x: Point, rel_tol: float = 1e-9) -> tuple[float, list[ObjectRef]]:
    """Distance from ``x`` to the boundary and the objects attaining it."""
    q = np.asarray(x, dtype=float).reshape(1, 2)
    if not P.contains_many(q)[0]:
        raise GeometryError(f"point {tuple(q[0])} lies outside the polygon")
    dist, t = point_segment_distances(q, P.edge_starts, P.edge_ends)
    dist, t = dist[0], t[0]
    r = float(dist.min())
    tol = rel_tol * max(r, P.scale * 1e-3)
    out: set[ObjectRef] = set()
    n = P.n
    lens = np.hypot(*(P.edge_ends - P.edge_starts).T)
    tie_t = 1e-9 * P.scale / lens
    for i in np.flatnonzero(dist <= r + tol):
        if t[i] <= tie_t[i]:
            out.add(ObjectRef("vertex", int(i)))
        elif t[i] >= 1 - tie_t[i]:
            out.add(ObjectRef("vertex", int((i + 1) % n)))
        else:
            out.add(ObjectRef("edge", int(i)))
    # an edge whose foot sits exactly on a reflex endpoint is also touching
    for i in np.flatnonzero(dist <= r + tol):
        if -tie_t[i] <= t[i] <= 1 + tie_t[i] and r > 0:
            out.add(ObjectRef("edge", int(i)))
    return r, sorted(out, key=lambda o: (o.kind, o.index))


def _distance_to(P: SimplePolygon, x: np.ndarray, o: ObjectRef) -> float:
    if o.kind == "vertex":
        return float(np.hypot(*(x - P.coords[o.index])))
    a, b = P.edge(o.index)
    d, _ = point_segment_distances(x[None, :], np.array([a]), np.array([b]))
    return float(d[0, 0])


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------


class _Frame:
    """Per-polygon arrays shared by all curve computations."""

    def __init__(self, P: SimplePolygon):
        self.P = P
        self.A = P.edge_starts
        B = P.edge_ends
        seg = B - self.A
        self.L = np.hypot(seg[:, 0], seg[:, 1])
        self.D = seg / self.L[:, None]
        self.N = np.c_[-self.D[:, 1], self.D[:, 0]]
        self.C = np.einsum("ij,ij->i", self.N, self.A)
        self.reflex = np.flatnonzero(P.reflex_mask())
        self.Q = P.coords[self.reflex]
        self.scale = P.scale


_FRAMES: dict[int, _Frame] = {}


def _frame(P: SimplePolygon) -> _Frame:
    f = _FRAMES.get(id(P))
    if f is None or f.P is not P:
        if len(_FRAMES) > 64:
            _FRAMES.clear()
        f = _FRAMES[id(P)] = _Frame(P)
    return f


@dataclass(frozen=True)
class Curve:
    """A bisector curve of two objects, ``x(s) = X0 + X1 s + X2 s^2``."""

    kind: str  # "ee", "eep", "vv", "ve"
    pair: tuple[ObjectRef, ObjectRef]
    X0: tuple[float, float]
    X1: tuple[float, float]
    X2: tuple[float, float]
    # radius model: ee -> r = s; eep -> r = R; vv -> r = sqrt(h^2 + s^2); ve -> r = ((s-tv)^2 + hv^2) / (2 hv)
    R: float = 0.0
    h: float = 0.0
    tv: float = 0.0
    hv: float = 1.0

    @property
    def curve_kind(self) -> str:
        return "parabolic_arc" if self.kind == "ve" else "line_segment"

    def point(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)[..., None]
        return np.asarray(self.X0) + np.asarray(self.X1) * s + np.asarray(self.X2) * s * s

    def radius(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "ee":
            return s
        if self.kind == "eep":
            return np.full_like(s, self.R)
        if self.kind == "vv":
            return np.sqrt(self.h * self.h + s * s)
        return ((s - self.tv) ** 2 + self.hv**2) / (2 * self.hv)

    def tangent(self, s: float) -> np.ndarray:
        return np.asarray(self.X1) + 2 * np.asarray(self.X2) * s

    def param_at(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if self.kind == "ee":
            # s equals r; recover it along the direction of travel
            w = np.asarray(self.X1)
            return float((x - np.asarray(self.X0)) @ w / (w @ w))
        if self.kind == "ve":
            # the parameter is the coordinate along the edge direction
            nrm = np.asarray(self.X2) * (2 * self.hv)
            d = np.array([nrm[1], -nrm[0]])
            return float((x - np.asarray(self.X0)) @ d)
        t = np.asarray(self.X1)
        return float((x - np.asarray(self.X0)) @ t)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "pair": [repr(o) for o in self.pair],
            "X0": list(self.X0),
            "X1": list(self.X1),
            "X2": list(self.X2),
            "R": self.R,
            "h": self.h,
            "tv": self.tv,
            "hv": self.hv,
        }


def _tup(v) -> tuple[float, float]:
    return (float(v[0]), float(v[1]))


def make_curve(P: SimplePolygon, a: ObjectRef, b: ObjectRef, through: np.ndarray) -> Curve:
    """The bisector curve of objects ``a`` and ``b`` (``through`` fixes the midline of parallel edges)."""
    F = _frame(P)
    if a.kind == "edge" and b.kind == "edge":
        n1, n2 = F.N[a.index], F.N[b.index]
        c1, c2 = F.C[a.index], F.C[b.index]
        det = n1[0] * n2[1] - n1[1] * n2[0]
        if abs(det) <= 1e-12:
            if n1 @ n2 > 0:
                raise GeometryError(f"edges {a} and {b} face the same way")
            R = -(c1 + c2) / 2
            t = F.D[a.index]
            return Curve("eep", (a, b), _tup(through), _tup(t), (0.0, 0.0), R=float(R))
        M = np.array([n1, n2])
        x0 = np.linalg.solve(M, np.array([c1, c2]))
        w = np.linalg.solve(M, np.array([1.0, 1.0]))
        return Curve("ee", (a, b), _tup(x0), _tup(w), (0.0, 0.0))
    if a.kind == "vertex" and b.kind == "vertex":
        p, q = P.coords[a.index], P.coords[b.index]
        m = 0.5 * (p + q)
        d = q - p
        h = 0.5 * math.hypot(*d)
        t = np.array([-d[1], d[0]]) / (2 * h)
        return Curve("vv", (a, b), _tup(m), _tup(t), (0.0, 0.0), h=float(h))
    v, e = (a, b) if a.kind == "vertex" else (b, a)
    A, d, n = F.A[e.index], F.D[e.index], F.N[e.index]
    rel = P.coords[v.index] - A
    tv, hv = float(rel @ d), float(rel @ n)
    if hv <= 0:
        raise GeometryError(f"vertex {v} lies behind edge {e}")
    X2 = n / (2 * hv)
    X1 = d - n * tv / hv
    X0 = A + n * (tv * tv + hv * hv) / (2 * hv)
    return Curve("ve", (a, b), _tup(X0), _tup(X1), _tup(X2), tv=tv, hv=hv)


# ---------------------------------------------------------------------------
# event solving
# ---------------------------------------------------------------------------


def _quad_roots(a, b, c):
    """Real roots of a s^2 + b s + c (vectorized); NaN where absent."""
    a, b, c = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float), np.asarray(c, float))
    r1 = np.full(a.shape, np.nan)
    r2 = np.full(a.shape, np.nan)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.abs(c))
    scale = np.where(scale == 0, 1.0, scale)
    lin = np.abs(a) <= 1e-13 * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(lin & (np.abs(b) > 1e-300), -c / b, r1)
        disc = b * b - 4 * a * c
        ok = ~lin & (disc >= -1e-14 * scale * scale)
        sq = np.sqrt(np.maximum(disc, 0.0))
        qv = -0.5 * (b + np.copysign(sq, b))
        q1 = qv / a
        q2 = np.where(qv != 0, c / qv, q1)
    r1 = np.where(ok, q1, r1)
    r2 = np.where(ok, q2, r2)
    return r1, r2


@dataclass(frozen=True)
class Event:
    s: float
    kind: str  # "line", "vertex", "foot", "wedge", "leaf"
    obj: Optional[ObjectRef]


def _foot_poly(curve: Curve, A, D):
    """Coefficients of u(s) = (x(s) - A) . D for one or many (A, D)."""
    X0, X1, X2 = (np.asarray(v) for v in (curve.X0, curve.X1, curve.X2))
    return (D @ X2, D @ X1, (X0 - A) @ D.T if D.ndim == 1 else np.einsum("ij,ij->i", X0[None, :] - A, D))


def _events(P: SimplePolygon, curve: Curve, s0: float, direction: int, edge_mask=None, vertex_mask=None) -> list[Event]:
    F = _frame(P)
    n = P.n
    eps_s = ADVANCE * F.scale
    X0, X1, X2 = (np.asarray(v) for v in (curve.X0, curve.X1, curve.X2))
    out: list[Event] = []

    def push(svals, kind, objs, valid):
        for s, o, ok in zip(np.atleast_1d(svals), objs, np.atleast_1d(valid)):
            if ok and np.isfinite(s) and (s - s0) * direction > eps_s:
                out.append(Event(float(s), kind, o))

    pair_edges = [o.index for o in curve.pair if o.kind == "edge"]
    pair_verts = [o.index for o in curve.pair if o.kind == "vertex"]
    # third edges
    emask = np.ones(n, dtype=bool) if edge_mask is None else np.array(edge_mask, dtype=bool).copy()
    for i in pair_edges:
        emask[i] = False
    for v in pair_verts:
        emask[v] = False
        emask[(v - 1) % n] = False
    idx = np.flatnonzero(emask)
    if idx.size:
        N3, C3 = F.N[idx], F.C[idx]
        a0 = N3 @ X0 - C3
        a1 = N3 @ X1
        a2 = N3 @ X2
        if curve.kind == "ee":
            with np.errstate(divide="ignore", invalid="ignore"):
                roots = [(-a0) / (a1 - 1.0)]
        elif curve.kind == "eep":
            with np.errstate(divide="ignore", invalid="ignore"):
                roots = [(curve.R - a0) / a1]
        elif curve.kind == "vv":
            r1, r2 = _quad_roots(a1 * a1 - 1.0, 2 * a0 * a1, a0 * a0 - curve.h**2)
            roots = [r1, r2]
        else:
            k = 1.0 / (2 * curve.hv)
            r1, r2 = _quad_roots(a2 - k, a1 + 2 * k * curve.tv, a0 - k * (curve.tv**2 + curve.hv**2))
            roots = [r1, r2]
        objs = [ObjectRef("edge", int(i)) for i in idx]
        for s in roots:
            # roots of degenerate equations come out inf or nan and are rejected below
            with np.errstate(invalid="ignore", over="ignore"):
                pts = X0[None, :] + X1[None, :] * s[:, None] + X2[None, :] * (s * s)[:, None]
                u = np.einsum("ij,ij->i", pts - F.A[idx], F.D[idx])
                sd = np.einsum("ij,ij->i", pts, N3) - C3
                r = curve.radius(np.nan_to_num(s))
                slack = 1e-12 * F.scale
                valid = (u >= -slack) & (u <= F.L[idx] + slack) & (sd > 0) & (np.abs(sd - r) <= 1e-6 * F.scale)
            if curve.kind == "ee":
                valid &= s > 0
            push(s, "line", objs, valid)
    # third reflex vertices
    vmask = np.ones(F.reflex.size, dtype=bool) if vertex_mask is None else np.array(
        [bool(vertex_mask[v]) for v in F.reflex], dtype=bool
    )
    excl = set(pair_verts)
    for i in pair_edges:
        excl.update((i, (i + 1) % n))
    for k, v in enumerate(F.reflex):
        if v in excl:
            vmask[k] = False
    kidx = np.flatnonzero(vmask)
    if kidx.size:
        Q = F.Q[kidx]
        objs = [ObjectRef("vertex", int(F.reflex[k])) for k in kidx]
        if curve.kind == "ee":
            w = X1
            dq = X0[None, :] - Q
            r1, r2 = _quad_roots(np.full(len(kidx), w @ w - 1.0), 2 * dq @ w, np.einsum("ij,ij->i", dq, dq))
            for s in (r1, r2):
                push(s, "vertex", objs, s > 0)
        elif curve.kind == "eep":
            dq = X0[None, :] - Q
            r1, r2 = _quad_roots(np.ones(len(kidx)), 2 * dq @ X1, np.einsum("ij,ij->i", dq, dq) - curve.R**2)
            for s in (r1, r2):
                push(s, "vertex", objs, np.ones(len(kidx), bool))
        elif curve.kind == "vv":
            dq = X0[None, :] - Q
            with np.errstate(divide="ignore", invalid="ignore"):
                s = (curve.h**2 - np.einsum("ij,ij->i", dq, dq)) / (2 * dq @ X1)
            push(s, "vertex", objs, np.ones(len(kidx), bool))
        else:
            e = next(o for o in curve.pair if o.kind == "edge").index
            rel = Q - F.A[e]
            tq, hq = rel @ F.D[e], rel @ F.N[e]
            kk = hq / curve.hv
            r1, r2 = _quad_roots(1 - kk, -2 * tq + 2 * kk * curve.tv, tq * tq + hq * hq - kk * (curve.tv**2 + curve.hv**2))
            for s in (r1, r2):
                push(s, "vertex", objs, hq > 0)
    # a pair edge's foot leaving the segment; reaching a shared convex corner is the leaf event
    leaf_corner = set()
    if curve.kind == "ee" and direction < 0:
        a, b = curve.pair
        leaf_corner = {a.index, (a.index + 1) % n} & {b.index, (b.index + 1) % n}
        leaf_corner = {v for v in leaf_corner if not P.is_reflex(v)}
    for i in pair_edges:
        c2, c1, c0 = X2 @ F.D[i], X1 @ F.D[i], (X0 - F.A[i]) @ F.D[i]
        for target, vtx in ((0.0, i), (F.L[i], (i + 1) % n)):
            r1, r2 = _quad_roots(c2, c1, c0 - target)
            for s in (r1, r2):
                if np.isfinite(s):
                    # only count exits: the derivative must point outward
                    du = c1 + 2 * c2 * s
                    outward = du * direction < 0 if target == 0.0 else du * direction > 0
                    if outward and vtx not in leaf_corner:
                        push([s], "foot", [ObjectRef("vertex", int(vtx))], [True])
    # a pair vertex's wedge of nearest points being left through an incident edge normal
    for v in pair_verts:
        for e, target, sign in (((v - 1) % n, None, +1), (v, 0.0, -1)):
            tgt = F.L[e] if target is None else 0.0
            c2, c1, c0 = X2 @ F.D[e], X1 @ F.D[e], (X0 - F.A[e]) @ F.D[e]
            r1, r2 = _quad_roots(c2, c1, c0 - tgt)
            for s in (r1, r2):
                if np.isfinite(s):
                    du = c1 + 2 * c2 * s
                    # leaving the wedge means the foot on e moves back inside the segment
                    entering = du * direction < 0 if sign > 0 else du * direction > 0
                    if entering:
                        push([s], "wedge", [ObjectRef("edge", int(e))], [True])
    # shrinking to a convex corner
    if curve.kind == "ee" and direction < 0:
        a, b = curve.pair
        shared = {a.index, (a.index + 1) % n} & {b.index, (b.index + 1) % n}
        if shared and s0 > 0:
            v = shared.pop()
            if not P.is_reflex(v):
                out.append(Event(0.0, "leaf", ObjectRef("vertex", v)))
    return out


# ---------------------------------------------------------------------------
# nodes and edges
# ---------------------------------------------------------------------------


@dataclass
class MedialNode:
    position: Point
    clearance: float
    defining_objects: frozenset
    is_leaf: bool = False
    vertex: int = -1  # polygon vertex for leaves

    def to_dict(self) -> dict:
        return {
            "position": list(self.position),
            "clearance": self.clearance,
            "objects": sorted(repr(o) for o in self.defining_objects),
            "leaf": self.is_leaf,
            "vertex": self.vertex,
        }


@dataclass
class MedialEdge:
    endpoints: tuple[int, int]
    curve: Curve
    params: tuple[float, float]

    @property
    def curve_kind(self) -> str:
        return self.curve.curve_kind

    @property
    def defining_pair(self) -> tuple[ObjectRef, ObjectRef]:
        return self.curve.pair

    def sample(self, k: int = 10, include_ends: bool = False) -> np.ndarray:
        s0, s1 = self.params
        if include_ends:
            ts = np.linspace(s0, s1, k)
        else:
            ts = s0 + (s1 - s0) * (np.arange(1, k + 1) / (k + 1))
        return self.curve.point(ts)

    def to_dict(self) -> dict:
        return {"endpoints": list(self.endpoints), "kind": self.curve_kind, "curve": self.curve.to_dict(), "params": list(self.params)}


@dataclass
class MedialAxis:
    nodes: list[MedialNode] = field(default_factory=list)
    edges: list[MedialEdge] = field(default_factory=list)

    @property
    def diameter(self) -> int:
        return unweighted_diameter(self)

    def adjacency(self) -> dict[int, list[int]]:
        adj = {i: [] for i in range(len(self.nodes))}
        for e in self.edges:
            a, b = e.endpoints
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def leaves(self) -> list[int]:
        return [i for i, nd in enumerate(self.nodes) if nd.is_leaf]

    def to_dict(self) -> dict:
        return {
            "nodes": [nd.to_dict() for nd in self.nodes],
            "edges": [e.to_dict() for e in self.edges],
            "diameter": self.diameter,
        }


def _contact(P: SimplePolygon, x: np.ndarray, o: ObjectRef) -> np.ndarray:
    if o.kind == "vertex":
        return P.coords[o.index]
    F = _frame(P)
    u = np.clip((x - F.A[o.index]) @ F.D[o.index], 0.0, F.L[o.index])
    return F.A[o.index] + u * F.D[o.index]


def _is_endpoint_pair(P: SimplePolygon, a: ObjectRef, b: ObjectRef) -> bool:
    if a.kind == b.kind:
        return False
    v, e = (a, b) if a.kind == "vertex" else (b, a)
    return v.index in (e.index, (e.index + 1) % P.n)


@dataclass
class Sector:
    pair: tuple[ObjectRef, ObjectRef]
    mid: np.ndarray  # unit direction into the sector


def _pick_member(P: SimplePolygon, group: list[ObjectRef], mid: np.ndarray) -> ObjectRef:
    """Member of a coincident contact group that is nearest when moving along ``mid``.

    A group is an edge together with its endpoint vertex.  Moving so that the
    edge's foot slides back into the segment keeps the edge nearest;
    otherwise the vertex is.
    """
    if len(group) == 1:
        return group[0]
    F = _frame(P)
    edges = [o for o in group if o.kind == "edge"]
    verts = [o for o in group if o.kind == "vertex"]
    if len(edges) != 1 or len(verts) != 1:
        raise GeometryError(f"unexpected coincident contacts {group}")
    e, v = edges[0], verts[0]
    slide = F.D[e.index] @ mid
    inward = slide > 0 if v.index == e.index else slide < 0
    return e if inward else v


def node_sectors(P: SimplePolygon, x: np.ndarray, objects) -> list[Sector]:
    """Consecutive object pairs around ``x`` (counterclockwise by contact direction).

    An edge whose foot coincides with its own endpoint vertex forms one
    contact; each side of that contact is assigned to whichever of the two
    objects is nearest there.
    """
    groups: list[list[ObjectRef]] = []
    points: list[np.ndarray] = []
    for o in sorted(objects, key=lambda o: (o.kind, o.index)):
        c = _contact(P, x, o)
        for k, g in enumerate(groups):
            # an edge and its own endpoint never bound a sector; the foot may race
            # along the edge near such a node, so no distance test is applied
            if any(_is_endpoint_pair(P, o, q) for q in g):
                g.append(o)
                if o.kind == "vertex":
                    points[k] = c
                break
        else:
            groups.append([o])
            points.append(c)
    ang = [math.atan2(*(c - x)[::-1]) for c in points]
    order = sorted(range(len(groups)), key=lambda k: ang[k])
    out = []
    m = len(order)
    for k in range(m):
        i, j = order[k], order[(k + 1) % m]
        gap = (ang[j] - ang[i]) % (2 * math.pi)
        if gap == 0:
            gap = 2 * math.pi
        mid_ang = ang[i] + gap / 2
        mid = np.array([math.cos(mid_ang), math.sin(mid_ang)])
        a = _pick_member(P, groups[i], mid)
        b = _pick_member(P, groups[j], mid)
        if a == b:
            continue
        out.append(Sector((a, b), mid))
    return out


@dataclass
class TraceResult:
    position: np.ndarray
    clearance: float
    objects: frozenset
    is_leaf: bool
    vertex: int
    curve: Curve
    params: tuple[float, float]
    arrival: np.ndarray  # unit direction from the new node back along the curve


def _start(P, x, pair, direction_hint):
    curve = make_curve(P, pair[0], pair[1], x)
    s0 = curve.param_at(x)
    tan = curve.tangent(s0)
    direction = 1 if tan @ direction_hint >= 0 else -1
    return curve, s0, direction


def trace_from(
    P: SimplePolygon,
    x: Point,
    pair: tuple[ObjectRef, ObjectRef],
    direction_hint,
    edge_mask=None,
    vertex_mask=None,
    exclude=frozenset(),
) -> TraceResult:
    """Follow the bisector of ``pair`` from ``x`` in the direction closest to ``direction_hint``.

    Objects in ``exclude`` already touch the disc at ``x``; their events
    within rounding distance of ``x`` are noise and are dropped.
    """
    x = np.asarray(x, dtype=float)
    curve, s0, direction = _start(P, x, pair, np.asarray(direction_hint, dtype=float))
    events = _events(P, curve, s0, direction, edge_mask, vertex_mask)
    if exclude:
        close = 5e-9 * _frame(P).scale
        events = [e for e in events if not (e.obj in exclude and np.hypot(*(curve.point(e.s) - x)) <= close)]
    if not events:
        raise GeometryError(f"no event along {curve.kind} bisector of {pair}")
    leaf = [e for e in events if e.kind == "leaf"]
    best = min(events, key=lambda e: (e.s - s0) * direction)
    tie = TIE * _frame(P).scale * 10
    if leaf and (leaf[0].s - s0) * direction <= (best.s - s0) * direction + tie:
        v = leaf[0].obj.index
        pos = P.coords[v].copy()
        arrival = -curve.tangent(0.0) * direction
        return TraceResult(pos, 0.0, frozenset(pair), True, v, curve, (s0, 0.0), _unit(arrival))
    s1 = best.s
    pos = curve.point(s1)
    near = TIE * 2 * _frame(P).scale
    # simultaneous events are judged by position; the parameter speed varies along a curve
    tied = [e for e in events if e.kind != "leaf" and np.hypot(*(curve.point(e.s) - pos)) <= near]
    objs = set(pair)
    for e in tied:
        objs.add(e.obj)
    r = float(curve.radius(s1))
    arrival = -curve.tangent(s1) * direction
    return TraceResult(pos, r, frozenset(objs), False, -1, curve, (s0, s1), _unit(arrival))


def _unit(v):
    v = np.asarray(v, dtype=float)
    L = math.hypot(*v)
    return v / L if L > 0 else v


def trace_adjacent_node(P: SimplePolygon, node: MedialNode, pair, direction=None, **masks) -> MedialNode:
    """Next medial node from ``node`` along the bisector of a consecutive pair of its objects."""
    x = np.asarray(node.position, dtype=float)
    pair = tuple(pair)
    if node.is_leaf:
        n = P.n
        v = node.vertex
        expect = {ObjectRef("edge", (v - 1) % n), ObjectRef("edge", v)}
        if set(pair) != expect:
            raise GeometryError("pair does not define this leaf")
        hint = _leaf_direction(P, v)
    else:
        secs = [s for s in node_sectors(P, x, node.defining_objects) if set(s.pair) == set(pair)]
        if not secs:
            raise GeometryError(f"{pair} is not a consecutive pair at this node")
        if direction is not None:
            secs.sort(key=lambda s: -(s.mid @ np.asarray(direction, float)))
        hint = secs[0].mid
    exclude = frozenset() if node.is_leaf else node.defining_objects
    res = trace_from(P, x, pair, hint, exclude=exclude, **masks)
    return MedialNode(_tup(res.position), res.clearance, res.objects, res.is_leaf, res.vertex)


def _leaf_direction(P: SimplePolygon, v: int) -> np.ndarray:
    n = P.n
    a = P.coords[(v + 1) % n] - P.coords[v]
    b = P.coords[v - 1] - P.coords[v]
    return _unit(_unit(a) + _unit(b))


def leaf_node(P: SimplePolygon, v: int) -> MedialNode:
    n = P.n
    if P.is_reflex(v):
        raise GeometryError("reflex vertices are not medial leaves")
    objs = frozenset({ObjectRef("edge", (v - 1) % n), ObjectRef("edge", v)})
    return MedialNode(P.vertices[v], 0.0, objs, True, v)


def medial_axis(P: SimplePolygon) -> MedialAxis:
    """Medial axis tree, traced breadth-first from the lowest-index convex vertex."""
    M = MedialAxis()
    convex = P.convex_vertices()
    if not convex:
        raise GeometryError("polygon has no convex vertex")
    leaf_ids: dict[int, int] = {}
    pending: dict[int, list[Sector]] = {}
    tol_pos = 5e-9 * P.scale

    def add_node(res_pos, r, objs, is_leaf, vertex) -> int:
        if is_leaf:
            if vertex in leaf_ids:
                return leaf_ids[vertex]
            M.nodes.append(MedialNode(_tup(res_pos), 0.0, objs, True, vertex))
            k = len(M.nodes) - 1
            leaf_ids[vertex] = k
            pending[k] = []
            return k
        for k, nd in enumerate(M.nodes):
            if not nd.is_leaf and math.hypot(nd.position[0] - res_pos[0], nd.position[1] - res_pos[1]) <= tol_pos:
                return k
        M.nodes.append(MedialNode(_tup(res_pos), r, objs, False, -1))
        k = len(M.nodes) - 1
        pending[k] = node_sectors(P, np.asarray(res_pos), objs)
        return k

    v0 = convex[0]
    start = leaf_node(P, v0)
    M.nodes.append(start)
    leaf_ids[v0] = 0
    pending[0] = []
    queue = deque()
    n = P.n
    queue.append((0, (ObjectRef("edge", (v0 - 1) % n), ObjectRef("edge", v0)), _leaf_direction(P, v0)))
    guard = 0
    while queue:
        guard += 1
        if guard > 50 * n + 100:
            raise GeometryError("medial axis tracing did not terminate")
        k, pair, hint = queue.popleft()
        x = np.asarray(M.nodes[k].position)
        exclude = frozenset() if M.nodes[k].is_leaf else M.nodes[k].defining_objects
        res = trace_from(P, x, pair, hint, exclude=exclude)
        j = add_node(res.position, res.clearance, res.objects, res.is_leaf, res.vertex)
        if j == k:
            raise GeometryError("tracing returned to its start node")
        M.edges.append(MedialEdge((k, j), res.curve, res.params))
        # the sector we arrived through is already traced
        secs = pending.get(j, [])
        match = [s for s in secs if set(s.pair) == set(pair)]
        if match:
            best = max(match, key=lambda s: s.mid @ res.arrival)
            secs.remove(best)
        elif not res.is_leaf:
            raise GeometryError(f"arrival pair {pair} not found at node {j}")
        for s in list(secs):
            queue.append((j, s.pair, s.mid))
        pending[j] = []
    return M


def unweighted_diameter(M: MedialAxis) -> int:
    """Edge count of a longest path, by two breadth-first sweeps."""
    if not M.nodes:
        raise ValueError("empty medial axis")
    adj = M.adjacency()

    def far(src):
        dist = {src: 0}
        q = deque([src])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    q.append(w)
        u = max(dist, key=lambda k: (dist[k], -k))
        return u, dist[u]

    a, _ = far(0)
    _, d = far(a)
    return d


def tree_diameter(adj: dict) -> int:
    """Edge-count diameter of any tree given as an adjacency dict."""
    if not adj:
        return 0
    start = next(iter(adj))

    def far(src):
        dist = {src: 0}
        q = deque([src])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    q.append(w)
        u = max(dist, key=lambda k: dist[k])
        return u, dist[u]

    a, _ = far(start)
    return far(a)[1]
