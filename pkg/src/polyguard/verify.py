"""Checkers for guard placements: connectivity, coverage, minimality, brute force on tiny polygons."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .geometry import GeometryError, SimplePolygon, _crossing_parity, points_visible, signed_area, visibility_polygon


@dataclass
class VisibilityGraph:
    nodes: list[int]
    edges: list[tuple[int, int]]

    def adjacency(self) -> dict[int, list[int]]:
        adj = {v: [] for v in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def components(self) -> int:
        adj = self.adjacency()
        seen, comps = set(), 0
        for v in self.nodes:
            if v in seen:
                continue
            comps += 1
            stack = [v]
            seen.add(v)
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return comps

    @property
    def diameter(self) -> int:
        """Largest hop distance between two guards (-1 when disconnected)."""
        if not self.nodes:
            return 0
        adj = self.adjacency()
        best = 0
        for s in self.nodes:
            dist = {s: 0}
            q = deque([s])
            while q:
                u = q.popleft()
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        q.append(w)
            if len(dist) < len(self.nodes):
                return -1
            best = max(best, max(dist.values()))
        return best


def _pts(guards) -> np.ndarray:
    g = getattr(guards, "guards", guards)
    return np.asarray(g, dtype=float).reshape(-1, 2)


def _unique(G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct guard positions and, per guard, the index of its position."""
    uniq, inv = np.unique(G, axis=0, return_inverse=True)
    return uniq, inv.reshape(-1)


def visibility_graph(P: SimplePolygon, guards, exhaustive: bool = False) -> VisibilityGraph:
    """Visibility graph of the guards.

    Guards sharing a position see each other.  Between distinct positions
    the direct segment predicate decides, except that a guard sitting on a
    polygon vertex is resolved through the vertex list of the other guard's
    visibility polygon (much cheaper, same answer) unless ``exhaustive``.
    """
    G = _pts(guards)
    if len(G) and not P.contains_many(G).all():
        raise GeometryError("a guard lies outside the polygon")
    U, inv = _unique(G)
    vid = [P.locate(tuple(u)) for u in U]
    vsets = {}
    if not exhaustive:
        for k, u in enumerate(U):
            vsets[k] = {v for v in visibility_polygon(P, u).vertex_ids if v >= 0}
    sees = np.eye(len(U), dtype=bool)
    for a, b in itertools.combinations(range(len(U)), 2):
        if not exhaustive and vid[b][0] == "vertex":
            ok = vid[b][1] in vsets[a]
        elif not exhaustive and vid[a][0] == "vertex":
            ok = vid[a][1] in vsets[b]
        else:
            ok = points_visible(P, U[a], U[b], check=False)
        sees[a, b] = sees[b, a] = ok
    edges = [(i, j) for i, j in itertools.combinations(range(len(G)), 2) if sees[inv[i], inv[j]]]
    return VisibilityGraph(list(range(len(G))), edges)


def check_connected(P: SimplePolygon, guards) -> tuple[bool, VisibilityGraph]:
    vg = visibility_graph(P, guards)
    return vg.components() <= 1, vg


@dataclass
class CoverageReport:
    vertex_covered: bool
    uncovered_vertices: list[int]
    samples: int
    uncovered_samples: list[tuple[float, float]] = field(default_factory=list)
    exact_area_gap: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.vertex_covered and not self.uncovered_samples

    def summary(self) -> str:
        return (
            f"vertices: {'all seen' if self.vertex_covered else 'unseen ' + str(self.uncovered_vertices)}; "
            f"samples: {len(self.uncovered_samples)} of {self.samples} unseen"
        )


def sample_interior(P: SimplePolygon, k: int, seed: int = 0) -> np.ndarray:
    """``k`` stratified uniform points inside P (one jittered point per grid cell, then thinned)."""
    if k <= 0:
        return np.zeros((0, 2))
    rng = np.random.default_rng(seed)
    lo, hi = P.coords.min(axis=0), P.coords.max(axis=0)
    span = hi - lo
    frac = P.area / float(span[0] * span[1])
    cells = int(np.ceil(np.sqrt(1.3 * k / frac)))
    while True:
        gx, gy = np.meshgrid(np.arange(cells), np.arange(cells), indexing="ij")
        base = np.c_[gx.ravel(), gy.ravel()].astype(float)
        pts = lo + (base + rng.random(base.shape)) * span / cells
        inside = pts[_crossing_parity(pts, P.coords)]
        if len(inside) >= k:
            idx = np.linspace(0, len(inside) - 1, k).round().astype(int)
            return inside[idx]
        cells = int(cells * 1.3) + 1


def check_coverage(P: SimplePolygon, guards, samples: int = 10000, seed: int = 0) -> CoverageReport:
    """Exact vertex check plus a one-sided Monte Carlo check on interior samples."""
    G = _unique(_pts(guards))[0]
    n = P.n
    seen = np.zeros(n, dtype=bool)
    polys = []
    for g in G:
        vis = visibility_polygon(P, g)
        polys.append(vis.points)
        ids = [v for v in vis.vertex_ids if v >= 0]
        seen[ids] = True
    # a vertex missing from every visibility polygon is confirmed with the direct predicate
    for v in np.flatnonzero(~seen):
        if any(points_visible(P, g, P.coords[v], check=False) for g in G):
            seen[v] = True
    S = sample_interior(P, samples, seed)
    left = np.ones(len(S), dtype=bool)
    for poly in polys:
        if not left.any():
            break
        idx = np.flatnonzero(left)
        hit = _crossing_parity(S[idx], poly)
        left[idx[hit]] = False
    missing = []
    for q in S[left]:
        if not any(points_visible(P, g, q, check=False) for g in G):
            missing.append((float(q[0]), float(q[1])))
    return CoverageReport(bool(seen.all()), [int(v) for v in np.flatnonzero(~seen)], len(S), missing)


def _vertex_sets(P: SimplePolygon, G: np.ndarray) -> list[set]:
    out = []
    for g in G:
        vis = visibility_polygon(P, g)
        out.append({v for v in vis.vertex_ids if v >= 0})
    return out


def check_minimal_v_config(P: SimplePolygon, guards) -> bool:
    """True iff every guard is needed for connectivity or for seeing some polygon vertex."""
    G = _pts(guards)
    ok, vg = check_connected(P, G)
    sets = _vertex_sets(P, G)
    everything = set(range(P.n))
    if not ok or set().union(*sets) != everything:
        raise ValueError("placement must be connected and see every vertex")
    adj = vg.adjacency()
    for v in range(len(G)):
        rest = [u for u in range(len(G)) if u != v]
        if not rest:
            continue
        seen_rest = set().union(*(sets[u] for u in rest))
        if seen_rest != everything:
            continue
        # connectivity of the remaining guards
        start = rest[0]
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w != v and w not in comp:
                    comp.add(w)
                    stack.append(w)
        if len(comp) == len(rest):
            return False
    return True


@dataclass
class BruteForceResult:
    min_count: int
    witness: list[int]
    max_minimal_diameter: int
    minimal_configurations: int


def vertex_visibility_matrix(P: SimplePolygon) -> np.ndarray:
    n = P.n
    M = np.eye(n, dtype=bool)
    for i in range(n):
        vis = visibility_polygon(P, P.coords[i])
        for v in vis.vertex_ids:
            if v >= 0:
                M[i, v] = True
    return M | M.T


def _connected_mask(mask: int, nbr: list[int]) -> bool:
    if mask == 0:
        return False
    low = mask & -mask
    comp = low
    frontier = low
    while frontier:
        i = frontier.bit_length() - 1
        frontier &= ~(1 << i)
        new = nbr[i] & mask & ~comp
        comp |= new
        frontier |= new
    return comp == mask


def _mask_diameter(mask: int, nbr: list[int]) -> int:
    members = [i for i in range(mask.bit_length()) if mask >> i & 1]
    best = 0
    for s in members:
        dist = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            m = nbr[u] & mask
            for w in members:
                if m >> w & 1 and w not in dist:
                    dist[w] = dist[u] + 1
                    q.append(w)
        best = max(best, max(dist.values()))
    return best


def brute_force_connected_vertex_guards(P: SimplePolygon, samples: int = 2000, seed: int = 0) -> BruteForceResult:
    """Exhaustive search over vertex subsets (n <= 12).

    The optimum is the smallest connected vertex set covering the polygon
    (vertices plus ``samples`` interior points).  The diameter estimate is
    the largest visibility-graph diameter over all minimal configurations
    in the vertex-coverage sense.
    """
    n = P.n
    if n > 12:
        raise ValueError("brute force is limited to n <= 12")
    V = vertex_visibility_matrix(P)
    nbr = [sum(1 << j for j in range(n) if V[i, j] and j != i) for i in range(n)]
    sees_v = [sum(1 << j for j in range(n) if V[i, j]) for i in range(n)]
    S = sample_interior(P, samples, seed)
    sees_s = []
    for i in range(n):
        vis = visibility_polygon(P, P.coords[i])
        inside = _crossing_parity(S, vis.points)
        sees_s.append(int("".join("1" if b else "0" for b in inside[::-1]) or "0", 2))
    full_v = (1 << n) - 1
    full_s = (1 << len(S)) - 1
    best: Optional[int] = None
    max_diam = 0
    count = 0
    for mask in range(1, 1 << n):
        if not _connected_mask(mask, nbr):
            continue
        vcov = 0
        scov = 0
        for i in range(n):
            if mask >> i & 1:
                vcov |= sees_v[i]
                scov |= sees_s[i]
        if vcov != full_v:
            continue
        if scov == full_s and (best is None or bin(mask).count("1") < bin(best).count("1")):
            best = mask
        minimal = True
        for i in range(n):
            if not mask >> i & 1:
                continue
            rest = mask & ~(1 << i)
            rv = 0
            for j in range(n):
                if rest >> j & 1:
                    rv |= sees_v[j]
            if rest and rv == full_v and _connected_mask(rest, nbr):
                minimal = False
                break
        if minimal:
            count += 1
            max_diam = max(max_diam, _mask_diameter(mask, nbr))
    if best is None:
        raise GeometryError("no connected vertex guard set covers the polygon")
    witness = [i for i in range(n) if best >> i & 1]
    return BruteForceResult(len(witness), witness, max_diam, count)


def territory_partition(P: SimplePolygon, regions: Sequence[np.ndarray]) -> tuple[float, float]:
    """Relative area residual of a claimed partition and the largest pairwise overlap area."""
    import shapely
    from shapely.geometry import Polygon

    polys = [Polygon(r) for r in regions]
    total = sum(signed_area(r) for r in regions)
    residual = abs(total - P.area) / P.area
    tree = shapely.STRtree(polys)
    worst = 0.0
    for i, p in enumerate(polys):
        for j in tree.query(p):
            if j > i:
                worst = max(worst, p.intersection(polys[j]).area)
    return residual, worst / P.area
