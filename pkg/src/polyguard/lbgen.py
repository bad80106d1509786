"""Tree-shaped polygons: embed a complete tree with no straight-through joints, then thicken it.

The embedding puts depth-q nodes on the circle of radius 3**q.  Every
internal node first gets delta + 1 children spread evenly over its angular
cone and then drops the child whose edge is closest to continuing the
grandparent-to-parent edge in a straight line.  The thickened polygon is the
epsilon-neighbourhood of the embedded tree with every circular arc of its
boundary replaced by the chord joining the arc's endpoints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryError, SimplePolygon, point_segment_distances


@dataclass
class TreeEmbedding:
    delta: int
    height: int
    parent: list[int]
    depth: list[int]
    positions: np.ndarray
    radii: tuple[float, ...]

    @property
    def size(self) -> int:
        return len(self.parent)

    def children(self, v: int) -> list[int]:
        return [u for u, p in enumerate(self.parent) if p == v]

    def edges(self) -> list[tuple[int, int]]:
        return [(p, u) for u, p in enumerate(self.parent) if p >= 0]

    def adjacency(self) -> dict[int, list[int]]:
        adj = {v: [] for v in range(self.size)}
        for a, b in self.edges():
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def diameter(self) -> int:
        from .medial import tree_diameter

        return tree_diameter(self.adjacency())


def embed_tree(delta: int, h: int) -> TreeEmbedding:
    if delta < 2 or delta % 2:
        raise ValueError("delta must be an even integer >= 2")
    if h < 1:
        raise ValueError("height must be at least 1")
    radii = tuple(3.0**q for q in range(1, h + 1))
    parent = [-1]
    depth = [0]
    pos = [(0.0, 0.0)]
    cone = [(0.0, 2 * math.pi)]
    frontier = [0]
    for q in range(1, h + 1):
        nxt = []
        for v in frontier:
            lo, hi = cone[v]
            k = delta + 1
            width = (hi - lo) / k
            cand = []
            for c in range(k):
                a = lo + (c + 0.5) * width
                cand.append((a, (lo + c * width, lo + (c + 1) * width)))
            if parent[v] < 0:
                drop = k - 1
            else:
                g = np.asarray(pos[parent[v]])
                pv = np.asarray(pos[v])
                incoming = pv - g
                incoming = incoming / np.hypot(*incoming)
                best, drop = -2.0, 0
                for c, (a, _) in enumerate(cand):
                    out = np.array([radii[q - 1] * math.cos(a), radii[q - 1] * math.sin(a)]) - pv
                    cosang = (out @ incoming) / np.hypot(*out)
                    if cosang > best:
                        best, drop = cosang, c
            for c, (a, sub) in enumerate(cand):
                if c == drop:
                    continue
                parent.append(v)
                depth.append(q)
                pos.append((radii[q - 1] * math.cos(a), radii[q - 1] * math.sin(a)))
                cone.append(sub)
                nxt.append(len(parent) - 1)
        frontier = nxt
    return TreeEmbedding(delta, h, parent, depth, np.array(pos), radii)


def _segments_clearance(E: TreeEmbedding) -> float:
    """Smallest distance between two embedded edges that share no node."""
    edges = E.edges()
    P = E.positions
    best = math.inf
    for i, (a, b) in enumerate(edges):
        for c, d in edges[i + 1 :]:
            if {a, b} & {c, d}:
                continue
            pts = np.array([P[a], P[b]])
            d1, _ = point_segment_distances(pts, P[[c]], P[[d]])
            pts2 = np.array([P[c], P[d]])
            d2, _ = point_segment_distances(pts2, P[[a]], P[[b]])
            best = min(best, float(d1.min()), float(d2.min()))
    return best


def max_epsilon(E: TreeEmbedding) -> float:
    lens = [float(np.hypot(*(E.positions[a] - E.positions[b]))) for a, b in E.edges()]
    return 0.5 * min(min(lens), _segments_clearance(E))


@dataclass
class ThickenedPolygon:
    polygon: SimplePolygon
    epsilon: float
    source: TreeEmbedding
    chambers: dict = field(default_factory=dict)  # tree node -> polygon vertex ids around it
    corridors: dict = field(default_factory=dict)  # tree edge -> polygon vertex ids bounding it

    def annotations(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta": self.source.delta,
            "height": self.source.height,
            "tree_nodes": self.source.size,
            "tree_diameter": self.source.diameter(),
            "chambers": {str(k): v for k, v in self.chambers.items()},
            "corridors": {f"{a}-{b}": v for (a, b), v in self.corridors.items()},
        }


def _rot(d, sign):
    return np.array([-d[1], d[0]]) * sign


def thicken(E: TreeEmbedding, epsilon: float) -> ThickenedPolygon:
    """Boundary of the epsilon-neighbourhood of the embedded tree, arcs flattened to chords."""
    limit = max_epsilon(E)
    if not (0 < epsilon < limit):
        raise GeometryError(f"epsilon must lie in (0, {limit:.6g}) for this embedding")
    pos = E.positions
    adj = E.adjacency()
    order = {}
    for v, nb in adj.items():
        ang = [math.atan2(*(pos[u] - pos[v])[::-1]) for u in nb]
        order[v] = [u for _, u in sorted(zip(ang, nb))]

    def corner(v, u, w):
        """Boundary points at v between edge v->u and the next edge v->w counterclockwise."""
        d1 = pos[u] - pos[v]
        d1 = d1 / np.hypot(*d1)
        d2 = pos[w] - pos[v]
        d2 = d2 / np.hypot(*d2)
        gap = (math.atan2(d2[1], d2[0]) - math.atan2(d1[1], d1[0])) % (2 * math.pi)
        if u == w:
            gap = 2 * math.pi
        a = pos[v] + epsilon * _rot(d1, +1)
        b = pos[v] + epsilon * _rot(d2, -1)
        if gap < math.pi:
            # offset lines meet at a single point
            M = np.array([d1, -d2]).T
            t = np.linalg.solve(M, b - a)
            return [a + t[0] * d1]
        return [a, b]

    ring: list[np.ndarray] = []
    owner: list[int] = []
    via: list[tuple[int, int]] = []
    root = 0
    start_u = order[root][0]
    # Euler tour: arrive at v from u, leave towards the next neighbour counterclockwise
    v, u = start_u, root
    steps = 0
    while True:
        nb = order[v]
        k = nb.index(u)
        w = nb[(k + 1) % len(nb)]
        for p in corner(v, u, w):
            ring.append(p)
            owner.append(v)
            via.append((u, w))
        u, v = v, w
        steps += 1
        if (v, u) == (start_u, root) or steps > 4 * E.size:
            break
    pts = np.array(ring)
    area = 0.5 * float(np.dot(pts[:, 0], np.roll(pts[:, 1], -1)) - np.dot(np.roll(pts[:, 0], -1), pts[:, 1]))
    if area < 0:
        pts, owner, via = pts[::-1], owner[::-1], via[::-1]
    poly = SimplePolygon(pts)
    chambers: dict[int, list[int]] = {}
    for i, v in enumerate(owner):
        chambers.setdefault(int(v), []).append(i)
    corridors: dict[tuple[int, int], list[int]] = {}
    for i, (v, (u, w)) in enumerate(zip(owner, via)):
        for x in (u, w):
            key = (min(v, x), max(v, x))
            corridors.setdefault(key, []).append(i)
    return ThickenedPolygon(poly, epsilon, E, chambers, corridors)


def tree_polygon(delta: int, h: int, epsilon: float = 0.1) -> ThickenedPolygon:
    return thicken(embed_tree(delta, h), epsilon)
