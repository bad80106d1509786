"""Ear-clipping triangulation and the weak dual tree of a triangulation."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .geometry import GeometryError, Orientation, SimplePolygon, orientation


def _key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Triangulation:
    """Triangles are counterclockwise vertex-index triples; triangle ``k`` is the k-th ear clipped."""

    n: int
    triangles: tuple[tuple[int, int, int], ...]
    diagonals: tuple[tuple[int, int], ...]

    def triangle_area(self, P: SimplePolygon, k: int) -> float:
        a, b, c = (P.coords[i] for i in self.triangles[k])
        return 0.5 * float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    def to_dict(self) -> dict:
        return {"n": self.n, "triangles": [list(t) for t in self.triangles], "diagonals": [list(d) for d in self.diagonals]}

    @classmethod
    def from_dict(cls, d: dict) -> "Triangulation":
        return cls(d["n"], tuple(tuple(t) for t in d["triangles"]), tuple(tuple(x) for x in d["diagonals"]))


def _in_closed_triangle(pts: np.ndarray, a, b, c, eps: float) -> np.ndarray:
    def side(p, q):
        return (q[0] - p[0]) * (pts[:, 1] - p[1]) - (q[1] - p[1]) * (pts[:, 0] - p[0])

    return (side(a, b) >= -eps) & (side(b, c) >= -eps) & (side(c, a) >= -eps)


def triangulate(P: SimplePolygon) -> Triangulation:
    """Ear clipping, always removing the lowest-indexed ear among the remaining vertices."""
    n = P.n
    C = P.coords
    eps = P.eps * P.scale
    nxt = list(range(1, n)) + [0]
    prv = [n - 1] + list(range(n - 1))
    alive = np.ones(n, dtype=bool)

    def is_ear(v: int) -> bool:
        p, s = prv[v], nxt[v]
        if orientation(P.vertices[p], P.vertices[v], P.vertices[s]) != Orientation.COUNTERCLOCKWISE:
            return False
        mask = alive.copy()
        mask[[p, v, s]] = False
        if not mask.any():
            return True
        return not _in_closed_triangle(C[mask], C[p], C[v], C[s], eps).any()

    ear = np.array([is_ear(v) for v in range(n)], dtype=bool)
    triangles, diagonals = [], []
    remaining = n
    while remaining > 3:
        cands = np.flatnonzero(ear & alive)
        if cands.size == 0:
            raise GeometryError("no ear found; polygon is not simple")
        v = int(cands[0])
        p, s = prv[v], nxt[v]
        triangles.append((p, v, s))
        diagonals.append(_key(p, s))
        alive[v] = False
        ear[v] = False
        nxt[p], prv[s] = s, p
        remaining -= 1
        ear[p] = is_ear(p)
        ear[s] = is_ear(s)
    v = int(np.flatnonzero(alive)[0])
    triangles.append((prv[v], v, nxt[v]))
    return Triangulation(n=n, triangles=tuple(triangles), diagonals=tuple(diagonals))


@dataclass(frozen=True)
class WeakDualTree:
    """Adjacency among triangles sharing a diagonal, optionally rooted."""

    nodes: tuple[int, ...]
    adjacency: dict = field(hash=False)  # node -> sorted tuple of neighbours
    shared: dict = field(hash=False)  # (a, b) with a < b -> diagonal (i, j)
    root: Optional[int] = None
    parent: Optional[dict] = field(default=None, hash=False)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.shared)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def leaves(self) -> list[int]:
        return [v for v in self.nodes if self.degree(v) <= 1]

    def diagonal(self, a: int, b: int) -> tuple[int, int]:
        return self.shared[_key(a, b)]

    def children(self, v: int) -> list[int]:
        if self.parent is None:
            raise ValueError("tree is not rooted")
        return [u for u in self.adjacency[v] if self.parent.get(u) == v]

    def depths(self) -> dict:
        if self.root is None:
            raise ValueError("tree is not rooted")
        depth = {self.root: 0}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if u not in depth:
                    depth[u] = depth[v] + 1
                    queue.append(u)
        return depth


def tree_from_edges(nodes, edges, shared=None) -> WeakDualTree:
    adj = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    adjacency = {v: tuple(sorted(u)) for v, u in adj.items()}
    if shared is None:
        shared = {_key(a, b): None for a, b in edges}
    return WeakDualTree(nodes=tuple(sorted(nodes)), adjacency=adjacency, shared=shared)


def weak_dual(T: Triangulation) -> WeakDualTree:
    owner: dict[tuple[int, int], list[int]] = {}
    for k, tri in enumerate(T.triangles):
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            owner.setdefault(_key(a, b), []).append(k)
    diag = set(T.diagonals)
    shared = {}
    for d, ks in owner.items():
        if len(ks) == 2:
            if d not in diag:
                raise GeometryError(f"edge {d} shared by two triangles is not a diagonal")
            shared[_key(*ks)] = d
        elif len(ks) > 2:
            raise GeometryError("invalid triangulation")
    return tree_from_edges(range(len(T.triangles)), shared.keys(), shared)


def root_at_leaf(D: WeakDualTree) -> WeakDualTree:
    """Root at the degree-1 node with the smallest id (a lone node roots at itself)."""
    if not D.nodes:
        raise ValueError("empty tree")
    leaves = [v for v in D.nodes if D.degree(v) == 1]
    root = min(leaves) if leaves else D.nodes[0]
    parent = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for u in D.adjacency[v]:
            if u not in parent:
                parent[u] = v
                queue.append(u)
    if len(parent) != len(D.nodes):
        raise ValueError("weak dual graph is not connected")
    return replace(D, root=root, parent=parent)
