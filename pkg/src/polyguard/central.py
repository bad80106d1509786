"""Centralized connected guarding: triangulate, split the dual tree into triplets, one guard per triplet."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .geometry import GeometryError, Point, SimplePolygon
from .triangulate import Triangulation, WeakDualTree, root_at_leaf, triangulate, weak_dual


@dataclass(frozen=True)
class Triplet:
    members: tuple[int, int, int]
    middle: int
    shared_edges: tuple[tuple[int, int], tuple[int, int]]


@dataclass
class GuardPlacement:
    """Guard points with a provenance tag each; ``vertex_ids`` holds the polygon vertex or -1."""

    guards: list[Point] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)
    vertex_ids: list[int] = field(default_factory=list)

    def add(self, point, tag: str, vertex: int = -1):
        self.guards.append((float(point[0]), float(point[1])))
        self.provenance.append(str(tag))
        self.vertex_ids.append(int(vertex))

    def __len__(self):
        return len(self.guards)

    def to_dict(self) -> dict:
        return {
            "guards": [
                {"x": g[0], "y": g[1], "provenance": t, "vertex": v}
                for g, t, v in zip(self.guards, self.provenance, self.vertex_ids)
            ]
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GuardPlacement":
        out = cls()
        for g in d["guards"]:
            out.add((g["x"], g["y"]), g.get("provenance", ""), g.get("vertex", -1))
        return out


def _triplet(D: WeakDualTree, a: int, middle: int, b: int) -> Triplet:
    return Triplet(
        members=(a, middle, b),
        middle=middle,
        shared_edges=(D.diagonal(a, middle), D.diagonal(middle, b)),
    )


def decompose_triplets(D: WeakDualTree) -> list[Triplet]:
    """Cover a rooted max-degree-3 tree with connected triplets, deepest level first.

    Orange nodes of a level are handled in ascending id order; a node pairs
    with an orange sibling when it has one, otherwise it takes its parent
    and grandparent.  If the root is still uncovered at the end it forms a
    triplet with its child and that child's lowest-id child.
    """
    if D.root is None:
        raise ValueError("tree must be rooted")
    if len(D.nodes) < 3:
        raise ValueError("need at least 3 nodes")
    if D.degree(D.root) != 1:
        raise ValueError("root must have degree 1")
    parent = D.parent
    depth = D.depths()
    children = {v: sorted(D.children(v)) for v in D.nodes}
    color = {v: ("orange" if not children[v] else "red") for v in D.nodes}
    levels: dict[int, set] = {}
    for v, lv in depth.items():
        levels.setdefault(lv, set()).add(v)
    covered = set()
    out: list[Triplet] = []
    for lv in range(max(depth.values()), 1, -1):
        # no step at this level creates new orange nodes at this level
        for v in sorted(u for u in levels[lv] if color[u] == "orange"):
            if color[v] != "orange":
                continue
            p = parent[v]
            sib = [u for u in children[p] if u != v and color[u] == "orange"]
            if sib:
                w = sib[0]
                out.append(_triplet(D, v, p, w))
                color[p] = "orange"
                color[v] = color[w] = "green"
                covered.update((v, p, w))
            else:
                gp = parent[p]
                out.append(_triplet(D, v, p, gp))
                color[gp] = "orange"
                color[v] = color[p] = "green"
                covered.update((v, p, gp))
    r = D.root
    if r not in covered:
        c = children[r][0]
        out.append(_triplet(D, r, c, children[c][0]))
    return out


def guard_for_triplet(t: Triplet, T: Optional[Triangulation] = None) -> int:
    """The polygon vertex shared by the triplet's two diagonals."""
    a, b = t.shared_edges
    common = set(a) & set(b)
    if len(common) != 1:
        raise GeometryError(f"diagonals {a} and {b} do not share exactly one vertex")
    v = common.pop()
    if T is not None:
        for k in t.members:
            if v not in T.triangles[k]:
                raise GeometryError(f"vertex {v} is not a corner of triangle {k}")
    return v


def central_guards(P: SimplePolygon, T: Optional[Triangulation] = None) -> GuardPlacement:
    if P.n < 4:
        raise GeometryError("need at least 4 vertices")
    if T is None:
        T = triangulate(P)
    D = root_at_leaf(weak_dual(T))
    out = GuardPlacement()
    if len(D.nodes) == 2:
        v = min(T.diagonals[0])
        out.add(P.vertices[v], "diagonal", v)
        return out
    for k, t in enumerate(decompose_triplets(D)):
        v = guard_for_triplet(t, T)
        out.add(P.vertices[v], f"triplet:{k}", v)
    return out


def triplet_graph_components(triplets: list[Triplet]) -> int:
    """Number of connected components when triplets sharing a node are joined."""
    parent = list(range(len(triplets)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[int, int] = {}
    for k, t in enumerate(triplets):
        for m in t.members:
            if m in owner:
                parent[find(k)] = find(owner[m])
            else:
                owner[m] = k
    return len({find(k) for k in range(len(triplets))})
