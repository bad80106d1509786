"""Reproducible random simple polygons and a few hand-made families."""
from __future__ import annotations

import math

import numpy as np

from .geometry import GeometryError, SimplePolygon, _seg_intersect_matrix


def _first_crossing(pts, tour):
    a = pts[tour]
    b = np.roll(a, -1, axis=0)
    hit = _seg_intersect_matrix(a, b, a, b, 0.0)
    hit = np.triu(hit, 2)
    if not hit.any():
        return None
    i, j = np.argwhere(hit)[0]
    return int(i), int(j)


def two_opt_polygon(pts: np.ndarray, max_iter: int = 200000) -> np.ndarray:
    """Order ``pts`` into a simple polygon by repeatedly uncrossing edge pairs.

    Starts from a greedy nearest-neighbour tour; each 2-opt move strictly
    shortens the tour, so the loop terminates.
    """
    n = len(pts)
    left = set(range(1, n))
    tour = [0]
    while left:
        last = pts[tour[-1]]
        cand = np.fromiter(left, dtype=int)
        k = int(cand[np.argmin(np.hypot(*(pts[cand] - last).T))])
        tour.append(k)
        left.remove(k)
    tour = np.array(tour)
    for _ in range(max_iter):
        hit = _first_crossing(pts, tour)
        if hit is None:
            return pts[tour]
        i, j = hit
        tour[i + 1 : j + 1] = tour[i + 1 : j + 1][::-1]
    raise GeometryError("2-opt did not converge")


def random_polygon(rng: np.random.Generator, n: int, retries: int = 20) -> SimplePolygon:
    if n < 3:
        raise ValueError("n must be at least 3")
    last = None
    for _ in range(retries):
        pts = rng.random((n, 2))
        try:
            ring = two_opt_polygon(pts)
            return SimplePolygon.from_points(ring)
        except GeometryError as exc:
            last = exc
    raise GeometryError(f"failed to generate a simple {n}-gon: {last}")


def corpus(seed: int, count: int, n_range: tuple[int, int]) -> list[SimplePolygon]:
    """``count`` random simple polygons with vertex counts drawn from ``n_range`` (inclusive)."""
    lo, hi = n_range
    if lo < 4 or hi < lo:
        raise ValueError("need 4 <= n_min <= n_max")
    rng = np.random.default_rng(seed)
    sizes = rng.integers(lo, hi + 1, size=count)
    return [random_polygon(rng, int(k)) for k in sizes]


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.1) -> SimplePolygon:
    t = phase + 2 * math.pi * np.arange(n) / n
    return SimplePolygon(np.c_[radius * np.cos(t), radius * np.sin(t)])


def comb_polygon(teeth: int, tooth_len: float = 3.0) -> SimplePolygon:
    """A horizontal spine (height 1) with ``teeth`` unit-width upward teeth.

    Tooth tops and bases get small distinct tilts so that no three vertices
    are collinear.
    """
    if teeth < 1:
        raise ValueError("need at least one tooth")
    w = 2 * teeth - 1
    ring = [(0.0, 0.0), (float(w), 0.0)]
    for k in reversed(range(teeth)):
        top = 1.0 + tooth_len + 0.031 * k
        ring += [(2.0 * k + 1, top + 0.017), (2.0 * k, top)]
        if k > 0:
            ring += [(2.0 * k, 1.0 + 0.013 * k), (2.0 * k - 1, 1.0 + 0.011 * k + 0.004)]
    return SimplePolygon(ring)


def spiral_polygon(n: int = 40, width: float = 0.5, jitter: float = 0.01, seed: int = 0) -> SimplePolygon:
    """A square spiral corridor with exactly ``n`` vertices (``n`` even, >= 6).

    The centreline turns left by 90 degrees at every point with arm lengths
    1, 1, 2, 2, 3, 3, ...; walls sit ``width / 2`` to either side.
    """
    if n % 2 or n < 6:
        raise ValueError("spiral needs an even vertex count >= 6")
    m = n // 2
    dirs = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
    c = [(0.0, 0.0)]
    for k in range(m - 1):
        d = dirs[k % 4]
        step = k // 2 + 1
        c.append((c[-1][0] + step * d[0], c[-1][1] + step * d[1]))
    rng = np.random.default_rng(seed)
    c = np.array(c) + rng.uniform(-jitter, jitter, size=(m, 2))
    seg = np.diff(c, axis=0)
    seg /= np.hypot(seg[:, 0], seg[:, 1])[:, None]
    normals = np.c_[-seg[:, 1], seg[:, 0]]
    left, right = [], []
    h = width / 2
    for i in range(m):
        if i == 0:
            off = normals[0] * h
        elif i == m - 1:
            off = normals[-1] * h
        else:
            n1, n2 = normals[i - 1], normals[i]
            bis = n1 + n2
            off = bis / (bis @ n1) * h
        left.append(c[i] + off)
        right.append(c[i] - off)
    ring = right + left[::-1]
    return SimplePolygon.from_points(ring)


L_POLYGON = ((0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0))
UNIT_SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
RECTANGLE = ((0.0, 0.0), (4.0, 0.0), (4.0, 2.0), (0.0, 2.0))
