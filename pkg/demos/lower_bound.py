"""Round counts on thickened-tree polygons of growing height.

Usage: python3 demos/lower_bound.py [MAX_HEIGHT]
"""
import sys

import numpy as np

from polyguard.lbgen import tree_polygon
from polyguard.medial import medial_axis
from polyguard.sim import run_bfs, run_medial


def main(max_h="4"):
    rows = []
    print(f"{'h':>2} {'n':>4} {'tree d':>6} {'D':>4} {'bfs':>5} {'medial':>6}")
    for h in range(2, int(max_h) + 1):
        T = tree_polygon(2, h)
        P = T.polygon
        D = medial_axis(P).diameter
        b, m = run_bfs(P).rounds, run_medial(P).rounds
        rows.append((D, b, m))
        print(f"{h:2d} {P.n:4d} {T.source.diameter():6d} {D:4d} {b:5d} {m:6d}")
    D, b, m = (np.log(np.array(c, float)) for c in zip(*rows))
    print(f"log-log slope vs D: bfs {np.polyfit(D, b, 1)[0]:.2f}, medial {np.polyfit(D, m, 1)[0]:.2f}")


if __name__ == "__main__":
    main(*sys.argv[1:])
