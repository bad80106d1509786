"""Agents with depth perception spread along the medial axis.

Usage: python3 demos/medial_walk.py [OUT_DIR]
"""
import sys
from pathlib import Path

from polyguard.corpus import RECTANGLE
from polyguard.geometry import SimplePolygon
from polyguard.lbgen import tree_polygon
from polyguard.medial import medial_axis
from polyguard.render import render_svg
from polyguard.sim import run_medial


def main(out="demo_out"):
    out = Path(out)
    out.mkdir(exist_ok=True)
    shapes = {
        "rectangle": SimplePolygon(RECTANGLE),
        "one reflex": SimplePolygon([(0, 0), (4, 0), (4, 4), (2, 2), (0, 4)]),
        "tree": tree_polygon(2, 3).polygon,
    }
    for name, P in shapes.items():
        M = medial_axis(P)
        r = run_medial(P)
        print(f"{name:10} n={P.n:3d} D={M.diameter:3d} rounds={r.rounds:4d} guards={len(r.placement)}")
        (out / f"medial_{name.replace(' ', '_')}.svg").write_text(render_svg(P, medial=M, guards=r.placement.guards))
    print("pictures in", out)


if __name__ == "__main__":
    main(*sys.argv[1:])
