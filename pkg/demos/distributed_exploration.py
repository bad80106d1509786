"""Compare level-by-level and depth-first exploration, race them, then shrink the result.

Usage: python3 demos/distributed_exploration.py [OUT_DIR]
"""
import copy
import sys
from pathlib import Path

from polyguard.corpus import comb_polygon, spiral_polygon
from polyguard.lbgen import tree_polygon
from polyguard.render import render_svg
from polyguard.sim import reduce_guards, run_bfs, run_dfs, run_race


def main(out="demo_out"):
    out = Path(out)
    out.mkdir(exist_ok=True)
    shapes = {"comb": comb_polygon(6), "spiral": spiral_polygon(40), "tree": tree_polygon(4, 2).polygon}
    print(f"{'shape':8} {'n':>4} {'bfs':>5} {'d':>3} {'dfs':>5} {'race':>5} {'winner':>6} {'guards':>6} {'reduced':>7}")
    for name, P in shapes.items():
        b, d, r = run_bfs(P), run_dfs(P), run_race(P)
        red = reduce_guards(copy.deepcopy(b.world))
        print(
            f"{name:8} {P.n:4d} {b.rounds:5d} {b.tree.diameter:3d} {d.rounds:5d} {r.rounds:5d} {r.winner:>6} "
            f"{len(b.placement):6d} {len(red.placement):7d}"
        )
        terr = [t.coords(P) for _, t in sorted(b.territories.items())]
        (out / f"territories_{name}.svg").write_text(render_svg(P, territories=terr, guards=b.placement.guards))
    print("pictures in", out)


if __name__ == "__main__":
    main(*sys.argv[1:])
