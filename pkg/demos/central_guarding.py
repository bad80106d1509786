"""Triangulate a random polygon, split its dual tree into triplets and place one guard per triplet.

Usage: python3 demos/central_guarding.py [OUT_DIR]
"""
import sys
from pathlib import Path

from polyguard.central import central_guards, decompose_triplets
from polyguard.corpus import corpus
from polyguard.render import render_svg
from polyguard.triangulate import root_at_leaf, triangulate, weak_dual
from polyguard.verify import check_connected, check_coverage


def main(out="demo_out"):
    out = Path(out)
    out.mkdir(exist_ok=True)
    P = corpus(7, 1, (40, 40))[0]
    T = triangulate(P)
    trip = decompose_triplets(root_at_leaf(weak_dual(T)))
    G = central_guards(P, T)
    print(f"n = {P.n}: {len(T.triangles)} triangles, {len(trip)} triplets, {len(G)} guards (bound {P.n // 2 - 1})")
    print("covered:", check_coverage(P, G.guards).ok, " connected:", check_connected(P, G.guards)[0])
    (out / "central.svg").write_text(render_svg(P, triangulation=T, triplets=trip, guards=G.guards))
    print("picture:", out / "central.svg")


if __name__ == "__main__":
    main(*sys.argv[1:])
