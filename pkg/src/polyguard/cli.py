"""Command line entry point: ``polyguard <command> ...``.

Exit codes: 0 ok, 2 verification failed, 3 ran out of agents, 4 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .central import GuardPlacement, central_guards, decompose_triplets
from .corpus import corpus
from .geometry import GeometryError, SimplePolygon
from .lbgen import tree_polygon
from .medial import medial_axis, unweighted_diameter
from .render import render_svg
from .sim import BudgetExhausted, ProtocolError, reduce_guards, run_bfs, run_dfs, run_medial, run_race
from .triangulate import root_at_leaf, triangulate, weak_dual
from .verify import check_connected, check_coverage

OK, VERIFY_FAILED, EXHAUSTED, BAD_INPUT = 0, 2, 3, 4


class BadInput(Exception):
    pass


def read_polygon(path: str) -> SimplePolygon:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise BadInput(str(e)) from e
    try:
        if text.lstrip().startswith("{"):
            return SimplePolygon.from_dict(json.loads(text))
        return SimplePolygon.from_text(text)
    except (ValueError, KeyError, IndexError, GeometryError) as e:
        raise BadInput(f"{path}: {e}") from e


def read_guards(path: str) -> GuardPlacement:
    try:
        return GuardPlacement.from_dict(json.loads(Path(path).read_text()))
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise BadInput(f"{path}: {e}") from e


def _emit(obj, out: Optional[str] = None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _write(path: Optional[str], text: str):
    if path:
        Path(path).write_text(text)


@dataclass
class RunSummary:
    n: int
    algorithm: str
    rounds: int
    guards_settled: int
    guards_after_reduction: Optional[int]
    d: int
    D: int
    wall_time: float
    verdicts: dict = field(default_factory=dict)


def simulate(P: SimplePolygon, algo: str, agents: Optional[int] = None, start: int = 0, reduce: bool = False):
    """Run one protocol; returns (summary, run result, final guards)."""
    t0 = time.perf_counter()
    runners = {"bfs": run_bfs, "dfs": run_dfs, "medial": run_medial}
    if algo == "race":
        race = run_race(P, agents, start)
        res, rounds, name = race.result, race.rounds, f"race:{race.winner}"
    else:
        res = runners[algo](P, agents, start)
        rounds, name = res.rounds, algo
    guards = list(res.placement.guards)
    settled = len(guards)
    after = None
    if reduce:
        red = reduce_guards(res.world)
        guards = list(red.placement.guards)
        after = len(guards)
    cov = check_coverage(P, guards, samples=2000)
    con, _ = check_connected(P, guards)
    summary = RunSummary(
        n=P.n,
        algorithm=name,
        rounds=rounds,
        guards_settled=settled,
        guards_after_reduction=after,
        d=res.tree.diameter,
        D=unweighted_diameter(medial_axis(P)),
        wall_time=round(time.perf_counter() - t0, 3),
        verdicts={
            "coverage": cov.ok,
            "connected": bool(con),
            "per_round_connected": not res.world.connectivity_violations,
        },
    )
    return summary, res, guards


def trace_summary(s: RunSummary) -> dict:
    """Final trace record; wall time is left out so traces replay byte for byte."""
    d = asdict(s)
    d.pop("wall_time")
    d["territory_tree_diameter"] = s.d
    d["medial_diameter"] = s.D
    return d


# -- commands -------------------------------------------------------------------
def cmd_gen(a) -> int:
    if a.kind == "random":
        P = corpus(a.seed, 1, (a.n, a.n))[0]
        if a.output:
            Path(a.output).write_text(P.to_text())
        else:
            sys.stdout.write(P.to_text())
        return OK
    T = tree_polygon(a.delta, a.height, a.epsilon)
    if not a.output:
        sys.stdout.write(T.polygon.to_text())
        return OK
    Path(a.output).write_text(T.polygon.to_text())
    Path(a.output + ".json").write_text(json.dumps(T.annotations(), indent=2, sort_keys=True) + "\n")
    return OK


def cmd_triangulate(a) -> int:
    P = read_polygon(a.polygon)
    _emit(triangulate(P).to_dict(), a.output)
    return OK


def cmd_guard_central(a) -> int:
    P = read_polygon(a.polygon)
    T = triangulate(P)
    G = central_guards(P, T)
    _emit(G.to_dict(), a.output)
    if a.svg:
        trip = decompose_triplets(root_at_leaf(weak_dual(T))) if P.n > 4 else []
        _write(a.svg, render_svg(P, triangulation=T, triplets=trip, guards=G.guards))
    return OK


def cmd_medial(a) -> int:
    P = read_polygon(a.polygon)
    M = medial_axis(P)
    _emit(M.to_dict(), a.output)
    if a.svg:
        _write(a.svg, render_svg(P, medial=M))
    return OK


def cmd_sim(a) -> int:
    P = read_polygon(a.polygon)
    if a.agents is not None and not (1 <= a.agents <= P.n):
        raise BadInput(f"--agents must lie in [1, {P.n}]")
    try:
        summary, res, guards = simulate(P, a.algo, a.agents, a.start, a.reduce)
    except BudgetExhausted as e:
        print(json.dumps({"error": "budget exhausted", "detail": str(e)}))
        return EXHAUSTED
    if a.trace:
        with open(a.trace, "w") as fh:
            for t in res.world.traces:
                fh.write(json.dumps(t.to_dict(), sort_keys=True) + "\n")
            fh.write(json.dumps({"summary": trace_summary(summary)}, sort_keys=True) + "\n")
    if a.svg:
        terr = [] if a.reduce else [t.coords(P) for _, t in sorted(res.territories.items())]
        _write(a.svg, render_svg(P, guards=guards, territories=terr))
    _emit(asdict(summary))
    return OK if all(summary.verdicts.values()) else VERIFY_FAILED


def cmd_verify(a) -> int:
    P = read_polygon(a.polygon)
    G = read_guards(a.guards)
    cov = check_coverage(P, G.guards, samples=a.samples)
    con, vg = check_connected(P, G.guards)
    print(f"guards: {len(G)}")
    print(f"coverage: {'ok' if cov.ok else 'FAILED'} ({cov.summary()})")
    print(f"connected: {'ok' if con else 'FAILED'} ({vg.components()} component(s))")
    return OK if cov.ok and con else VERIFY_FAILED


def cmd_render(a) -> int:
    P = read_polygon(a.polygon)
    guards = read_guards(a.guards).guards if a.guards else None
    T = triangulate(P) if a.triangulation else None
    M = medial_axis(P) if a.medial else None
    _write(a.output, render_svg(P, triangulation=T, guards=guards, medial=M))
    return OK


def cmd_bench(a) -> int:
    rows = []
    for P in corpus(a.seed, a.count, (a.n_min, a.n_max)):
        for algo in a.algo:
            try:
                s, _, _ = simulate(P, algo, reduce=a.reduce)
            except BudgetExhausted:
                continue
            rows.append(s)
    print("n,algorithm,d,D,rounds,guards,ok")
    for s in rows:
        print(f"{s.n},{s.algorithm},{s.d},{s.D},{s.rounds},{s.guards_after_reduction or s.guards_settled},{int(all(s.verdicts.values()))}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyguard", description="Connected guard placement in simple polygons")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate polygons")
    g.add_argument("kind", choices=["random", "tree-polygon"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=20)
    g.add_argument("--delta", type=int, default=2)
    g.add_argument("--height", type=int, default=3)
    g.add_argument("--epsilon", type=float, default=0.1)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("triangulate", help="ear-clipping triangulation")
    t.add_argument("polygon")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_triangulate)

    c = sub.add_parser("guard-central", help="triplet guard placement")
    c.add_argument("polygon")
    c.add_argument("-o", "--output")
    c.add_argument("--svg")
    c.set_defaults(func=cmd_guard_central)

    m = sub.add_parser("medial-axis", help="medial axis tree")
    m.add_argument("polygon")
    m.add_argument("-o", "--output")
    m.add_argument("--svg")
    m.set_defaults(func=cmd_medial)

    s = sub.add_parser("sim", help="run a protocol")
    ssub = s.add_subparsers(dest="action", required=True)
    r = ssub.add_parser("run")
    r.add_argument("--algo", choices=["bfs", "dfs", "race", "medial"], required=True)
    r.add_argument("--agents", type=int)
    r.add_argument("--polygon", required=True)
    r.add_argument("--start", type=int, default=0, help="start vertex")
    r.add_argument("--trace")
    r.add_argument("--svg")
    r.add_argument("--reduce", action="store_true")
    r.set_defaults(func=cmd_sim)

    v = sub.add_parser("verify", help="check coverage and connectivity")
    v.add_argument("--polygon", required=True)
    v.add_argument("--guards", required=True)
    v.add_argument("--samples", type=int, default=10000)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("render", help="draw a polygon as SVG")
    d.add_argument("polygon")
    d.add_argument("--guards")
    d.add_argument("--triangulation", action="store_true")
    d.add_argument("--medial", action="store_true")
    d.add_argument("-o", "--output", required=True)
    d.set_defaults(func=cmd_render)

    b = sub.add_parser("bench", help="(n, d, D, rounds) table over a random corpus")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--count", type=int, default=10)
    b.add_argument("--n-min", type=int, default=6)
    b.add_argument("--n-max", type=int, default=40)
    b.add_argument("--algo", nargs="+", default=["bfs", "dfs", "medial"], choices=["bfs", "dfs", "race", "medial"])
    b.add_argument("--reduce", action="store_true")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        return a.func(a)
    except BadInput as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except (GeometryError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except ProtocolError as e:
        print(f"protocol error: {e}", file=sys.stderr)
        return VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
