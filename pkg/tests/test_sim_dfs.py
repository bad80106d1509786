import pytest

from polyguard.corpus import corpus, regular_polygon
from polyguard.sim import BudgetExhausted, run_bfs, run_dfs, trace_hash

from _checks import audit_guards, audit_territories

POLYS = corpus(81, 15, (5, 60))


def test_convex_polygon():
    r = run_dfs(regular_polygon(9))
    assert len(r.placement) == 1
    assert r.rounds <= 3


@pytest.mark.parametrize("k", range(len(POLYS)))
def test_corpus_runs(k):
    P = POLYS[k]
    r = run_dfs(P)
    audit_territories(P, r)
    audit_guards(P, r.placement.guards, samples=1000)
    assert r.rounds <= 5 * P.n + 20


def test_spiral_favours_dfs(spiral):
    d = run_dfs(spiral)
    b = run_bfs(spiral)
    audit_territories(spiral, d)
    assert d.rounds < b.rounds
    assert d.rounds <= 5 * spiral.n + 20


def test_parent_link_matches_gap_edge(comb):
    r = run_dfs(comb)
    for i, t in r.territories.items():
        a = r.world.agents[i]
        if a.parent is None:
            continue
        par = r.territories[a.parent]
        assert any({x, y} == {a.settled_vertex, a.orient} for x, y in par.gap_edges())


def test_small_budget_exhausts(comb):
    with pytest.raises(BudgetExhausted):
        run_dfs(comb, 2)


def test_deterministic(comb):
    assert trace_hash(run_dfs(comb).traces) == trace_hash(run_dfs(comb).traces)
