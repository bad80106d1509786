import pytest

from polyguard.corpus import corpus
from polyguard.geometry import SimplePolygon
from polyguard.lbgen import tree_polygon
from polyguard.medial import medial_axis
from polyguard.sim import BudgetExhausted, run_medial, trace_hash

from _checks import audit_guards

POLYS = corpus(101, 8, (5, 40))


def _bound(P):
    c = len(P.convex_vertices())
    return 1 + (c - 1) + len(P.reflex_vertices())


def test_rectangle(rect):
    r = run_medial(rect)
    assert sorted(r.placement.guards) == pytest.approx([(1.0, 1.0), (3.0, 1.0)])
    audit_guards(rect, r.placement.guards)


def test_square_gets_its_centre(square):
    r = run_medial(square)
    assert r.placement.guards == [(0.5, 0.5)]


def test_reflex_vertex_of_a_parabola_gets_a_guard():
    P = SimplePolygon([(0, 0), (4, 0), (4, 4), (2, 2), (0, 4)])
    assert "parabolic_arc" in [e.curve_kind for e in medial_axis(P).edges]
    r = run_medial(P)
    assert 3 in r.placement.vertex_ids
    audit_guards(P, r.placement.guards)


@pytest.mark.parametrize("k", range(len(POLYS)))
def test_corpus_runs(k):
    P = POLYS[k]
    r = run_medial(P)
    D = medial_axis(P).diameter
    assert len(r.placement) <= _bound(P) <= P.n
    assert not r.world.connectivity_violations
    assert r.rounds <= 5 * D**2 + 20
    audit_guards(P, r.placement.guards, samples=1000)


def test_tree_polygon():
    P = tree_polygon(2, 2).polygon
    r = run_medial(P)
    assert len(r.placement) <= _bound(P)
    assert r.rounds <= 5 * medial_axis(P).diameter ** 2 + 20
    audit_guards(P, r.placement.guards, samples=1000)


@pytest.mark.parametrize("start", [0, 3])
def test_reflex_or_convex_start(start):
    P = SimplePolygon([(0, 0), (6, 0), (6, 3), (3, 1.2), (0, 3)])
    r = run_medial(P, start=start)
    audit_guards(P, r.placement.guards)


def test_budget_exhausted(comb):
    with pytest.raises(BudgetExhausted):
        run_medial(comb, 2)


def test_deterministic(lpoly):
    assert trace_hash(run_medial(lpoly).traces) == trace_hash(run_medial(lpoly).traces)
