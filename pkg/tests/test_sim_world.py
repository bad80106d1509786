import pytest

from polyguard.corpus import regular_polygon
from polyguard.geometry import points_visible, vertex_limited_visibility_polygon
from polyguard.sim import ProtocolError, World, trace_hash
from polyguard.sim.world import DEPTH, Protocol, look, run, step


class Chatty(Protocol):
    """Every agent greets every agent it sees, then the run ends."""

    def __init__(self, rounds=2):
        self.rounds = rounds

    def communicate(self, rnd, agent, view):
        return [(j, {"hi": rnd}) for j in sorted(view.agents)]

    def finished(self, world):
        return world.round >= self.rounds


class Spread(Protocol):
    """Agent k walks to vertex k - 1 if it can see it."""

    def move(self, rnd, agent, view, inbox):
        t = agent.id - 1
        return t if t in view.labels else None

    def finished(self, world):
        return world.round >= 1


def test_convex_view_has_no_gaps():
    P = regular_polygon(10)
    v = look(World(P, 1, 0), 1)
    assert sorted(v.labels) == list(range(10))
    assert not any(v.gaps)


def test_l_polygon_view_has_one_gap(lpoly):
    v = look(World(lpoly, 1, 1), 1)
    assert sum(v.gaps) == 1
    assert sorted(v.labels) == sorted(vertex_limited_visibility_polygon(lpoly, lpoly.vertices[1]).vertices)


def test_depth_view_passes_region_through(lpoly):
    g = (0.3, 0.4)
    v = look(World(lpoly, 1, g, DEPTH), 1)
    assert v.limited == vertex_limited_visibility_polygon(lpoly, g)


def test_nearness_comparator(rect):
    v = look(World(rect, 1, 0), 1)
    assert v.nearer(1, 2) == 1
    assert v.nearer(3, 2) == 3


def test_noop_protocol_round(square):
    w = World(square, 3, 0)
    tr = step(w, Protocol())
    assert w.round == 1
    assert tr.messages == [] and tr.moves == []


def test_messages_follow_visibility(comb):
    w = World(comb, 3, 0)
    w.agents[2].vertex, w.agents[2].position = 5, comb.vertices[5]
    w.agents[3].vertex, w.agents[3].position = 9, comb.vertices[9]
    run(w, Chatty())
    assert w.message_log
    for m in w.message_log:
        a, b = w.agents[m.sender], w.agents[m.receiver]
        assert points_visible(comb, a.position, b.position)
    pairs = [(m.round, m.sender, m.receiver) for m in w.message_log]
    assert len(pairs) == len(set(pairs))


def test_message_to_hidden_agent_rejected(comb):
    far = next(v for v in range(comb.n) if not points_visible(comb, comb.vertices[0], comb.vertices[v]))

    class Shout(Protocol):
        def communicate(self, rnd, agent, view):
            return [(2, "x")] if agent.id == 1 else []

    w = World(comb, 2, 0)
    w.agents[2].vertex, w.agents[2].position = far, comb.vertices[far]
    with pytest.raises(ProtocolError):
        step(w, Shout())


def test_double_message_rejected(square):
    class Twice(Protocol):
        def communicate(self, rnd, agent, view):
            return [(2, "a"), (2, "b")] if agent.id == 1 else []

    with pytest.raises(ProtocolError):
        step(World(square, 2, 0), Twice())


def test_hidden_move_rejected(comb):
    far = next(v for v in range(comb.n) if not points_visible(comb, comb.vertices[0], comb.vertices[v]))

    class Jump(Protocol):
        def move(self, rnd, agent, view, inbox):
            return far

    with pytest.raises(ProtocolError):
        step(World(comb, 1, 0), Jump())


def test_settled_agent_may_not_wander(square):
    class Drift(Protocol):
        def move(self, rnd, agent, view, inbox):
            agent.settle(0)
            return 1

    with pytest.raises(ProtocolError):
        step(World(square, 1, 0), Drift())


def test_legal_moves_apply(square):
    w = World(square, 4, 0)
    run(w, Spread())
    assert [w.agents[i].vertex for i in range(1, 5)] == [0, 1, 2, 3]


def test_budget_limits():
    P = regular_polygon(5)
    with pytest.raises(ValueError):
        World(P, 6, 0)
    with pytest.raises(ValueError):
        World(P, 0, 0)


def test_replay_hash(comb):
    def once():
        w = World(comb, 3, 0)
        run(w, Chatty(3))
        return trace_hash(w.traces)

    assert once() == once()
