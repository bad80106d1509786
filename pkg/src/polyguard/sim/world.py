"""Synchronous look-communicate-move rounds.

Each agent runs its own state machine.  In every round all agents look on
the same pre-round state, then every agent hands out messages, messages are
delivered, and finally every agent picks a move.  The world owns the
geometry and checks each message and move against what the sender can
actually see.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from ..geometry import (
    GeometryError,
    Point,
    SimplePolygon,
    VertexLimitedVisibilityPolygon,
    VisibilityPolygon,
    _closed_contains,
    points_visible,
    vertex_limited_visibility_polygon,
    visibility_polygon,
)

PROXIMITY = "proximity"
DEPTH = "depth"


class ProtocolError(RuntimeError):
    """A protocol tried something the model forbids."""


class BudgetExhausted(RuntimeError):
    """The agents ran out before the polygon was guarded."""

    def __init__(self, msg, world=None):
        super().__init__(msg)
        self.world = world


@dataclass
class AgentState:
    id: int
    position: Point
    vertex: Optional[int] = None
    status: str = "exploring"
    settled_vertex: Optional[int] = None
    orient: Optional[int] = None
    parent: Optional[int] = None
    marked_vertex: Optional[int] = None
    territory: Optional[VertexLimitedVisibilityPolygon] = None
    pending_gap_count: int = 0
    scratch: dict = field(default_factory=dict)

    def settle(self, vertex: Optional[int] = None):
        self.status = "settled"
        self.settled_vertex = vertex


@dataclass(frozen=True)
class Message:
    sender: int
    receiver: int
    payload: Any
    round: int


class _View:
    """Shared plumbing: the visible agents are materialized on first use."""

    def __init__(self, me: int, seen: list):
        self._me = me
        self._seen = seen
        self._agents = None

    def _coord(self, b: AgentState):
        raise NotImplementedError

    @property
    def agents(self) -> dict:
        """Visible agent id -> where it stands."""
        if self._agents is None:
            self._agents = {b.id: self._coord(b) for b in self._seen if b.id != self._me}
        return self._agents


class ProximityView(_View):
    """What an agent without depth perception sees from a vertex.

    ``labels`` lists the vertices of the vertex-limited visibility polygon in
    clockwise order starting at the orientation vertex; ``gaps[k]`` flags the
    boundary piece between ``labels[k]`` and ``labels[k+1]`` as a gap edge.
    Labels are opaque tokens: equal labels mean the same vertex, nothing more.
    Visible agents are reported with the label of the vertex they stand on.
    """

    def __init__(self, me, here, labels, gaps, seen, dist):
        super().__init__(me, seen)
        self.here = here
        self.labels = labels
        self.gaps = gaps
        self._dist = dist

    def _coord(self, b):
        return b.vertex

    def nearer(self, a: int, b: int) -> int:
        """Whichever of two listed vertices is closer."""
        return a if self._dist[a] <= self._dist[b] else b

    def summary(self) -> dict:
        return {"here": self.here, "size": len(self.labels), "gaps": int(sum(self.gaps)), "sees": len(self._seen) - 1}


class DepthView(_View):
    """Full view with coordinates: the visibility polygon and the agents inside it."""

    def __init__(self, me, here, region, limited, seen):
        super().__init__(me, seen)
        self.here = here
        self.region = region
        self.limited = limited

    def _coord(self, b):
        return b.position

    def sees(self, p) -> bool:
        return _closed_contains(self.region.points, np.asarray(p, dtype=float), 1e-9)

    def summary(self) -> dict:
        return {
            "here": [round(float(c), 12) for c in self.here],
            "size": len(self.limited.vertices),
            "gaps": int(sum(self.limited.gap)),
            "sees": len(self._seen) - 1,
        }


@dataclass
class RoundTrace:
    round: int
    views: dict
    messages: list
    moves: list
    settled: list
    metrics: dict

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "views": {str(k): v for k, v in sorted(self.views.items())},
            "messages": self.messages,
            "moves": self.moves,
            "settled": self.settled,
            "metrics": self.metrics,
        }


class Protocol:
    """Base class: a per-agent state machine.

    ``communicate`` returns ``[(receiver, payload), ...]`` and ``move``
    returns a target (a vertex index under proximity, a point under depth)
    or ``None``.  Both may update the agent's own state and nothing else.
    """

    perception = PROXIMITY

    def communicate(self, rnd: int, agent: AgentState, view) -> list:
        return []

    def move(self, rnd: int, agent: AgentState, view, inbox: list):
        return None

    def finished(self, world: "World") -> bool:
        return True

    def tree_depth(self, world: "World") -> int:
        return tree_depth(world)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return round(float(x), 12)
    return x


def tree_depth(world: "World") -> int:
    best = 0
    for a in world.agents.values():
        if a.status != "settled":
            continue
        d, cur, seen = 0, a, set()
        while cur.parent is not None and cur.id not in seen:
            seen.add(cur.id)
            cur = world.agents[cur.parent]
            d += 1
        best = max(best, d)
    return best


class World:
    def __init__(self, P: SimplePolygon, agents: int, start, perception: str = PROXIMITY, rng_seed: int = 0):
        if agents < 1:
            raise ValueError("need at least one agent")
        if agents > P.n:
            raise ValueError(f"at most n = {P.n} agents are allowed")
        self.polygon = P
        self.perception = perception
        self.rng_seed = rng_seed
        self.round = 0
        if perception == PROXIMITY:
            v = int(start)
            pos = P.vertices[v]
            self.agents = {i: AgentState(i, pos, v) for i in range(1, agents + 1)}
        else:
            pos = (float(start[0]), float(start[1]))
            if not P.contains(pos):
                raise GeometryError("start lies outside the polygon")
            self.agents = {i: AgentState(i, pos, P.locate(pos)[1] if P.locate(pos)[0] == "vertex" else None)
                           for i in range(1, agents + 1)}
        self.traces: list[RoundTrace] = []
        self.connectivity_violations: list[int] = []
        self.message_log: list[Message] = []
        self.peak_agents = agents
        self._vis_vertex: dict[int, set] = {}
        self._vlp: dict[tuple, VertexLimitedVisibilityPolygon] = {}
        self._vis_point: dict[tuple, VisibilityPolygon] = {}
        self._pair: dict[tuple, bool] = {}
        self._frames: dict[tuple, tuple] = {}

    # -- geometry caches -------------------------------------------------
    def _visible_vertices(self, v: int) -> set:
        s = self._vis_vertex.get(v)
        if s is None:
            # clipping only removes spurious points, so the limited view keeps every visible vertex
            s = self._vis_vertex[v] = set(self.limited(self.polygon.vertices[v]).vertices) | {v}
        return s

    def _region(self, p: Point) -> VisibilityPolygon:
        key = (float(p[0]), float(p[1]))
        r = self._vis_point.get(key)
        if r is None:
            r = self._vis_point[key] = visibility_polygon(self.polygon, key)
        return r

    def limited(self, p: Point, orient: Optional[int] = None) -> VertexLimitedVisibilityPolygon:
        key = (float(p[0]), float(p[1]), orient)
        r = self._vlp.get(key)
        if r is None:
            r = self._vlp[key] = vertex_limited_visibility_polygon(self.polygon, key[:2], orient)
        return r

    def proximity_frame(self, here: int, orient: int):
        """Clockwise labels and gap flags from ``here`` starting at ``orient``, plus distances."""
        key = (here, orient)
        r = self._frames.get(key)
        if r is None:
            P = self.polygon
            vl = self.limited(P.vertices[here])
            m = len(vl.vertices)
            ccw = list(vl.vertices)
            k0 = ccw.index(orient) if orient in ccw else 0
            labels = tuple(ccw[(k0 - k) % m] for k in range(m))
            gaps = tuple(vl.gap[(k0 - k - 1) % m] for k in range(m))
            dist = {v: float(np.hypot(*(P.coords[v] - P.coords[here]))) for v in labels}
            r = self._frames[key] = (labels, gaps, dist)
        return r

    def visible(self, a: AgentState, b: AgentState) -> bool:
        if a.vertex is not None and b.vertex is not None:
            return b.vertex in self._visible_vertices(a.vertex)
        pa, pb = tuple(a.position), tuple(b.position)
        if pa == pb:
            return True
        key = (pa, pb) if pa <= pb else (pb, pa)
        r = self._pair.get(key)
        if r is None:
            r = self._pair[key] = points_visible(self.polygon, pa, pb, check=False)
        return r

    def connected(self) -> bool:
        # agents sharing a position see each other, so one representative each is enough
        reps = {}
        for a in self.agents.values():
            reps.setdefault(tuple(a.position), a)
        group = list(reps.values())
        seen = {0}
        stack = [0]
        while stack:
            u = group[stack.pop()]
            for k, w in enumerate(group):
                if k not in seen and self.visible(u, w):
                    seen.add(k)
                    stack.append(k)
        return len(seen) == len(group)


def _visible_agents(world: World) -> dict:
    """For every occupied position, the agents standing at positions visible from it."""
    groups: dict[tuple, list[AgentState]] = {}
    for a in world.agents.values():
        groups.setdefault(tuple(a.position), []).append(a)
    keys = list(groups)
    out = {}
    if world.perception == PROXIMITY:
        verts = {u: groups[u][0].vertex for u in keys}
        for u in keys:
            vis = world._visible_vertices(verts[u])
            out[u] = [b for w in keys if verts[w] in vis for b in groups[w]]
        return out
    for u in keys:
        rep = groups[u][0]
        out[u] = [b for w in keys if world.visible(rep, groups[w][0]) for b in groups[w]]
    return out


def look(world: World, agent_id: int, _seen: Optional[dict] = None):
    """The view of one agent on the current state."""
    a = world.agents[agent_id]
    P = world.polygon
    if _seen is None:
        _seen = _visible_agents(world)
    seen = _seen[tuple(a.position)]
    if world.perception == PROXIMITY:
        here = a.vertex
        orient = a.orient if a.orient is not None else (here + 1) % P.n
        labels, gaps, dist = world.proximity_frame(here, orient)
        return ProximityView(a.id, here, labels, gaps, seen, dist)
    return DepthView(a.id, a.position, world._region(a.position), world.limited(a.position), seen)


def step(world: World, protocol: Protocol) -> RoundTrace:
    """One synchronous round."""
    rnd = world.round
    ids = sorted(world.agents)
    seen = _visible_agents(world)
    views = {i: look(world, i, seen) for i in ids}
    was_settled = {i for i in ids if world.agents[i].status == "settled"}
    # communicate
    outbox: list[Message] = []
    for i in ids:
        sent = set()
        for to, payload in protocol.communicate(rnd, world.agents[i], views[i]) or []:
            if to not in world.agents:
                raise ProtocolError(f"round {rnd}: agent {i} wrote to unknown agent {to}")
            if to == i:
                raise ProtocolError(f"round {rnd}: agent {i} wrote to itself")
            if to in sent:
                raise ProtocolError(f"round {rnd}: agent {i} sent two messages to {to}")
            if to not in views[i].agents:
                raise ProtocolError(f"round {rnd}: agent {i} cannot see agent {to}")
            sent.add(to)
            outbox.append(Message(i, to, payload, rnd))
    inbox = {i: [] for i in ids}
    for m in outbox:
        inbox[m.receiver].append(m)
    # move
    targets = {}
    for i in ids:
        t = protocol.move(rnd, world.agents[i], views[i], inbox[i])
        if t is not None:
            targets[i] = t
    moves = []
    P = world.polygon
    for i, t in sorted(targets.items()):
        a = world.agents[i]
        if world.perception == PROXIMITY:
            t = int(t)
            if t == a.vertex:
                continue
            if t not in views[i].labels:
                raise ProtocolError(f"round {rnd}: agent {i} cannot move from p{a.vertex} to unseen p{t}")
            moves.append([i, a.vertex, t])
        else:
            t = (float(t[0]), float(t[1]))
            if t == tuple(a.position):
                continue
            if not points_visible(P, a.position, t, check=False):
                raise ProtocolError(f"round {rnd}: agent {i} cannot move from {a.position} to unseen {t}")
            moves.append([i, list(a.position), list(t)])
    for i, t in sorted(targets.items()):
        a = world.agents[i]
        if world.perception == PROXIMITY:
            a.vertex = int(t)
            a.position = P.vertices[a.vertex]
        else:
            t = (float(t[0]), float(t[1]))
            loc = P.locate(t)
            a.vertex = loc[1] if loc[0] == "vertex" else None
            a.position = t
    for a in world.agents.values():
        if a.status == "settled" and world.perception == PROXIMITY and a.settled_vertex != a.vertex:
            raise ProtocolError(f"round {rnd}: settled agent {a.id} is off its vertex")
    world.round += 1
    world.message_log.extend(outbox)
    ok = world.connected()
    if not ok:
        world.connectivity_violations.append(rnd)
    newly = sorted(i for i in ids if world.agents[i].status == "settled" and i not in was_settled)
    settled_count = sum(1 for a in world.agents.values() if a.status == "settled")
    tr = RoundTrace(
        rnd,
        {i: views[i].summary() for i in ids},
        [[m.sender, m.receiver, _jsonable(m.payload)] for m in outbox],
        _jsonable(moves),
        newly,
        {
            "rounds": world.round,
            "agents": len(world.agents),
            "settled": settled_count,
            "depth": protocol.tree_depth(world),
            "connected": ok,
        },
    )
    world.traces.append(tr)
    return tr


def run(world: World, protocol: Protocol, max_rounds: int = 100000) -> World:
    while not protocol.finished(world):
        if world.round >= max_rounds:
            raise ProtocolError(f"no termination within {max_rounds} rounds")
        step(world, protocol)
    return world


def trace_hash(traces) -> str:
    h = hashlib.sha256()
    for t in traces:
        d = t.to_dict() if hasattr(t, "to_dict") else t
        h.update(json.dumps(d, sort_keys=True, separators=(",", ":")).encode())
        h.update(b"\n")
    return h.hexdigest()


@dataclass
class TerritoryTree:
    nodes: list[int]
    edges: list[tuple[int, int]]

    @property
    def diameter(self) -> int:
        from ..medial import tree_diameter

        adj = {v: [] for v in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tree_diameter(adj) if self.nodes else 0

    def to_dict(self) -> dict:
        return {"nodes": self.nodes, "edges": [list(e) for e in self.edges], "diameter": self.diameter}


def settled_tree(world: World) -> TerritoryTree:
    nodes = sorted(a.id for a in world.agents.values() if a.status == "settled")
    edges = [(world.agents[i].parent, i) for i in nodes if world.agents[i].parent is not None]
    return TerritoryTree(nodes, edges)
