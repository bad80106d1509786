"""Level-by-level territory exploration without depth perception.

Settled agents count the gap edges of their territories, the counts are
summed up the territory tree to the root, and the root sends exactly that
many fresh agents back down, one hop per round.  Every new agent settles at
an endpoint of its gap edge, orients itself towards the other endpoint and
claims the part of its view beyond that edge.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..central import GuardPlacement
from ..geometry import SimplePolygon, VertexLimitedVisibilityPolygon
from .world import (
    PROXIMITY,
    BudgetExhausted,
    Protocol,
    ProtocolError,
    ProximityView,
    TerritoryTree,
    World,
    run,
    settled_tree,
)


def territory_arc(view: ProximityView, orient: Optional[int], parent_vertex: Optional[int]):
    """Clockwise boundary labels and gap flags of the agent's territory.

    For the root the territory is the whole view.  Otherwise the chord from
    the agent to its orientation vertex splits the view in two and the
    territory is the side not holding the parent; the chord itself closes
    the arc and is not a gap of this territory.
    """
    L, G = list(view.labels), list(view.gaps)
    if parent_vertex is None:
        return L, G
    m = len(L)
    if L[0] != orient:
        raise ProtocolError("view does not start at the orientation vertex")
    h = L.index(view.here)
    if parent_vertex not in L:
        raise ProtocolError("parent is not in view")
    p = L.index(parent_vertex)
    if 0 < p < h:
        arc = L[h:] + [L[0]]
        flags = G[h:m]
    else:
        arc = L[: h + 1]
        flags = G[:h]
    return arc, flags + [False]


def arc_gap_edges(arc, flags) -> list[tuple[int, int]]:
    m = len(arc)
    return [(arc[k], arc[(k + 1) % m]) for k in range(m) if flags[k]]


def arc_polygon(P: SimplePolygon, here: int, arc, flags) -> VertexLimitedVisibilityPolygon:
    """Counterclockwise territory polygon from a clockwise arc."""
    m = len(arc)
    ccw = tuple(arc[m - 1 - k] for k in range(m))
    gap = tuple(bool(flags[(m - 2 - k) % m]) for k in range(m))
    return VertexLimitedVisibilityPolygon(viewpoint=P.vertices[here], vertices=ccw, gap=gap)


def choose_endpoint(edge: tuple[int, int], marked: Optional[int]) -> tuple[int, int]:
    """(settle vertex, orientation vertex) for a gap edge listed clockwise."""
    a, b = edge
    if a == marked:
        return b, a
    return a, b


class BFSProtocol(Protocol):
    perception = PROXIMITY

    def __init__(self):
        self.root_id = 1

    # -- helpers ------------------------------------------------------------
    @staticmethod
    def _init_settled(agent, parent_vertex):
        agent.scratch.update(
            role="settled",
            fresh=True,
            parent_vertex=parent_vertex,
            own=[],
            children={},
            active=set(),
            reports={},
            demand={},
            expect=[],
            collecting=True,
            done=False,
        )

    def _plan(self, agent, ids):
        """Split the agents ``ids`` over children (ascending vertex) and own gaps."""
        orders, incoming = {}, {}
        ids = list(ids)
        kids = sorted(agent.scratch["demand"].items(), key=lambda kv: (agent.scratch["children"][kv[0]], kv[0]))
        for c, need in kids:
            take, ids = ids[:need], ids[need:]
            if take:
                incoming[c] = take
                for t in take:
                    orders[t] = {"go": agent.scratch["children"][c], "host": c}
        own = agent.scratch["own"]
        while own and ids:
            t = ids.pop(0)
            a, b = own.pop(0)
            orders[t] = {"settle": a, "orient": b}
            agent.scratch["children"][t] = a
            agent.scratch["active"].add(t)
        agent.scratch["demand"] = {}
        return orders, incoming, ids

    # -- round hooks ----------------------------------------------------------
    def communicate(self, rnd, agent, view):
        sc = agent.scratch
        if rnd == 0 and agent.id == self.root_id:
            agent.settle(agent.vertex)
            agent.orient = view.labels[0]
            self._init_settled(agent, None)
            sc["pool"] = sorted(i for i, v in view.agents.items() if v == agent.vertex)
        if rnd == 0 and agent.id != self.root_id:
            sc.setdefault("role", "pool")
        if sc.get("role") != "settled" or sc["done"]:
            return []
        out = []
        if sc["fresh"]:
            arc, flags = territory_arc(view, agent.orient if agent.parent is not None else None, sc["parent_vertex"])
            sc["arc"], sc["flags"] = arc, flags
            sc["own"] = [choose_endpoint(e, agent.marked_vertex) for e in arc_gap_edges(arc, flags)]
            agent.pending_gap_count = len(sc["own"])
            sc["fresh"] = False
        if sc["collecting"] and set(sc["reports"]) >= sc["active"]:
            for c, k in sc["reports"].items():
                if k == 0:
                    sc["active"].discard(c)
            sc["demand"] = {c: k for c, k in sc["reports"].items() if k > 0}
            total = len(sc["own"]) + sum(sc["demand"].values())
            sc["reports"] = {}
            sc["collecting"] = False
            if agent.parent is not None:
                out.append((agent.parent, {"report": total}))
                if total == 0:
                    sc["done"] = True
            elif total == 0:
                sc["done"] = True
            else:
                pool = sc["pool"]
                if total > len(pool):
                    sc["exhausted"] = True
                orders, incoming, rest = self._plan(agent, pool)
                sc["pool"] = rest
                out += [(t, o) for t, o in orders.items()]
                out += [(c, {"incoming": ids}) for c, ids in incoming.items()]
                sc["collecting"] = True
                if sc.get("exhausted"):
                    sc["done"] = True
            return out
        if sc["expect"] and all(t in view.agents for t in sc["expect"]):
            orders, incoming, rest = self._plan(agent, sc["expect"])
            if rest:
                raise ProtocolError(f"agent {agent.id} received more agents than it asked for")
            sc["expect"] = []
            sc["collecting"] = True
            out += [(t, o) for t, o in orders.items()]
            out += [(c, {"incoming": ids}) for c, ids in incoming.items()]
        return out

    def move(self, rnd, agent, view, inbox):
        sc = agent.scratch
        if sc.get("role") == "settled":
            for m in inbox:
                p = m.payload
                if "report" in p:
                    sc["reports"][m.sender] = p["report"]
                elif "incoming" in p:
                    sc["expect"] = list(p["incoming"])
            return None
        for m in inbox:
            p = m.payload
            if "go" in p:
                sc["role"] = "travel"
                sc["host"] = p["host"]
                return p["go"]
            if "settle" in p:
                here = agent.vertex
                agent.settle(p["settle"])
                agent.orient = agent.marked_vertex = p["orient"]
                agent.parent = m.sender
                self._init_settled(agent, here)
                return p["settle"]
        return None

    def finished(self, world):
        root = world.agents[self.root_id]
        return world.round > 0 and root.scratch.get("done", False)


@dataclass
class RunResult:
    placement: GuardPlacement
    tree: TerritoryTree
    world: World
    territories: dict = field(default_factory=dict)  # agent id -> VertexLimitedVisibilityPolygon
    algorithm: str = ""

    @property
    def rounds(self) -> int:
        return self.world.round

    @property
    def traces(self):
        return self.world.traces


def collect(world: World, algorithm: str) -> RunResult:
    P = world.polygon
    out = GuardPlacement()
    terr = {}
    for i in sorted(world.agents):
        a = world.agents[i]
        if a.status != "settled":
            continue
        out.add(P.vertices[a.settled_vertex], f"agent:{i}", a.settled_vertex)
        if "arc" in a.scratch:
            a.territory = arc_polygon(P, a.settled_vertex, a.scratch["arc"], a.scratch["flags"])
            terr[i] = a.territory
    return RunResult(out, settled_tree(world), world, terr, algorithm)


def run_bfs(P: SimplePolygon, agent_budget: Optional[int] = None, start: int = 0, max_rounds: int = 100000) -> RunResult:
    k = P.n if agent_budget is None else agent_budget
    world = World(P, k, start, PROXIMITY)
    proto = BFSProtocol()
    run(world, proto, max_rounds)
    if world.agents[1].scratch.get("exhausted"):
        raise BudgetExhausted(f"{k} agents are not enough", world)
    return collect(world, "bfs")
