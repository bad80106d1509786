"""Depth-first territory exploration: one group of agents walks the territory tree.

The exploring group always stands next to its current host, a settled
agent.  The host sends the group through its first unexplored gap edge
(clockwise order); the lowest-id explorer settles at the far endpoint and
becomes the next host.  A host with nothing left to explore sends the group
back to its own parent.
"""
from __future__ import annotations

from typing import Optional

from ..geometry import SimplePolygon
from .bfs import RunResult, arc_gap_edges, choose_endpoint, collect, territory_arc
from .world import PROXIMITY, BudgetExhausted, Protocol, World, run


class DFSProtocol(Protocol):
    perception = PROXIMITY

    def __init__(self):
        self.root_id = 1

    @staticmethod
    def _host(agent, parent_vertex, group):
        agent.scratch.update(role="settled", fresh=True, parent_vertex=parent_vertex, group=group,
                             todo=[], children={}, done=False)

    def communicate(self, rnd, agent, view):
        sc = agent.scratch
        if rnd == 0 and agent.id == self.root_id:
            agent.settle(agent.vertex)
            agent.orient = view.labels[0]
            group = sorted(i for i, v in view.agents.items() if v == agent.vertex)
            self._host(agent, None, group)
        if sc.get("role") != "settled" or sc["done"]:
            return []
        if sc["fresh"]:
            arc, flags = territory_arc(view, agent.orient if agent.parent is not None else None, sc["parent_vertex"])
            sc["arc"], sc["flags"] = arc, flags
            sc["todo"] = [choose_endpoint(e, agent.marked_vertex) for e in arc_gap_edges(arc, flags)]
            agent.pending_gap_count = len(sc["todo"])
            sc["fresh"] = False
        group = sc["group"]
        if group is None:
            return []
        if sc["todo"]:
            if not group:
                sc["exhausted"] = sc["done"] = True
                return []
            a, b = sc["todo"].pop(0)
            agent.pending_gap_count = len(sc["todo"])
            leader, rest = group[0], group[1:]
            sc["children"][leader] = (a, b)
            sc["group"] = None
            out = [(leader, {"goto": a, "settle": True, "orient": b, "group": rest})]
            out += [(g, {"goto": a}) for g in rest]
            return out
        if agent.parent is None:
            sc["done"] = True
            return []
        sc["group"] = None
        out = [(g, {"goto": sc["parent_vertex"]}) for g in group]
        out.append((agent.parent, {"returning": group}))
        return out

    def move(self, rnd, agent, view, inbox):
        sc = agent.scratch
        if sc.get("role") == "settled":
            for m in inbox:
                if "returning" in m.payload:
                    sc["group"] = list(m.payload["returning"])
            return None
        for m in inbox:
            p = m.payload
            if "goto" not in p:
                continue
            if p.get("settle"):
                here = agent.vertex
                agent.settle(p["goto"])
                agent.orient = agent.marked_vertex = p["orient"]
                agent.parent = m.sender
                self._host(agent, here, list(p["group"]))
            return p["goto"]
        return None

    def finished(self, world):
        if world.round == 0:
            return False
        if any(a.scratch.get("exhausted") for a in world.agents.values()):
            return True
        return world.agents[self.root_id].scratch.get("done", False)


def run_dfs(P: SimplePolygon, agent_budget: Optional[int] = None, start: int = 0, max_rounds: int = 100000) -> RunResult:
    k = P.n if agent_budget is None else agent_budget
    world = World(P, k, start, PROXIMITY)
    run(world, DFSProtocol(), max_rounds)
    if any(a.scratch.get("exhausted") for a in world.agents.values()):
        raise BudgetExhausted(f"{k} agents are not enough", world)
    return collect(world, "dfs")
