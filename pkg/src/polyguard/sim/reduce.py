"""Shrink a finished placement to the triplet placement.

The settled agents send what they see up their link tree (each agent's
link is the settled agent it reports to).  Once the root holds every
vertex it knows the whole polygon, computes the triplet placement and
assigns each target to a free agent that is fewest visibility hops away.
The plan travels back down the link tree; at an agreed round every agent
starts walking its route, one hop per round.  Agents without a target walk
back to the root's position and stop being guards.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from ..central import GuardPlacement, central_guards
from ..geometry import points_visible
from .world import PROXIMITY, Protocol, ProtocolError, World, step


def _key(p):
    return (float(p[0]), float(p[1]))


class ReduceProtocol(Protocol):
    def __init__(self, world: World, root_id: int = 1):
        self.perception = world.perception
        self.root_id = root_id
        self.P = world.polygon
        self.r0 = world.round
        self.done = False
        for a in world.agents.values():
            linked = a.status == "settled"
            a.scratch["rd"] = {
                "phase": "hello",
                "link": a.scratch.get("link", a.parent) if linked else None,
                "spare": not linked,
                "kids": set(),
                "heard": {},
                "plan": None,
                "route": [],
                "start": None,
                "sent_plan": False,
            }

    # -- what an agent knows about itself -------------------------------
    def _card(self, agent, view) -> dict:
        if self.perception == PROXIMITY:
            sees = sorted(view.labels)
            pos = agent.vertex
        else:
            sees = sorted(view.region.visible_vertices())
            pos = [float(c) for c in agent.position]
        return {"pos": pos, "sees": sees, "settled": agent.status == "settled"}

    def communicate(self, rnd, agent, view):
        rd = agent.scratch["rd"]
        out = []
        if rd["phase"] == "hello":
            rd["phase"] = "gather"
            if rd["spare"]:
                # unused agents join through the root if they can see it, otherwise they stay out
                if self.root_id not in view.agents:
                    rd["phase"] = "over"
                    return out
                rd["link"] = self.root_id
            rd["card"] = self._card(agent, view)
            if rd["link"] is not None and agent.id != self.root_id:
                out.append((rd["link"], {"hello": True}))
            return out
        if rd["phase"] == "gather" and rnd > self.r0 and set(rd["heard"]) >= rd["kids"]:
            cards = {agent.id: rd["card"]}
            depth = 0
            for k, (c, d) in rd["heard"].items():
                cards.update(c)
                depth = max(depth, d + 1)
            if agent.id == self.root_id or rd["link"] is None:
                if agent.id == self.root_id:
                    rd["plan"] = self._make_plan(cards, rnd + depth + 1)
                    rd["phase"] = "plan"
            else:
                out.append((rd["link"], {"cards": cards, "depth": depth}))
                rd["phase"] = "wait"
        if rd["plan"] is not None and not rd["sent_plan"]:
            rd["sent_plan"] = True
            out += [(k, {"plan": rd["plan"]}) for k in sorted(rd["kids"])]
            self._adopt(agent, rd)
        return out

    def _adopt(self, agent, rd):
        plan = rd["plan"]
        rd["start"] = plan["start"]
        rd["route"] = list(plan["routes"].get(str(agent.id), []))
        rd["role"] = plan["roles"].get(str(agent.id), "idle")
        rd["phase"] = "armed"

    def move(self, rnd, agent, view, inbox):
        rd = agent.scratch["rd"]
        for m in inbox:
            p = m.payload
            if "hello" in p:
                rd["kids"].add(m.sender)
            elif "cards" in p:
                rd["heard"][m.sender] = (p["cards"], p["depth"])
            elif "plan" in p:
                rd["plan"] = p["plan"]
        if rd["phase"] != "armed" or rnd < rd["start"]:
            return None
        if not rd["route"]:
            self._finish(agent, rd, agent.vertex)
            return None
        agent.status = "moving"
        t = rd["route"].pop(0)
        if not rd["route"]:
            self._finish(agent, rd, t if self.perception == PROXIMITY else None)
        return t

    def _finish(self, agent, rd, vertex):
        rd["phase"] = "over"
        if rd["role"] == "guard":
            agent.settle(vertex)
        else:
            agent.status = "retracted"
            agent.settled_vertex = None

    def finished(self, world):
        return all(a.scratch["rd"]["phase"] == "over" for a in world.agents.values())

    # -- the root's computation ----------------------------------------------
    def _make_plan(self, cards: dict, start: int) -> dict:
        P = self.P
        known = set()
        for c in cards.values():
            known.update(c["sees"])
        if len(known) < P.n:
            raise ProtocolError("the gathered views miss part of the polygon")
        if P.n >= 4:
            targets = central_guards(P)
            tpos = [t if self.perception != PROXIMITY else v for t, v in zip(targets.guards, targets.vertex_ids)]
        else:
            tpos = [P.vertices[0] if self.perception != PROXIMITY else 0]
        ids = sorted(int(i) for i in cards)
        keep = [i for i in ids if cards[i]["settled"]]
        if len(keep) <= len(tpos):
            # already small enough: nobody moves
            roles = {str(i): "guard" if cards[i]["settled"] else "surplus" for i in ids}
            return {"start": start, "routes": {}, "roles": roles}
        pos = {i: cards[i]["pos"] for i in ids}
        pt = (lambda q: P.vertices[q]) if self.perception == PROXIMITY else (lambda q: _key(q))
        places = sorted({_key(pt(pos[i])) for i in ids})
        where = {i: _key(pt(pos[i])) for i in ids}
        label = {_key(pt(pos[i])): pos[i] for i in ids}
        adj = {a: [b for b in places if b != a and points_visible(P, a, b, check=False)] for a in places}
        free = set(ids)
        routes, roles = {}, {}
        for tq in tpos:
            tp = _key(pt(tq))
            # hops from every place to the target
            dist = {}
            q = deque()
            for a in places:
                if a == tp or points_visible(P, a, tp, check=False):
                    dist[a] = 1 if a != tp else 0
                    q.append(a)
            nxt = {a: tp for a in dist}
            while q:
                a = q.popleft()
                for b in adj[a]:
                    if b not in dist:
                        dist[b] = dist[a] + 1
                        nxt[b] = a
                        q.append(b)
            cand = [i for i in free if where[i] in dist]
            if not cand:
                raise ProtocolError("no free agent can reach a target")
            i = min(cand, key=lambda i: (dist[where[i]], i))
            free.discard(i)
            path, a = [], where[i]
            while a != tp:
                a = nxt[a]
                path.append(tq if a == tp else label[a])
            routes[str(i)] = path
            roles[str(i)] = "guard"
        home = where[self.root_id]
        # shortest hop paths back to the root's place for everyone left
        dist = {home: 0}
        prev = {}
        q = deque([home])
        while q:
            a = q.popleft()
            for b in adj[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    prev[b] = a
                    q.append(b)
        for i in sorted(free):
            a, path = where[i], []
            while a != home:
                a = prev[a]
                path.append(label[a])
            routes[str(i)] = path
            roles[str(i)] = "surplus"
        return {"start": start, "routes": routes, "roles": roles}


@dataclass
class ReduceResult:
    placement: GuardPlacement
    world: World
    rounds: int


def reduce_guards(world: World, root_id: int = 1, max_rounds: Optional[int] = None) -> ReduceResult:
    """Run the reduction on a finished world and return the final guards."""
    if not world.connected():
        raise ProtocolError("the input agents are not visibly connected")
    proto = ReduceProtocol(world, root_id)
    r0 = world.round
    limit = max_rounds if max_rounds is not None else 10 * len(world.agents) + 20
    while not proto.finished(world):
        if world.round - r0 > limit:
            raise ProtocolError("reduction did not finish")
        step(world, proto)
    out = GuardPlacement()
    for i in sorted(world.agents):
        a = world.agents[i]
        if a.status == "settled":
            v = a.vertex if a.vertex is not None else -1
            out.add(a.position, f"agent:{i}", v)
    return ReduceResult(out, world, world.round - r0)
