"""Medial-axis exploration with depth perception.

All agents first walk to a point ``m`` of the medial axis next to the start
vertex.  From there the axis is explored junction by junction: an agent
standing on a junction traces every branch leaving it (through any
degree-two nodes) until the branch reaches the next junction or a leaf.  It
asks for one agent per junction found and one per reflex vertex that bends
a branch into a parabola and has nobody on it yet.  Requests are summed up
the junction tree, the root sends that many agents back down, and the new
junction agents repeat the procedure.

Agents only use polygon objects visible from the point being traced.  A
maximal disc lies inside the polygon, so every object touching it is
visible from its center and the traced nodes agree with the true axis.

Messages travel along anchors: the junction agents and the reflex agents
between them.  A message hops to the farthest anchor the holder can see.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..central import GuardPlacement
from ..geometry import GeometryError, ObjectRef, SimplePolygon, visibility_polygon
from ..medial import _unit, clearance, leaf_node, node_sectors, trace_adjacent_node, trace_from
from .bfs import RunResult
from .world import DEPTH, BudgetExhausted, Protocol, ProtocolError, World, run, settled_tree


def _ref(s: str) -> ObjectRef:
    return ObjectRef("vertex" if s[0] == "v" else "edge", int(s[1:]))


def _pt(p) -> list:
    return [float(p[0]), float(p[1])]


def visible_objects(P: SimplePolygon, vis) -> tuple[np.ndarray, np.ndarray]:
    """Edge and vertex masks of the boundary seen in a visibility polygon."""
    em = np.zeros(P.n, bool)
    vm = np.zeros(P.n, bool)
    for v in vis.visible_vertices():
        vm[v] = True
    pts = vis.points
    m = len(pts)
    for k in range(m):
        if vis.window[k]:
            continue
        loc = P.locate(tuple((pts[k] + pts[(k + 1) % m]) / 2))
        if loc[0] == "edge":
            em[loc[1]] = True
    return em, vm


def reflex_start(P: SimplePolygon, v: int, em, vm) -> np.ndarray:
    """First point on the inner bisector of reflex ``v`` that is as close to another object as to ``v``."""
    n = P.n
    c = P.coords
    u = -(_unit(c[(v + 1) % n] - c[v]) + _unit(c[v - 1] - c[v]))
    u = _unit(u)
    best = np.inf
    for w in np.flatnonzero(vm):
        if w == v:
            continue
        d = c[w] - c[v]
        den = 2 * (u @ d)
        if den > 1e-12:
            best = min(best, (d @ d) / den)
    for e in np.flatnonzero(em):
        if e in (v, (v - 1) % n):
            continue
        a, b = c[e], c[(e + 1) % n]
        t_dir = _unit(b - a)
        nrm = np.array([-t_dir[1], t_dir[0]])  # inward for a counterclockwise boundary
        den = 1 - nrm @ u
        if den <= 1e-12:
            continue
        t = (nrm @ (c[v] - a)) / den
        if t <= 0:
            continue
        foot = (c[v] + t * u - a) @ t_dir
        if 0 <= foot <= np.hypot(*(b - a)):
            best = min(best, t)
    if not np.isfinite(best):
        raise GeometryError(f"no object faces reflex vertex {v}")
    return c[v] + best * u


class Explorer:
    """Branch tracing restricted to what is visible from the traced points."""

    def __init__(self, P: SimplePolygon):
        self.P = P
        self._masks: dict[tuple, tuple] = {}

    def masks(self, x) -> tuple[np.ndarray, np.ndarray]:
        key = (float(x[0]), float(x[1]))
        r = self._masks.get(key)
        if r is None:
            r = self._masks[key] = visible_objects(self.P, visibility_polygon(self.P, key))
        return r

    def piece(self, x, objs, pair, hint, em, vm, samples: int = 8):
        """Trace to the next node, widening the masks with what the swept curve sees.

        An object met by the disc is visible from the disc's center, so the
        trace is repeated with everything seen from points along the traced
        curve until the end point stops changing.
        """
        P = self.P
        e2, v2 = self.masks(x)
        em, vm = em | e2, vm | v2
        for _ in range(P.n + 2):
            res = trace_from(P, x, pair, hint, edge_mask=em, vertex_mask=vm, exclude=objs)
            s0, s1 = res.params
            if res.is_leaf:
                s1 = res.curve.param_at(res.position)
            grown = False
            for t in np.linspace(0, 1, samples + 1)[1:]:
                q = res.curve.point(s0 + (s1 - s0) * t)
                if not P.contains(tuple(q)):
                    continue
                e3, v3 = self.masks(q)
                if (e3 & ~em).any() or (v3 & ~vm).any():
                    em, vm = em | e3, vm | v3
                    grown = True
            if not grown:
                return res
        raise ProtocolError("tracing did not settle")

    def branch(self, x, objs, sector, em, vm) -> dict:
        """Trace one branch from ``x``; degree-two nodes are passed through."""
        P = self.P
        cur, cur_objs = np.asarray(x, float), frozenset(objs)
        pair, hint = sector.pair, sector.mid
        waypoints, reflex = [], []
        for _ in range(4 * P.n + 8):
            res = self.piece(cur, cur_objs, pair, hint, em, vm)
            if res.curve.kind == "ve":
                r = next(o.index for o in pair if o.kind == "vertex")
                if r not in reflex:
                    reflex.append(r)
                    waypoints.append(("reflex", r, _pt(P.coords[r])))
            if res.is_leaf:
                return {"end": "leaf", "vertex": res.vertex, "waypoints": waypoints, "reflex": reflex}
            secs = node_sectors(P, res.position, res.objects)
            back = max((s for s in secs if set(s.pair) == set(pair)), key=lambda s: s.mid @ res.arrival)
            rest = [s for s in secs if s is not back]
            waypoints.append(("node", None, _pt(res.position)))
            if len(rest) == 1:
                cur, cur_objs = res.position, res.objects
                pair, hint = rest[0].pair, rest[0].mid
                continue
            return {
                "end": "junction",
                "node": {"pos": _pt(res.position), "objs": sorted(repr(o) for o in res.objects)},
                "arrival": {"pair": [repr(o) for o in pair], "dir": _pt(res.arrival)},
                "waypoints": waypoints,
                "reflex": reflex,
            }
        raise ProtocolError("branch tracing did not end")


class MedialProtocol(Protocol):
    perception = DEPTH

    def __init__(self, P: SimplePolygon, start: int):
        self.root_id = 1
        self.start = start
        self.ex = Explorer(P)

    # -- mail ---------------------------------------------------------------
    @staticmethod
    def _post(agent, path, body):
        agent.scratch.setdefault("queue", []).append({"path": list(path), "body": body})

    @staticmethod
    def _flush(agent, view) -> list:
        """Hand every queued packet to the farthest visible agent on its path."""
        q = agent.scratch.get("queue", [])
        keep, batches = [], {}
        for pk in q:
            path = pk["path"]
            hops = [k for k, i in enumerate(path) if i in view.agents]
            if not hops:
                keep.append(pk)
                continue
            k = hops[-1]
            batches.setdefault(path[k], []).append({"path": path[k:], "body": pk["body"]})
        agent.scratch["queue"] = keep
        return [(to, {"packets": pks}) for to, pks in sorted(batches.items())]

    def _receive(self, agent, inbox) -> list:
        mine = []
        for m in inbox:
            for pk in m.payload.get("packets", []):
                rest = pk["path"][1:]
                if rest:
                    self._post(agent, rest, pk["body"])
                else:
                    mine.append(pk["body"])
        return mine

    # -- junction logic ---------------------------------------------------------
    @staticmethod
    def _init_junction(agent, node, arrival, up):
        agent.scratch.update(
            role="junction", fresh=True, node=node, arrival=arrival, up=up,
            own=[], children={}, active=set(), reports={}, demand={}, expect=[],
            collecting=True, done=False,
        )

    def _explore(self, agent, view):
        P = self.ex.P
        sc = agent.scratch
        x = np.asarray(sc["node"]["pos"], float)
        objs = frozenset(_ref(s) for s in sc["node"]["objs"])
        em, vm = visible_objects(P, view.region)
        secs = node_sectors(P, x, objs)
        arr = sc["arrival"]
        if arr is not None:
            pair = {_ref(s) for s in arr["pair"]}
            d = np.asarray(arr["dir"], float)
            back = max((s for s in secs if set(s.pair) == pair), key=lambda s: s.mid @ d)
            secs = [s for s in secs if s is not back]
        occupied = {tuple(p): i for i, p in view.agents.items()}
        claimed: dict[int, int] = {}
        own = []
        for k, s in enumerate(secs):
            br = self.ex.branch(x, objs, s, em, vm)
            route = []
            anchors = []
            for kind, r, p in br["waypoints"]:
                route.append(p)
                if kind != "reflex":
                    continue
                holder = occupied.get(tuple(p))
                if holder is not None:
                    anchors.append(("agent", holder))
                elif r in claimed:
                    anchors.append(("request", claimed[r]))
                else:
                    # the new reflex agent reports through the anchor before it
                    prev = anchors[-1] if anchors else ("agent", agent.id)
                    own.append({"role": "reflex", "vertex": r, "route": list(route), "branch": k, "prev": prev})
                    claimed[r] = len(own) - 1
                    anchors.append(("request", claimed[r]))
            if br["end"] == "junction":
                own.append({"role": "junction", "node": br["node"], "arrival": br["arrival"],
                            "route": route, "branch": k, "anchors": anchors})
        sc["own"] = own
        agent.pending_gap_count = len(own)

    @staticmethod
    def _resolve(sc, anchor):
        kind, val = anchor
        if kind == "agent":
            return val
        return sc.get("reflex_ids", {}).get(val)

    def _plan(self, agent, ids):
        sc = agent.scratch
        ids = list(ids)
        orders, incoming = {}, {}
        for c, need in sorted(sc["demand"].items()):
            take, ids = ids[:need], ids[need:]
            if take:
                incoming[c] = take
                for t in take:
                    orders[t] = {"role": "pass", "route": sc["children"][c]["route"], "host": c}
        own = sc["own"]
        while own and ids:
            req = own.pop(0)
            t = ids.pop(0)
            if req["role"] == "reflex":
                link = self._resolve(sc, req["prev"])
                orders[t] = {"role": "reflex", "route": req["route"], "vertex": req["vertex"], "host": agent.id,
                             "link": agent.id if link is None else link}
                sc.setdefault("reflex_ids", {})[req["_key"]] = t
                continue
            mids = [i for i in (self._resolve(sc, a) for a in req["anchors"]) if i is not None]
            down = mids + [t]
            orders[t] = {"role": "junction", "route": req["route"], "node": req["node"],
                         "arrival": req["arrival"], "up": list(reversed(mids)) + [agent.id]}
            sc["children"][t] = {"down": down, "route": req["route"]}
            sc["active"].add(t)
        sc["demand"] = {}
        return orders, incoming, ids

    def _send_orders(self, agent, orders, incoming):
        for t, o in orders.items():
            self._post(agent, [t], {"order": o})
        for c, ids in incoming.items():
            self._post(agent, agent.scratch["children"][c]["down"], {"incoming": ids})

    def _junction_round(self, agent, view):
        sc = agent.scratch
        if sc["fresh"]:
            self._explore(agent, view)
            for k, req in enumerate(sc["own"]):
                req["_key"] = k
            sc["fresh"] = False
        if sc["collecting"] and set(sc["reports"]) >= sc["active"]:
            for c, k in sc["reports"].items():
                if k == 0:
                    sc["active"].discard(c)
            sc["demand"] = {c: k for c, k in sc["reports"].items() if k > 0}
            total = len(sc["own"]) + sum(sc["demand"].values())
            sc["reports"] = {}
            sc["collecting"] = False
            if sc["up"] is not None:
                self._post(agent, sc["up"], {"report": total, "from": agent.id})
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
                self._send_orders(agent, orders, incoming)
                sc["collecting"] = True
                if sc.get("exhausted"):
                    sc["done"] = True
            return
        here = tuple(agent.position)
        if sc["expect"] and all(tuple(view.agents.get(t, ())) == here for t in sc["expect"]):
            orders, incoming, rest = self._plan(agent, sc["expect"])
            if rest:
                raise ProtocolError(f"agent {agent.id} received more agents than it asked for")
            sc["expect"] = []
            sc["collecting"] = True
            self._send_orders(agent, orders, incoming)

    # -- round hooks ------------------------------------------------------------
    def _root_start(self, agent, view):
        P = self.ex.P
        v = self.start
        em, vm = visible_objects(P, view.region)
        if P.is_reflex(v):
            m = reflex_start(P, v, em, vm)
        else:
            leaf = leaf_node(P, v)
            n = P.n
            pair = (ObjectRef("edge", (v - 1) % n), ObjectRef("edge", v))
            m = np.asarray(trace_adjacent_node(P, leaf, pair, edge_mask=em, vertex_mask=vm).position, float)
        _, objs = clearance(P, m)
        node = {"pos": _pt(m), "objs": sorted(repr(o) for o in objs)}
        self._init_junction(agent, node, None, None)
        agent.settle(None)
        sc = agent.scratch
        sc["pool"] = sorted(view.agents)
        sc["target"] = node["pos"]
        sc["fresh"] = False
        sc["gather"] = True
        for i in sc["pool"]:
            self._post(agent, [i], {"order": {"role": "pool", "route": [node["pos"]]}})

    def communicate(self, rnd, agent, view):
        sc = agent.scratch
        if rnd == 0 and agent.id == self.root_id:
            self._root_start(agent, view)
        elif sc.get("role") == "junction" and not sc["done"]:
            if sc.pop("gather", False):
                sc["fresh"] = True
            self._junction_round(agent, view)
        return self._flush(agent, view)

    def move(self, rnd, agent, view, inbox):
        sc = agent.scratch
        for body in self._receive(agent, inbox):
            if "report" in body:
                sc["reports"][body["from"]] = body["report"]
            elif "incoming" in body:
                sc["expect"] = list(body["incoming"])
            elif "order" in body:
                o = body["order"]
                sc["role"] = "travel"
                sc["order"] = o
                sc["route"] = [list(p) for p in o["route"]]
        if "target" in sc:
            return sc.pop("target")
        if sc.get("role") != "travel":
            return None
        route = sc["route"]
        if not route:
            return self._arrive(agent, sc)
        seen = [k for k, p in enumerate(route) if view.sees(p)]
        if not seen:
            raise ProtocolError(f"agent {agent.id} lost sight of its route")
        k = seen[-1]
        target = route[k]
        sc["route"] = route[k + 1:]
        if not sc["route"]:
            self._arrive(agent, sc)
        return target

    def _arrive(self, agent, sc):
        o = sc.pop("order")
        role = o["role"]
        if role == "junction":
            agent.settle(None)
            agent.parent = o["up"][-1]
            sc["link"] = o["up"][0]
            self._init_junction(agent, o["node"], o["arrival"], o["up"])
        elif role == "reflex":
            agent.settle(o["vertex"])
            agent.parent = o["host"]
            sc["link"] = o["link"]
            sc["role"] = "reflex"
        elif role == "pass":
            sc["role"] = "waiting"
            sc["host"] = o["host"]
        else:
            sc["role"] = "pool"
        return None

    def finished(self, world):
        return world.round > 0 and world.agents[self.root_id].scratch.get("done", False) and not any(
            a.scratch.get("queue") for a in world.agents.values()
        )


def collect_medial(world: World) -> RunResult:
    out = GuardPlacement()
    seen = set()
    for i in sorted(world.agents):
        a = world.agents[i]
        if a.status != "settled":
            continue
        key = tuple(a.position)
        if key in seen:
            continue
        seen.add(key)
        v = a.settled_vertex if a.settled_vertex is not None else -1
        out.add(a.position, f"agent:{i}", v)
    return RunResult(out, settled_tree(world), world, {}, "medial")


def run_medial(P: SimplePolygon, agent_budget: Optional[int] = None, start: int = 0, max_rounds: int = 100000) -> RunResult:
    k = P.n if agent_budget is None else agent_budget
    world = World(P, k, P.vertices[start], DEPTH)
    run(world, MedialProtocol(P, start), max_rounds)
    if world.agents[1].scratch.get("exhausted"):
        raise BudgetExhausted(f"{k} agents are not enough", world)
    return collect_medial(world)
