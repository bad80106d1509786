"""Run the level-by-level and the depth-first exploration side by side.

Both copies advance in lockstep from the same start.  As soon as one of
them finishes (ties go to the level-by-level copy) the other copy is
stopped: its root sends a terminate message down its territory tree and
its agents walk back up the tree, each settled agent waiting for all of its
children before it leaves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..geometry import SimplePolygon
from .bfs import BFSProtocol, RunResult, collect
from .dfs import DFSProtocol
from .world import PROXIMITY, BudgetExhausted, Protocol, ProtocolError, World, step


def _bfs_links(agent):
    sc = agent.scratch
    return list(sc.get("children", {})), list(sc.get("expect", [])) + list(sc.get("pool", []))


def _dfs_links(agent):
    sc = agent.scratch
    return list(sc.get("children", {})), list(sc.get("group") or [])


class RetractProtocol(Protocol):
    """Bring every agent of a stopped run back to the root's vertex."""

    perception = PROXIMITY

    def __init__(self, world: World, links, root_id: int = 1):
        self.root_id = root_id
        for a in world.agents.values():
            if a.status != "settled":
                a.scratch["rt"] = None
                continue
            children, attached = links(a)
            a.scratch["rt"] = {
                "terminated": a.id == root_id,
                "forwarded": False,
                "waiting": set(children),
                "carried": list(attached),
                "left": False,
            }

    def communicate(self, rnd, agent, view):
        rt = agent.scratch.get("rt")
        if not rt or not rt["terminated"] or rt["left"]:
            return []
        out = []
        if not rt["forwarded"]:
            out += [(c, {"terminate": True}) for c in sorted(rt["waiting"])]
            rt["forwarded"] = True
        if not rt["waiting"] and agent.parent is not None:
            pv = agent.scratch["parent_vertex"]
            out.append((agent.parent, {"arriving": [agent.id] + rt["carried"]}))
            out += [(c, {"go": pv}) for c in rt["carried"]]
            rt["left"] = True
            rt["target"] = pv
        return out

    def move(self, rnd, agent, view, inbox):
        rt = agent.scratch.get("rt")
        for m in inbox:
            p = m.payload
            if "terminate" in p and rt:
                rt["terminated"] = True
            elif "arriving" in p and rt:
                rt["waiting"].discard(m.sender)
                rt["carried"] += list(p["arriving"])
            elif "go" in p:
                return p["go"]
        if rt and rt["left"] and "target" in rt:
            t = rt.pop("target")
            agent.status = "retracted"
            agent.settled_vertex = None
            return t
        return None

    def finished(self, world):
        rt = world.agents[self.root_id].scratch["rt"]
        return rt["forwarded"] and not rt["waiting"]


@dataclass
class RaceResult:
    winner: str
    result: RunResult
    winner_rounds: int
    retract_rounds: int
    loser_world: World

    @property
    def rounds(self) -> int:
        return self.winner_rounds + self.retract_rounds

    @property
    def placement(self):
        return self.result.placement


def run_race(P: SimplePolygon, agent_budget: Optional[int] = None, start: int = 0, max_rounds: int = 100000) -> RaceResult:
    k = P.n if agent_budget is None else agent_budget
    wb, wd = World(P, k, start, PROXIMITY), World(P, k, start, PROXIMITY)
    pb, pd = BFSProtocol(), DFSProtocol()
    while True:
        if pb.finished(wb) and not wb.agents[1].scratch.get("exhausted"):
            winner, ww, lw, links = "bfs", wb, wd, _dfs_links
            break
        if pd.finished(wd) and not any(a.scratch.get("exhausted") for a in wd.agents.values()):
            winner, ww, lw, links = "dfs", wd, wb, _bfs_links
            break
        if pb.finished(wb) and pd.finished(wd):
            raise BudgetExhausted(f"{k} agents are not enough", wb)
        if wb.round >= max_rounds:
            raise ProtocolError(f"no termination within {max_rounds} rounds")
        if not pb.finished(wb):
            step(wb, pb)
        if not pd.finished(wd):
            step(wd, pd)
    r0 = lw.round
    rp = RetractProtocol(lw, links)
    while not rp.finished(lw):
        if lw.round - r0 > 4 * P.n + 10:
            raise ProtocolError("retraction did not finish")
        step(lw, rp)
    return RaceResult(winner, collect(ww, winner), ww.round, lw.round - r0, lw)
