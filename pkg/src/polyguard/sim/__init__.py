"""Synchronous multi-agent simulator and the exploration protocols."""
from .bfs import RunResult, run_bfs
from .dfs import run_dfs
from .medial import run_medial
from .race import RaceResult, run_race
from .reduce import ReduceResult, reduce_guards
from .world import BudgetExhausted, ProtocolError, World, trace_hash

__all__ = [
    "BudgetExhausted",
    "ProtocolError",
    "RaceResult",
    "ReduceResult",
    "RunResult",
    "World",
    "reduce_guards",
    "run_bfs",
    "run_dfs",
    "run_medial",
    "run_race",
    "trace_hash",
]
