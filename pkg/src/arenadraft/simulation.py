"""Batched game simulation and simulated-game cost accounting.

All training and evaluation code plays games through :class:`Simulator`.
Built-in agents run on the compiled kernel; any other agent object falls
back to the reference engine. Both paths consume identical random streams,
so the choice of backend never changes a result.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .agents import PlayingAgent
from .cardset import CardSet
from .engine import Agent, Outcome, agent_seed, simulate_game

try:
    from . import _kernel
except ImportError:  # pragma: no cover - numba missing
    _kernel = None

BACKENDS = ("auto", "python", "compiled")
_KIND_CODES = {"random": 0, "greedy": 1}

# half-point credit per outcome, from player 0's perspective
HALF_POINTS = {Outcome.WIN_P0: (2, 0), Outcome.WIN_P1: (0, 2), Outcome.DRAW: (1, 1)}


@dataclass
class CostCounter:
    """Monotone count of simulated games."""

    games: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add(self, count: int) -> None:
        if count < 0:
            raise ValueError("cost can only grow")
        with self._lock:
            self.games += count


@dataclass(frozen=True)
class GameJob:
    deck0: tuple[int, ...]
    deck1: tuple[int, ...]
    seed: int


class Simulator:
    """Plays game batches for a fixed pair of agents over one card set.

    Args:
        card_set: the card universe.
        agent0: agent seated as player 0.
        agent1: agent seated as player 1 (defaults to ``agent0``).
        backend: ``"auto"`` picks the compiled kernel when both agents are
            built-in, ``"python"`` forces the reference engine.
        workers: kernel thread count; results do not depend on it.
        cost: counter incremented once per game played.
        lanes: number of board lanes (1 or 2).
    """

    def __init__(
        self,
        card_set: CardSet,
        agent0: Agent,
        agent1: Optional[Agent] = None,
        backend: str = "auto",
        workers: int = 1,
        cost: Optional[CostCounter] = None,
        lanes: int = 2,
    ):
        if lanes not in (1, 2):
            raise ValueError(f"lanes must be 1 or 2, got {lanes}")
        if backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        self.card_set = card_set
        self.agents = (agent0, agent1 if agent1 is not None else agent0)
        self.workers = max(1, int(workers))
        self.lanes = lanes
        self.cost = cost if cost is not None else CostCounter()
        builtin = all(isinstance(a, PlayingAgent) for a in self.agents)
        if backend == "compiled" and not (builtin and _kernel is not None):
            raise ValueError("compiled backend needs numba and built-in agents")
        self.compiled = backend != "python" and builtin and _kernel is not None
        if self.compiled:
            self._table = np.array(card_set.table, dtype=np.int64)
            self._kinds = np.array([_KIND_CODES[a.kind] for a in self.agents], dtype=np.int64)

    def play(self, jobs: Sequence[GameJob]) -> list[Outcome]:
        """Play every job; outcomes come back in job order."""
        if not jobs:
            return []
        if self.compiled:
            outcomes = self._play_compiled(jobs)
        else:
            a0, a1 = self.agents
            outcomes = [
                simulate_game(j.deck0, j.deck1, a0, a1, self.card_set, j.seed, lanes=self.lanes) for j in jobs
            ]
        self.cost.add(len(jobs))
        return outcomes

    def _play_compiled(self, jobs: Sequence[GameJob]) -> list[Outcome]:
        m = len(jobs)
        decks0 = np.array([j.deck0 for j in jobs], dtype=np.int64)
        decks1 = np.array([j.deck1 for j in jobs], dtype=np.int64)
        seeds = np.empty((m, 3), dtype=np.uint64)
        a0, a1 = self.agents
        for i, j in enumerate(jobs):
            seeds[i, 0] = j.seed
            seeds[i, 1] = agent_seed(j.seed, 0, a0)
            seeds[i, 2] = agent_seed(j.seed, 1, a1)
        kinds = np.broadcast_to(self._kinds, (m, 2)).copy()
        if self.workers > 1:
            import numba

            numba.set_num_threads(min(self.workers, numba.config.NUMBA_NUM_THREADS))
        codes = _kernel.play_many(self._table, decks0, decks1, seeds, kinds, self.lanes)
        return [Outcome(int(c)) for c in codes]

    def trace(self, job: GameJob, max_actions: int = 4096) -> tuple[Outcome, list[tuple[int, ...]]]:
        """Play one job on the kernel and return its outcome and action rows."""
        if not self.compiled:
            raise RuntimeError("trace needs the compiled backend")
        a0, a1 = self.agents
        seeds = np.array([job.seed, agent_seed(job.seed, 0, a0), agent_seed(job.seed, 1, a1)], dtype=np.uint64)
        buf = np.zeros((max_actions, 5), dtype=np.int64)
        code, n = _kernel.play(
            self._table,
            np.array(job.deck0, dtype=np.int64),
            np.array(job.deck1, dtype=np.int64),
            seeds,
            self._kinds,
            self.lanes,
            buf,
        )
        return Outcome(int(code)), [tuple(int(v) for v in row) for row in buf[:n]]
