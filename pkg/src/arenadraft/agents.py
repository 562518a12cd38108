"""Playing agents used to estimate draft-policy fitness."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import Action, GameState, Outcome, PlayerState, step
from .seeding import GameRng

AGENT_KINDS = ("random", "greedy")


def random_agent_choose(state: GameState, actions: list[Action], rng: GameRng) -> Action:
    """Uniform choice over all legal actions, ``PASS`` included."""
    return actions[rng.below(len(actions))]


def _board_sum(p: PlayerState) -> int:
    total = 0
    for lane in p.lanes:
        for c in lane:
            total += c.attack + c.defense
    return total


def material(state: GameState, player: int) -> int:
    """Creature stat sum difference plus hp difference, from ``player``'s view."""
    me = state.players[player]
    opp = state.players[1 - player]
    return _board_sum(me) - _board_sum(opp) + me.hp - opp.hp


def action_value(state: GameState, action: Action, player: int) -> float:
    nxt = state.clone()
    step(nxt, action)
    if nxt.outcome is not None and nxt.outcome != Outcome.DRAW:
        return math.inf if int(nxt.outcome) == player else -math.inf
    return material(nxt, player)


def greedy_agent_choose(state: GameState, actions: list[Action], rng: GameRng = None) -> Action:
    """One-step material lookahead; the first action in enumeration order wins ties."""
    player = state.active
    best = actions[0]
    best_value = -math.inf
    for action in actions:
        value = action_value(state, action, player)
        if value > best_value:
            best, best_value = action, value
            if value == math.inf:
                break
    return best


_CHOOSERS = {"random": random_agent_choose, "greedy": greedy_agent_choose}


@dataclass(frozen=True)
class PlayingAgent:
    """A built-in agent: ``kind`` is ``"random"`` or ``"greedy"``."""

    kind: str = "random"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in _CHOOSERS:
            raise ValueError(f"unknown agent kind {self.kind!r}; expected one of {AGENT_KINDS}")

    def choose(self, state: GameState, actions: list[Action], rng: GameRng) -> Action:
        return _CHOOSERS[self.kind](state, actions, rng)


def make_agent(kind: str, seed: int = 0) -> PlayingAgent:
    return PlayingAgent(kind, seed)
