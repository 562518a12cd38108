"""Deterministic two-lane card game engine.

Rules in brief:

* Each player starts at 30 hp with a 30-card deck. Player 0 draws 4 cards,
  player 1 draws 5, then player 0 takes the first turn.
* At the start of its turn a player gains one max mana (capped at 12),
  refills mana, readies its creatures and draws a card. Hands hold at most
  8 cards (excess draws are burned); drawing from an empty deck raises the
  fatigue counter and deals that much damage to the drawing player.
* Creatures are summoned into one of two lanes (3 per lane) and may only
  attack into their own lane. Guards in the lane must be attacked first.
* Items: green items buff an own creature and grant keywords, red items
  debuff an enemy creature and strip keywords, blue items hit an enemy
  creature or the enemy face.
* A game ends as soon as a player is at or below 0 hp (both at once is a
  draw). After 100 full rounds the higher hp wins, equal hp is a draw.

``apply_action`` is pure (it returns a new state). ``simulate_game`` mutates
a private state in place for speed.
"""

from __future__ import annotations

import hashlib
import json
from enum import IntEnum
from typing import Callable, NamedTuple, Optional, Protocol, Sequence

from .cardset import CardKind, CardSet, Keyword
from .seeding import GameRng, derive_seed

START_HP = 30
DECK_SIZE = 30
HAND_LIMIT = 8
LANE_LIMIT = 3
MAX_MANA = 12
MAX_TURNS = 100
FIRST_HAND = (4, 5)

FACE = -1

PASS = 0
SUMMON = 1
USE_ITEM = 2
ATTACK = 3

_CREATURE = int(CardKind.CREATURE)
_GREEN = int(CardKind.GREEN_ITEM)
_BLUE = int(CardKind.BLUE_ITEM)

_BREAKTHROUGH = int(Keyword.BREAKTHROUGH)
_CHARGE = int(Keyword.CHARGE)
_DRAIN = int(Keyword.DRAIN)
_GUARD = int(Keyword.GUARD)
_LETHAL = int(Keyword.LETHAL)
_WARD = int(Keyword.WARD)


class Outcome(IntEnum):
    WIN_P0 = 0
    WIN_P1 = 1
    DRAW = 2


class Action(NamedTuple):
    """A move. Field meaning depends on ``kind``.

    * ``SUMMON``: ``card`` into ``lane``.
    * ``USE_ITEM``: ``card`` on the creature at ``(lane, slot)``; green items
      target own creatures, red and blue items enemy ones. A blue item with
      ``lane == FACE`` hits the enemy player.
    * ``ATTACK``: own creature at ``(lane, slot)`` attacks enemy slot
      ``target`` in the same lane, or the enemy player when ``target == FACE``.
    """

    kind: int
    card: int = 0
    lane: int = FACE
    slot: int = FACE
    target: int = FACE

    def describe(self) -> str:
        if self.kind == PASS:
            return "PASS"
        if self.kind == SUMMON:
            return f"SUMMON {self.card} lane={self.lane}"
        if self.kind == USE_ITEM:
            where = "face" if self.lane == FACE else f"{self.lane}/{self.slot}"
            return f"USE {self.card} -> {where}"
        where = "face" if self.target == FACE else str(self.target)
        return f"ATTACK {self.lane}/{self.slot} -> {where}"


PASS_ACTION = Action(PASS)


def summon(card: int, lane: int) -> Action:
    return Action(SUMMON, card, lane)


def use_item(card: int, lane: int = FACE, slot: int = FACE) -> Action:
    return Action(USE_ITEM, card, lane, slot)


def attack(lane: int, slot: int, target: int = FACE) -> Action:
    return Action(ATTACK, 0, lane, slot, target)


class IllegalActionError(RuntimeError):
    """An agent or caller tried to apply an action that is not legal."""


class Creature:
    __slots__ = ("card", "attack", "defense", "keywords", "lane", "can_attack", "has_attacked")

    def __init__(self, card, attack, defense, keywords, lane, can_attack=False, has_attacked=False):
        self.card = card
        self.attack = attack
        self.defense = defense
        self.keywords = keywords
        self.lane = lane
        self.can_attack = can_attack
        self.has_attacked = has_attacked

    def clone(self) -> "Creature":
        return Creature(
            self.card, self.attack, self.defense, self.keywords, self.lane, self.can_attack, self.has_attacked
        )

    def has(self, keyword: int) -> bool:
        return bool(self.keywords & keyword)

    def key(self) -> tuple:
        return (self.card, self.attack, self.defense, self.keywords, self.lane, self.can_attack, self.has_attacked)

    def __repr__(self) -> str:
        return f"Creature(card={self.card}, {self.attack}/{self.defense}, kw={self.keywords}, lane={self.lane})"


class PlayerState:
    """One side of the board. ``deck[-1]`` is the top card."""

    __slots__ = ("hp", "max_mana", "mana", "deck", "hand", "lanes", "fatigue")

    def __init__(self, deck: list[int]):
        self.hp = START_HP
        self.max_mana = 0
        self.mana = 0
        self.deck = deck
        self.hand: list[int] = []
        self.lanes: tuple[list[Creature], list[Creature]] = ([], [])
        self.fatigue = 0

    def clone(self) -> "PlayerState":
        p = PlayerState.__new__(PlayerState)
        p.hp = self.hp
        p.max_mana = self.max_mana
        p.mana = self.mana
        p.deck = self.deck[:]
        p.hand = self.hand[:]
        p.lanes = ([c.clone() for c in self.lanes[0]], [c.clone() for c in self.lanes[1]])
        p.fatigue = self.fatigue
        return p

    def creatures(self):
        yield from self.lanes[0]
        yield from self.lanes[1]

    def key(self) -> tuple:
        return (
            self.hp,
            self.max_mana,
            self.mana,
            tuple(self.deck),
            tuple(self.hand),
            tuple(c.key() for c in self.lanes[0]),
            tuple(c.key() for c in self.lanes[1]),
            self.fatigue,
        )


class GameState:
    __slots__ = ("players", "active", "turn", "outcome", "card_set", "table", "lanes")

    def __init__(self, players, active, turn, outcome, card_set: CardSet, lanes: int = 2):
        self.players: tuple[PlayerState, PlayerState] = players
        self.active: int = active
        self.turn: int = turn
        self.outcome: Optional[Outcome] = outcome
        self.card_set = card_set
        self.table = card_set.table
        self.lanes = lanes

    @property
    def over(self) -> bool:
        return self.outcome is not None

    def clone(self) -> "GameState":
        return GameState(
            (self.players[0].clone(), self.players[1].clone()),
            self.active,
            self.turn,
            self.outcome,
            self.card_set,
            self.lanes,
        )

    def key(self) -> tuple:
        outcome = -1 if self.outcome is None else int(self.outcome)
        return (self.players[0].key(), self.players[1].key(), self.active, self.turn, outcome)

    def __eq__(self, other) -> bool:
        return isinstance(other, GameState) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def state_hash(state: GameState) -> str:
    return hashlib.blake2b(repr(state.key()).encode(), digest_size=8).hexdigest()


def _draw(state: GameState, player: PlayerState, count: int) -> None:
    for _ in range(count):
        if player.deck:
            card = player.deck.pop()
            if len(player.hand) < HAND_LIMIT:
                player.hand.append(card)
        else:
            player.fatigue += 1
            player.hp -= player.fatigue


def _check_over(state: GameState) -> None:
    dead0 = state.players[0].hp <= 0
    dead1 = state.players[1].hp <= 0
    if dead0 or dead1:
        if dead0 and dead1:
            state.outcome = Outcome.DRAW
        else:
            state.outcome = Outcome.WIN_P1 if dead0 else Outcome.WIN_P0


def _start_turn(state: GameState) -> None:
    p = state.players[state.active]
    p.max_mana = min(MAX_MANA, p.max_mana + 1)
    p.mana = p.max_mana
    for lane in p.lanes:
        for c in lane:
            c.can_attack = True
            c.has_attacked = False
    _draw(state, p, 1)
    _check_over(state)


def new_game(
    deck0: Sequence[int], deck1: Sequence[int], card_set: CardSet, seed: int, lanes: int = 2
) -> GameState:
    """Shuffle both decks from ``seed``, deal opening hands and start turn 1.

    With ``lanes=1`` creatures can only be summoned into lane 0.
    """
    if lanes not in (1, 2):
        raise ValueError(f"lanes must be 1 or 2, got {lanes}")
    for which, deck in enumerate((deck0, deck1)):
        if len(deck) != DECK_SIZE:
            raise ValueError(f"deck {which} has {len(deck)} cards, expected {DECK_SIZE}")
        for card in deck:
            if card not in card_set:
                raise ValueError(f"deck {which} contains unknown card id {card}")
    rng = GameRng(seed)
    d0, d1 = list(deck0), list(deck1)
    rng.shuffle(d0)
    rng.shuffle(d1)
    state = GameState((PlayerState(d0), PlayerState(d1)), 0, 1, None, card_set, lanes)
    for player, count in zip(state.players, FIRST_HAND):
        _draw(state, player, count)
    _start_turn(state)
    return state


def legal_actions(state: GameState) -> list[Action]:
    """All legal actions in the engine's canonical order, ``PASS`` last."""
    if state.outcome is not None:
        return []
    me = state.players[state.active]
    opp = state.players[1 - state.active]
    table = state.table
    mana = me.mana
    actions = []
    playable = sorted({c for c in me.hand if table[c][1] <= mana})
    if playable:
        open_lanes = [lane for lane in range(state.lanes) if len(me.lanes[lane]) < LANE_LIMIT]
        for card in playable:
            if table[card][0] == _CREATURE:
                for lane in open_lanes:
                    actions.append(Action(SUMMON, card, lane))
        for card in playable:
            kind = table[card][0]
            if kind == _CREATURE:
                continue
            side = me if kind == _GREEN else opp
            for lane in (0, 1):
                for slot in range(len(side.lanes[lane])):
                    actions.append(Action(USE_ITEM, card, lane, slot))
            if kind == _BLUE:
                actions.append(Action(USE_ITEM, card, FACE, FACE))
    for lane in (0, 1):
        mine = me.lanes[lane]
        if not mine:
            continue
        theirs = opp.lanes[lane]
        guards = [i for i, c in enumerate(theirs) if c.keywords & _GUARD]
        targets = guards if guards else list(range(len(theirs))) + [FACE]
        for slot, c in enumerate(mine):
            if c.can_attack and not c.has_attacked:
                for t in targets:
                    actions.append(Action(ATTACK, 0, lane, slot, t))
    actions.append(PASS_ACTION)
    return actions


def _bury(player: PlayerState) -> None:
    for lane in player.lanes:
        if any(c.defense <= 0 for c in lane):
            lane[:] = [c for c in lane if c.defense > 0]


def _play_card_effects(state: GameState, me: PlayerState, opp: PlayerState, row) -> None:
    me.hp += row[5]
    opp.hp += row[6]
    if row[7]:
        _draw(state, me, row[7])


def _fight(me: PlayerState, opp: PlayerState, att: Creature, dfn: Creature) -> None:
    a_dmg = att.attack
    d_dmg = dfn.attack
    a_kw = att.keywords
    d_kw = dfn.keywords
    before = dfn.defense
    dealt = 0
    if a_dmg > 0:
        if d_kw & _WARD:
            dfn.keywords &= ~_WARD
        else:
            dealt = a_dmg
            dfn.defense -= a_dmg
            if a_kw & _LETHAL and dfn.defense > 0:
                dfn.defense = 0
    if d_dmg > 0:
        if a_kw & _WARD:
            att.keywords &= ~_WARD
        else:
            att.defense -= d_dmg
            if d_kw & _LETHAL and att.defense > 0:
                att.defense = 0
    if dealt:
        if a_kw & _BREAKTHROUGH and dfn.defense <= 0 and a_dmg > before:
            opp.hp -= a_dmg - before
        if a_kw & _DRAIN:
            me.hp += dealt


def step(state: GameState, action: Action) -> None:
    """Apply ``action`` to ``state`` in place without a legality check."""
    kind = action[0]
    me = state.players[state.active]
    opp = state.players[1 - state.active]
    if kind == PASS:
        state.active ^= 1
        if state.active == 0:
            state.turn += 1
            if state.turn > MAX_TURNS:
                hp0, hp1 = state.players[0].hp, state.players[1].hp
                state.outcome = (
                    Outcome.DRAW if hp0 == hp1 else (Outcome.WIN_P0 if hp0 > hp1 else Outcome.WIN_P1)
                )
                return
        _start_turn(state)
        return
    if kind == ATTACK:
        att = me.lanes[action[2]][action[3]]
        att.has_attacked = True
        target = action[4]
        if target == FACE:
            opp.hp -= att.attack
            if att.keywords & _DRAIN:
                me.hp += att.attack
        else:
            _fight(me, opp, att, opp.lanes[action[2]][target])
            _bury(me)
            _bury(opp)
        _check_over(state)
        return
    card = action[1]
    row = state.table[card]
    me.mana -= row[1]
    me.hand.remove(card)
    if kind == SUMMON:
        lane = action[2]
        kw = row[4]
        me.lanes[lane].append(Creature(card, row[2], row[3], kw, lane, bool(kw & _CHARGE)))
    else:
        item_kind = row[0]
        if action[2] == FACE:
            opp.hp += row[3]
        else:
            side = me if item_kind == _GREEN else opp
            c = side.lanes[action[2]][action[3]]
            c.attack = max(0, c.attack + row[2])
            c.defense += row[3]
            if item_kind == _GREEN:
                c.keywords |= row[4]
            else:
                c.keywords &= ~row[4]
            _bury(side)
    _play_card_effects(state, me, opp, row)
    _check_over(state)


def apply_action(state: GameState, action: Action) -> GameState:
    """Return the state reached by playing ``action``; ``state`` is untouched.

    Raises:
        IllegalActionError: if ``action`` is not in ``legal_actions(state)``.
    """
    if action not in legal_actions(state):
        raise IllegalActionError(f"illegal action {action} in turn {state.turn}")
    nxt = state.clone()
    step(nxt, action)
    return nxt


class Agent(Protocol):
    kind: str
    seed: int

    def choose(self, state: GameState, actions: list[Action], rng: GameRng) -> Action: ...


def agent_seed(game_seed: int, player: int, agent: Agent) -> int:
    return derive_seed(game_seed, "agent", player, getattr(agent, "seed", 0))


def simulate_game(
    deck0: Sequence[int],
    deck1: Sequence[int],
    agent0: Agent,
    agent1: Agent,
    card_set: CardSet,
    seed: int,
    log: Optional[Callable[[dict], None]] = None,
    lanes: int = 2,
) -> Outcome:
    """Play one full game and return its outcome.

    ``log``, when given, receives one record per action with the hash of
    the state the action was chosen in.
    """
    state = new_game(deck0, deck1, card_set, seed, lanes)
    agents = (agent0, agent1)
    rngs = (GameRng(agent_seed(seed, 0, agent0)), GameRng(agent_seed(seed, 1, agent1)))
    while state.outcome is None:
        actor = state.active
        actions = legal_actions(state)
        action = agents[actor].choose(state, actions, rngs[actor])
        if action not in actions:
            raise IllegalActionError(f"agent {agents[actor]!r} chose illegal action {action}")
        if log is not None:
            log(
                {
                    "turn": state.turn,
                    "actor": actor,
                    "state": state_hash(state),
                    "action": list(action),
                    "text": action.describe(),
                }
            )
        step(state, action)
    if log is not None:
        log({"turn": state.turn, "outcome": state.outcome.name, "state": state_hash(state)})
    return state.outcome


def json_line_logger(fh) -> Callable[[dict], None]:
    def write(record: dict) -> None:
        fh.write(json.dumps(record, sort_keys=True) + "\n")

    return write
