import pytest

from arenadraft.cardset import CardSet, default_card_set, load_card_set
from arenadraft.engine import Creature, GameState, PlayerState


@pytest.fixture(scope="session")
def cards160() -> CardSet:
    return default_card_set()


def card_set_from(*records: str) -> CardSet:
    return load_card_set("\n".join(records) + "\n")


def bare_state(card_set: CardSet, hp=(30, 30), mana=(0, 0), active=0, lanes=2) -> GameState:
    """A mid-game state with empty decks, hands and boards."""
    players = (PlayerState([]), PlayerState([]))
    for p, h, m in zip(players, hp, mana):
        p.hp = h
        p.max_mana = p.mana = m
    return GameState(players, active, 1, None, card_set, lanes)


def put(state: GameState, player: int, card: int, lane: int = 0, ready: bool = True) -> Creature:
    """Place a creature of ``card`` directly on the board."""
    row = state.table[card]
    c = Creature(card, row[2], row[3], row[4], lane, can_attack=ready)
    state.players[player].lanes[lane].append(c)
    return c
