"""Arena drafts, card-value draft policies and deck construction."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .cardset import CardSet

DRAFT_TURNS = 30
CHOICES = 3


@dataclass(frozen=True)
class Draft:
    """Thirty turns, each offering three distinct card ids."""

    turns: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.turns) != DRAFT_TURNS:
            raise ValueError(f"a draft has {DRAFT_TURNS} turns, got {len(self.turns)}")
        for t, turn in enumerate(self.turns):
            if len(turn) != CHOICES or len(set(turn)) != CHOICES:
                raise ValueError(f"turn {t} must offer {CHOICES} distinct cards, got {turn}")

    def as_array(self) -> np.ndarray:
        return np.array(self.turns, dtype=np.int64)

    def card_ids(self) -> set[int]:
        return {c for turn in self.turns for c in turn}

    def to_text(self) -> str:
        return "\n".join(",".join(str(c) for c in turn) for turn in self.turns) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Draft":
        turns = []
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                turns.append(tuple(int(v) for v in line.split(",")))
        return cls(tuple(turns))


def check_draft(draft: Draft, card_set: CardSet) -> None:
    for t, turn in enumerate(draft.turns):
        for c in turn:
            if c not in card_set:
                raise ValueError(f"turn {t}: unknown card id {c}")


def uniform_turn(rng: np.random.Generator, set_size: int) -> tuple[int, int, int]:
    """Three distinct ids drawn uniformly from ``1..set_size``."""
    picks = rng.choice(set_size, size=CHOICES, replace=False) + 1
    return (int(picks[0]), int(picks[1]), int(picks[2]))


TurnGenerator = Callable[[np.random.Generator, int], tuple]


def generate_draft(card_set: CardSet, seed: int, turn_generator: TurnGenerator = uniform_turn) -> Draft:
    """A seeded draft; turns are independent and never repeat a card within a turn."""
    size = len(card_set)
    if size < CHOICES:
        raise ValueError(f"need at least {CHOICES} cards to draft, got {size}")
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    return Draft(tuple(turn_generator(rng, size) for _ in range(DRAFT_TURNS)))


def generate_drafts(card_set: CardSet, seed: int, count: int) -> list[Draft]:
    seeds = np.random.SeedSequence(seed & 0xFFFFFFFFFFFFFFFF).generate_state(count, dtype=np.uint64)
    return [generate_draft(card_set, int(s)) for s in seeds]


def drafts_to_text(drafts: Sequence[Draft]) -> str:
    return "\n".join(d.to_text() for d in drafts)


def drafts_from_text(text: str) -> list[Draft]:
    """Parse drafts separated by blank lines."""
    drafts, block = [], []
    for line in text.splitlines() + [""]:
        if line.strip():
            block.append(line)
        elif block:
            drafts.append(Draft.from_text("\n".join(block)))
            block = []
    return drafts


@dataclass(frozen=True, eq=False)
class DraftPolicy:
    """Card values in ``[0, 1]``; ``values[i]`` belongs to card id ``i + 1``."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("policy values must be a vector")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("policy values must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        return isinstance(other, DraftPolicy) and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def value(self, card_id: int) -> float:
        return float(self.values[card_id - 1])

    def to_json(self, card_set: Optional[CardSet] = None) -> str:
        payload = {"values": self.values.tolist()}
        if card_set is not None:
            payload["card_set"] = card_set.fingerprint
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str, card_set: Optional[CardSet] = None) -> "DraftPolicy":
        payload = json.loads(text)
        if isinstance(payload, list):
            payload = {"values": payload}
        policy = cls(np.asarray(payload["values"], dtype=np.float64))
        if card_set is not None:
            if len(policy) != len(card_set):
                raise ValueError(f"policy has {len(policy)} values for {len(card_set)} cards")
            stamp = payload.get("card_set")
            if stamp is not None and stamp != card_set.fingerprint:
                raise ValueError("policy was trained on a different card set")
        return policy


def _values(policy) -> np.ndarray:
    return policy.values if isinstance(policy, DraftPolicy) else np.asarray(policy)


def pick(policy, turn: Sequence[int]) -> int:
    """1-based slot of the highest-valued offered card; the lowest slot wins ties."""
    values = _values(policy)
    best = 0
    for slot in range(1, len(turn)):
        if values[turn[slot] - 1] > values[turn[best] - 1]:
            best = slot
    return best + 1


def build_deck(policy, draft: Draft) -> list[int]:
    """The 30 picked card ids, in pick order."""
    values = _values(policy)
    arr = draft.as_array()
    slots = np.argmax(values[arr - 1], axis=1)
    return arr[np.arange(DRAFT_TURNS), slots].tolist()


def active_genes(drafts: Iterable[Draft]) -> frozenset[int]:
    """Every card id offered anywhere in ``drafts``."""
    drafts = list(drafts)
    if not drafts:
        raise ValueError("need at least one draft")
    return frozenset(c for d in drafts for turn in d.turns for c in turn)


def active_mask(drafts: Iterable[Draft], set_size: int) -> np.ndarray:
    mask = np.zeros(set_size, dtype=bool)
    for c in active_genes(drafts):
        mask[c - 1] = True
    return mask


def count_draft_space(set_size: int, turns: int, choices: int) -> int:
    """Number of distinct drafts: ``(set_size)_choices ** turns`` as an exact integer."""
    if set_size < 0 or turns < 0 or choices < 0:
        raise ValueError("arguments must be non-negative")
    if choices > set_size:
        raise ValueError(f"cannot offer {choices} distinct cards from {set_size}")
    return math.perm(set_size, choices) ** turns


def expected_active_count(set_size: int, drafts: int = 1) -> float:
    """Expected number of distinct ids in ``drafts`` uniform drafts."""
    absent_one_turn = math.comb(set_size - 1, CHOICES) / math.comb(set_size, CHOICES)
    return set_size * (1.0 - absent_one_turn ** (DRAFT_TURNS * drafts))
