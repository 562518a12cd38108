"""Card definitions, the card file format, and seeded card-set generation.

A card file holds one semicolon-separated record per line::

    id;name;kind;cost;attack;defense;keywords;playerHP;enemyHP;cardDraw

``kind`` is one of ``creature``, ``itemGreen``, ``itemRed``, ``itemBlue`` and
``keywords`` is a six character mask over ``BCDGLW`` with ``-`` marking an
absent keyword. Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from enum import IntEnum, IntFlag
from functools import cached_property
from importlib import resources
from typing import Iterable, Optional

import numpy as np

MAX_COST = 12
KEYWORD_LETTERS = "BCDGLW"
_MASK_RE = re.compile(r"^[B-][C-][D-][G-][L-][W-]$")


class CardKind(IntEnum):
    CREATURE = 0
    GREEN_ITEM = 1
    RED_ITEM = 2
    BLUE_ITEM = 3


_KIND_TOKENS = {
    "creature": CardKind.CREATURE,
    "itemGreen": CardKind.GREEN_ITEM,
    "itemRed": CardKind.RED_ITEM,
    "itemBlue": CardKind.BLUE_ITEM,
}
_TOKEN_OF_KIND = {kind: token for token, kind in _KIND_TOKENS.items()}


class Keyword(IntFlag):
    NONE = 0
    BREAKTHROUGH = 1
    CHARGE = 2
    DRAIN = 4
    GUARD = 8
    LETHAL = 16
    WARD = 32


ALL_KEYWORDS = (
    Keyword.BREAKTHROUGH,
    Keyword.CHARGE,
    Keyword.DRAIN,
    Keyword.GUARD,
    Keyword.LETHAL,
    Keyword.WARD,
)


def parse_keywords(mask: str) -> Keyword:
    """Parse a ``BCDGLW`` mask such as ``"-C-G--"`` into keyword flags."""
    if not _MASK_RE.match(mask):
        raise ValueError(
            f"keyword mask {mask!r} must match [B-][C-][D-][G-][L-][W-] in canonical order"
        )
    flags = Keyword.NONE
    for letter, flag in zip(mask, ALL_KEYWORDS):
        if letter != "-":
            flags |= flag
    return flags


def format_keywords(flags: int) -> str:
    return "".join(
        letter if flags & flag else "-" for letter, flag in zip(KEYWORD_LETTERS, ALL_KEYWORDS)
    )


@dataclass(frozen=True)
class Card:
    """One card definition.

    For items ``attack`` and ``defense`` are signed deltas added to the
    target creature; green items add their keywords, red and blue items
    remove them.
    """

    id: int
    name: str
    kind: CardKind
    cost: int
    attack: int
    defense: int
    keywords: Keyword = Keyword.NONE
    player_hp_delta: int = 0
    opponent_hp_delta: int = 0
    card_draw: int = 0

    @property
    def is_creature(self) -> bool:
        return self.kind == CardKind.CREATURE

    def has(self, keyword: Keyword) -> bool:
        return bool(self.keywords & keyword)

    def to_record(self) -> str:
        return ";".join(
            str(v)
            for v in (
                self.id,
                self.name,
                _TOKEN_OF_KIND[self.kind],
                self.cost,
                self.attack,
                self.defense,
                format_keywords(self.keywords),
                self.player_hp_delta,
                self.opponent_hp_delta,
                self.card_draw,
            )
        )


@dataclass(frozen=True)
class Violation:
    card_id: Optional[int]
    reason: str

    def __str__(self) -> str:
        if self.card_id is None:
            return self.reason
        return f"card {self.card_id}: {self.reason}"


class CardFileError(ValueError):
    """Raised for malformed or inconsistent card files."""


@dataclass(frozen=True)
class CardSet:
    """An immutable card universe whose ids are exactly ``1..len(cards)``."""

    cards: tuple[Card, ...]

    def __len__(self) -> int:
        return len(self.cards)

    def __iter__(self):
        return iter(self.cards)

    def __getitem__(self, card_id: int) -> Card:
        return self._by_id[card_id]

    def __contains__(self, card_id: object) -> bool:
        return card_id in self._by_id

    @cached_property
    def _by_id(self) -> dict[int, Card]:
        return {card.id: card for card in self.cards}

    @property
    def ids(self) -> list[int]:
        return sorted(self._by_id)

    @cached_property
    def table(self) -> tuple:
        """Per-id stat rows ``(kind, cost, attack, defense, keywords, php, ohp, draw)``.

        Index 0 is a dummy row so that a card id indexes the table directly.
        """
        rows = [(0, 0, 0, 0, 0, 0, 0, 0)] * (max(self._by_id, default=0) + 1)
        for c in self.cards:
            rows[c.id] = (
                int(c.kind),
                c.cost,
                c.attack,
                c.defense,
                int(c.keywords),
                c.player_hp_delta,
                c.opponent_hp_delta,
                c.card_draw,
            )
        return tuple(rows)

    @cached_property
    def fingerprint(self) -> str:
        return hashlib.sha256(serialize(self).encode("utf-8")).hexdigest()[:16]


def serialize(card_set: CardSet) -> str:
    lines = ["# id;name;kind;cost;attack;defense;keywords;playerHP;enemyHP;cardDraw"]
    lines.extend(card.to_record() for card in card_set.cards)
    return "\n".join(lines) + "\n"


def _parse_record(line: str, lineno: int) -> Card:
    fields = line.split(";")
    if len(fields) != 10:
        raise CardFileError(f"line {lineno}: expected 10 fields, got {len(fields)}")
    ident, name, kind, cost, attack, defense, mask, php, ohp, draw = (f.strip() for f in fields)
    if kind not in _KIND_TOKENS:
        raise CardFileError(f"line {lineno}: unknown card kind {kind!r}")
    try:
        keywords = parse_keywords(mask)
    except ValueError as exc:
        raise CardFileError(f"line {lineno}: {exc}") from None
    ints = {}
    for label, raw in (
        ("id", ident),
        ("cost", cost),
        ("attack", attack),
        ("defense", defense),
        ("playerHP", php),
        ("enemyHP", ohp),
        ("cardDraw", draw),
    ):
        try:
            ints[label] = int(raw)
        except ValueError:
            raise CardFileError(f"line {lineno}: field {label} is not an integer: {raw!r}") from None
    if not name:
        raise CardFileError(f"line {lineno}: empty card name")
    return Card(
        id=ints["id"],
        name=name,
        kind=_KIND_TOKENS[kind],
        cost=ints["cost"],
        attack=ints["attack"],
        defense=ints["defense"],
        keywords=keywords,
        player_hp_delta=ints["playerHP"],
        opponent_hp_delta=ints["enemyHP"],
        card_draw=ints["cardDraw"],
    )


def load_card_set(text: str) -> CardSet:
    """Parse card file contents into a validated :class:`CardSet`.

    Raises:
        CardFileError: on a malformed record (the message names the line),
            a duplicate id, an id set other than ``1..N``, or a card that
            breaks its kind's invariants.
    """
    cards: list[Card] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        card = _parse_record(line, lineno)
        if card.id in seen:
            raise CardFileError(
                f"line {lineno}: duplicate card id {card.id} (first defined on line {seen[card.id]})"
            )
        seen[card.id] = lineno
        cards.append(card)
    card_set = CardSet(tuple(sorted(cards, key=lambda c: c.id)))
    problems = validate(card_set)
    if problems:
        raise CardFileError("; ".join(str(p) for p in problems))
    return card_set


def load_card_file(path) -> CardSet:
    with open(path, encoding="utf-8") as fh:
        return load_card_set(fh.read())


def default_card_set() -> CardSet:
    """The bundled 160-card universe (project-authored values)."""
    text = resources.files("arenadraft").joinpath("data/cards.txt").read_text(encoding="utf-8")
    return load_card_set(text)


def _card_violations(card: Card) -> Iterable[str]:
    if not 0 <= card.cost <= MAX_COST:
        yield f"cost {card.cost} outside 0..{MAX_COST}"
    if card.card_draw < 0:
        yield f"negative card draw {card.card_draw}"
    if card.opponent_hp_delta > 0:
        yield f"opponent hp delta {card.opponent_hp_delta} must be <= 0"
    if card.kind == CardKind.CREATURE:
        if card.attack < 0:
            yield f"creature attack {card.attack} must be >= 0"
        if card.defense < 1:
            yield f"creature defense {card.defense} must be >= 1"
    elif card.kind == CardKind.BLUE_ITEM and card.attack > 0:
        yield f"blue item attack {card.attack} must be <= 0"


def validate(card_set: CardSet, expected_size: Optional[int] = None) -> list[Violation]:
    """Check every card-set invariant; an empty list means the set is valid."""
    size = len(card_set) if expected_size is None else expected_size
    out: list[Violation] = []
    counts: dict[int, int] = {}
    for card in card_set.cards:
        counts[card.id] = counts.get(card.id, 0) + 1
        out.extend(Violation(card.id, reason) for reason in _card_violations(card))
    for card_id, count in sorted(counts.items()):
        if count > 1:
            out.append(Violation(card_id, f"duplicate id ({count} cards)"))
    expected = set(range(1, size + 1))
    missing = sorted(expected - counts.keys())
    extra = sorted(counts.keys() - expected)
    if missing or extra:
        out.append(
            Violation(None, f"ids must be exactly 1..{size}: missing {missing[:10]}, unexpected {extra[:10]}")
        )
    return out


_COST_WEIGHTS = np.array([1, 6, 8, 8, 7, 6, 4, 3, 2, 1, 1, 1, 1], dtype=float)
_ITEM_COST_WEIGHTS = np.array([4, 8, 8, 6, 4, 2, 1, 1, 0, 0, 0, 0, 0], dtype=float)


def generate_card_set(seed: int, size: int = 160) -> CardSet:
    """Generate a seeded, valid card universe of ``size`` cards.

    About 70% creatures and 10% of each item colour. Creature stats satisfy
    ``cost <= attack + defense <= 2 * cost + 2`` and every keyword appears
    independently with probability 0.15.
    """
    if size < 3:
        raise ValueError(f"card set size must be at least 3, got {size}")
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    cards = []
    for card_id in range(1, size + 1):
        u = rng.random()
        if u < 0.7:
            cards.append(_random_creature(rng, card_id))
        else:
            kind = (CardKind.GREEN_ITEM, CardKind.RED_ITEM, CardKind.BLUE_ITEM)[min(2, int((u - 0.7) / 0.1))]
            cards.append(_random_item(rng, card_id, kind))
    return CardSet(tuple(cards))


def _random_keywords(rng: np.random.Generator) -> Keyword:
    flags = Keyword.NONE
    for flag, hit in zip(ALL_KEYWORDS, rng.random(len(ALL_KEYWORDS)) < 0.15):
        if hit:
            flags |= flag
    return flags


def _random_creature(rng: np.random.Generator, card_id: int) -> Card:
    cost = int(rng.choice(MAX_COST + 1, p=_COST_WEIGHTS / _COST_WEIGHTS.sum()))
    total = int(rng.integers(max(cost, 1), 2 * cost + 3))
    defense = int(rng.integers(1, total + 1))
    php = int(rng.integers(1, 4)) if rng.random() < 0.08 else 0
    ohp = -int(rng.integers(1, 3)) if rng.random() < 0.08 else 0
    draw = 1 if rng.random() < 0.08 else 0
    return Card(
        id=card_id,
        name=f"Creature{card_id}",
        kind=CardKind.CREATURE,
        cost=cost,
        attack=total - defense,
        defense=defense,
        keywords=_random_keywords(rng),
        player_hp_delta=php,
        opponent_hp_delta=ohp,
        card_draw=draw,
    )


def _random_item(rng: np.random.Generator, card_id: int, kind: CardKind) -> Card:
    cost = int(rng.choice(MAX_COST + 1, p=_ITEM_COST_WEIGHTS / _ITEM_COST_WEIGHTS.sum()))
    budget = cost + 1
    php = ohp = draw = 0
    if kind == CardKind.GREEN_ITEM:
        attack = int(rng.integers(0, budget + 1))
        defense = int(rng.integers(0, budget + 1))
        keywords = _random_keywords(rng)
        name = f"Charm{card_id}"
        if rng.random() < 0.2:
            php = int(rng.integers(1, 4))
    elif kind == CardKind.RED_ITEM:
        attack = -int(rng.integers(0, budget + 1))
        defense = -int(rng.integers(0, budget + 1))
        keywords = _random_keywords(rng)
        name = f"Hex{card_id}"
    else:
        attack = 0
        defense = -int(rng.integers(0, budget + 1))
        keywords = Keyword.NONE
        name = f"Bolt{card_id}"
        if rng.random() < 0.4:
            ohp = -int(rng.integers(1, 3))
    if rng.random() < 0.15:
        draw = 1
    return Card(
        id=card_id,
        name=name,
        kind=kind,
        cost=cost,
        attack=attack,
        defense=defense,
        keywords=keywords,
        player_hp_delta=php,
        opponent_hp_delta=ohp,
        card_draw=draw,
    )
