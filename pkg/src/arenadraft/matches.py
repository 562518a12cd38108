"""Policy-vs-policy matches on shared drafts.

Both players draft from the same choices (fair arena) using their own card
values, then play with the simulator's agents. A pairing ``(a, b)`` plays
``games`` games per draft, alternating seats and starting with ``a`` as
player 0.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .draft import DRAFT_TURNS, Draft
from .seeding import derive_seed
from .simulation import HALF_POINTS, GameJob, Simulator


class DeckCache:
    """Decks built from genome rows of one matrix against a list of drafts."""

    def __init__(self, genomes: np.ndarray, drafts: Sequence[Draft]):
        self.genomes = np.asarray(genomes)
        self.drafts = [d.as_array() for d in drafts]
        self._cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def deck(self, genome: int, draft: int) -> tuple[int, ...]:
        key = (genome, draft)
        deck = self._cache.get(key)
        if deck is None:
            arr = self.drafts[draft]
            slots = np.argmax(self.genomes[genome][arr - 1], axis=1)
            deck = tuple(arr[np.arange(DRAFT_TURNS), slots].tolist())
            self._cache[key] = deck
        return deck


def pairing_jobs(cache: DeckCache, pairings, games: int, seed_parts: tuple):
    """Jobs and seat maps for every game of every pairing on every draft."""
    if games % 2:
        raise ValueError(f"games per pairing must be even, got {games}")
    jobs, seats = [], []
    for p_idx, (a, b) in enumerate(pairings):
        for d_idx in range(len(cache.drafts)):
            deck_a = cache.deck(a, d_idx)
            deck_b = cache.deck(b, d_idx)
            for k in range(games):
                seed = derive_seed(*seed_parts, p_idx, d_idx, k)
                if k % 2 == 0:
                    jobs.append(GameJob(deck_a, deck_b, seed))
                    seats.append((p_idx, 0))
                else:
                    jobs.append(GameJob(deck_b, deck_a, seed))
                    seats.append((p_idx, 1))
    return jobs, seats


def play_pairings(
    sim: Simulator,
    genomes: np.ndarray,
    drafts: Sequence[Draft],
    pairings: Sequence[tuple[int, int]],
    games: int,
    seed_parts: tuple,
) -> np.ndarray:
    """Play all pairings; return half-points as an array of shape ``(len(pairings), 2)``.

    Column 0 holds the points of the first genome of each pairing. Every
    game hands out exactly two half-points (a draw is one each).
    """
    cache = genomes if isinstance(genomes, DeckCache) else DeckCache(genomes, drafts)
    jobs, seats = pairing_jobs(cache, pairings, games, seed_parts)
    outcomes = sim.play(jobs)
    points = np.zeros((len(pairings), 2), dtype=np.int64)
    for (p_idx, a_seat), outcome in zip(seats, outcomes):
        seat_points = HALF_POINTS[outcome]
        points[p_idx, 0] += seat_points[a_seat]
        points[p_idx, 1] += seat_points[1 - a_seat]
    return points


def credit(points: np.ndarray, pairings: Sequence[tuple[int, int]], size: int) -> np.ndarray:
    """Sum per-pairing points into per-genome half-point totals."""
    totals = np.zeros(size, dtype=np.int64)
    for (a, b), (pa, pb) in zip(pairings, points):
        totals[a] += pa
        totals[b] += pb
    return totals
