"""Closed-form simulated-game costs of every training method.

``estimate_cost`` returns the exact number of games the trainers play.
``all_drafts_ag_cost`` is the coarser active-genes estimate that charges
every generation for all training drafts and counts each scoring pairing
from both sides; it over-counts the loops and is kept for comparison.
"""

from __future__ import annotations

from typing import Optional

from .config import (
    AG,
    AG_ALL,
    AG_WEIGHTS,
    AG_WEIGHTS_KD,
    AG_WEIGHTS_KG,
    EVO_BASE,
    RANDOM_ALL,
    RANDOM_TOURNAMENT,
    TrainerConfig,
)


def tournament_cost(tournament_size: int, tournament_games: int, drafts: int = 1) -> int:
    """Games in one parent tournament: every ordered pair, on every draft."""
    return tournament_size * (tournament_size - 1) * tournament_games * drafts


def scoring_cost(population_size: int, score_rounds: int, pair_games: int, drafts: int = 1) -> int:
    """Games in one offspring scoring pass: ``n/2`` pairings per round and draft."""
    return score_rounds * drafts * (population_size // 2) * pair_games


def round_robin_cost(population_size: int, pair_games: int, drafts: int) -> int:
    """Every ordered pair plays ``pair_games`` per draft."""
    return population_size * (population_size - 1) * pair_games * drafts


def ag_generation_cost(
    population_size: int,
    drafts: int,
    score_rounds: int,
    pair_games: int,
    tournament_size: int,
    tournament_games: int,
) -> int:
    """One active-genes generation over a batch of ``drafts`` drafts."""
    return population_size * tournament_cost(tournament_size, tournament_games, drafts) + scoring_cost(
        population_size, score_rounds, pair_games, drafts
    )


def estimate_cost(
    variant: str,
    *,
    population_size: int,
    train_drafts: int = 1,
    pair_games: int = 2,
    generations: Optional[int] = None,
    score_rounds: int = 10,
    tournament_size: int = 4,
    tournament_games: int = 10,
    k: int = 1,
) -> int:
    """Games consumed by a complete run of ``variant``.

    For the active-genes family ``generations`` counts generations of the
    plain schedule (one draft each); ``ag_weights_kd`` runs ``generations/k``
    generations of ``k`` drafts, ``ag_weights_kg`` runs ``generations*k``
    generations with ``score_rounds/k`` rounds.
    """
    n = population_size
    if variant == RANDOM_ALL:
        return round_robin_cost(n, pair_games, train_drafts)
    if variant == RANDOM_TOURNAMENT:
        return (n - 1) * pair_games * train_drafts
    if generations is None:
        if variant == EVO_BASE:
            raise ValueError("evo_base cost needs an explicit generation count")
        generations = train_drafts
    if variant == EVO_BASE:
        return round_robin_cost(n, pair_games, train_drafts) * (1 + generations)
    if variant in (AG, AG_ALL, AG_WEIGHTS):
        per_gen = ag_generation_cost(n, 1, score_rounds, pair_games, tournament_size, tournament_games)
        return generations * per_gen
    if variant == AG_WEIGHTS_KD:
        per_gen = ag_generation_cost(n, k, score_rounds, pair_games, tournament_size, tournament_games)
        return (generations // k) * per_gen
    if variant == AG_WEIGHTS_KG:
        per_gen = ag_generation_cost(n, 1, score_rounds // k, pair_games, tournament_size, tournament_games)
        return generations * k * per_gen
    raise ValueError(f"unknown variant {variant!r}")


def all_drafts_ag_cost(
    population_size: int,
    generations: int,
    tournament_size: int,
    tournament_games: int,
    score_rounds: int,
    pair_games: int,
    train_drafts: int,
) -> int:
    """``n * g * (tSize * (tSize - 1) * tGames + rounds * pair_games * train_drafts)``."""
    return (
        population_size
        * generations
        * (tournament_size * (tournament_size - 1) * tournament_games + score_rounds * pair_games * train_drafts)
    )


def config_cost(config: TrainerConfig) -> int:
    """Closed-form cost of running ``config`` to completion, ignoring the budget."""
    return estimate_cost(
        config.variant,
        population_size=config.population_size,
        train_drafts=config.train_drafts,
        pair_games=config.pair_games,
        generations=config.generation_count,
        score_rounds=config.score_rounds,
        tournament_size=config.tournament_size,
        tournament_games=config.tournament_games,
        k=config.k,
    )
