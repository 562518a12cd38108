"""One entry point for every training method."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .baselines import random_all_baseline, random_tournament_baseline
from .cardset import CardSet
from .draft import Draft, DraftPolicy
from .evolution.config import AG_FAMILY, AG_WEIGHTS_KD, EVO_BASE, RANDOM_ALL, TrainerConfig
from .evolution.cost import config_cost, estimate_cost
from .evolution.history import RunHistory
from .evolution.trainers import ag_train, evo_base_train, make_simulator
from .simulation import Simulator


@dataclass
class TrainingResult:
    best: DraftPolicy
    history: RunHistory
    cost: int


def train(
    config: TrainerConfig,
    drafts: Sequence[Draft],
    card_set: CardSet,
    sim: Optional[Simulator] = None,
) -> TrainingResult:
    """Run ``config.variant`` on ``drafts`` and return its best policy.

    Baselines are one-shot: their history holds a single snapshot of the
    ``top_k`` genomes ranked by round-robin points (``random_all``) or by
    the bracket round they reached (``random_tournament``).
    """
    sim = sim if sim is not None else make_simulator(config, card_set)
    start = sim.cost.games
    if config.variant in AG_FAMILY:
        pop, history = ag_train(config, drafts, card_set, sim)
        best = pop.best()
    elif config.variant == EVO_BASE:
        pop, history = evo_base_train(config, drafts, card_set, sim)
        best = pop.best()
    else:
        drafts = list(drafts)
        if len(drafts) != config.train_drafts:
            raise ValueError(f"config expects {config.train_drafts} training drafts, got {len(drafts)}")
        need = config_cost(config)
        if need > config.budget:
            raise ValueError(f"{config.variant} needs {need} games, budget is {config.budget}")
        if config.variant == RANDOM_ALL:
            best, genomes, scores = random_all_baseline(
                sim, config.population_size, drafts, config.pair_games, config.seed
            )
        else:
            best, genomes, scores = random_tournament_baseline(
                sim, config.population_size, drafts, config.pair_games, config.seed
            )
        history = RunHistory(config.to_dict(), drafts)
        history.record(1, sim.cost.games - start, range(len(drafts)), genomes, np.asarray(scores), config.top_k)
    return TrainingResult(best, history, sim.cost.games - start)


def budget_generations(config: TrainerConfig) -> int:
    """Largest generation count whose full run fits in ``config.budget``.

    For ``ag_weights_kd`` the result is a multiple of ``k``.
    """
    step = config.k if config.variant == AG_WEIGHTS_KD else 1
    params = dict(
        population_size=config.population_size,
        train_drafts=config.train_drafts,
        pair_games=config.pair_games,
        score_rounds=config.score_rounds,
        tournament_size=config.tournament_size,
        tournament_games=config.tournament_games,
        k=config.k,
    )
    if config.variant not in AG_FAMILY and config.variant != EVO_BASE:
        raise ValueError(f"{config.variant!r} has no generations")
    per = estimate_cost(config.variant, generations=step, **params)
    if config.variant == EVO_BASE:
        per -= estimate_cost(config.variant, generations=0, **params)
        base = estimate_cost(config.variant, generations=0, **params)
        return max(0, (config.budget - base) // per)
    return (config.budget // per) * step


def budget_population(variant: str, budget: int, train_drafts: int, pair_games: int) -> int:
    """Largest baseline population whose cost fits ``budget``.

    ``random_tournament`` sizes are restricted to powers of two.
    """
    best = 0
    n = 2
    while True:
        cost = estimate_cost(variant, population_size=n, train_drafts=train_drafts, pair_games=pair_games)
        if cost > budget:
            return best
        best = n
        n = n * 2 if variant != RANDOM_ALL else n + 1


def with_budget_generations(config: TrainerConfig) -> TrainerConfig:
    """Copy of ``config`` whose generation count fills its budget."""
    return replace(config, generations=budget_generations(config))
