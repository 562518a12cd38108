"""Training loops: the baseline EA and the active-genes family.

All game batches go through a :class:`~arenadraft.simulation.Simulator`
whose cost counter is the run's budget meter. Per-game seeds are derived
from ``(run seed, generation, phase, pairing, draft, game)`` so a run is a
pure function of its config and drafts.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from ..agents import make_agent
from ..cardset import CardSet
from ..draft import Draft, DraftPolicy, active_mask
from ..matches import DeckCache, credit, play_pairings
from ..seeding import derive_seed
from ..simulation import Simulator
from .config import AG_ALL, AG_FAMILY, AG_WEIGHTS_KD, AG_WEIGHTS_KG, EVO_BASE, TrainerConfig
from .cost import ag_generation_cost, round_robin_cost
from .history import RunHistory
from .operators import merge_all, mutate, random_population, uniform_crossover


class BudgetError(RuntimeError):
    """The budget cannot pay for even the first unit of work."""


@dataclass(frozen=True)
class Individual:
    genome: DraftPolicy
    score: int


@dataclass
class Population:
    """Genome matrix plus half-point scores."""

    genomes: np.ndarray
    scores: np.ndarray

    def __len__(self) -> int:
        return self.genomes.shape[0]

    def individuals(self) -> list[Individual]:
        return [Individual(DraftPolicy(g), int(s)) for g, s in zip(self.genomes, self.scores)]

    def best_index(self) -> int:
        return int(np.argsort(-self.scores, kind="stable")[0])

    def best(self) -> DraftPolicy:
        return DraftPolicy(self.genomes[self.best_index()])


def make_simulator(config: TrainerConfig, card_set: CardSet, workers: int = 1, backend: str = "auto") -> Simulator:
    return Simulator(card_set, make_agent(config.player), backend=backend, workers=workers, lanes=config.lanes)


def _run_rng(seed: int, tag: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, tag))


# ---------------------------------------------------------------- tournaments


def select_parents_batch(
    sim: Simulator,
    genomes: np.ndarray,
    drafts: Sequence[Draft],
    count: int,
    tournament_size: int,
    tournament_games: int,
    rng: np.random.Generator,
    seed_parts: tuple,
    cache: Optional[DeckCache] = None,
) -> list[tuple[int, int]]:
    """Run ``count`` independent parent tournaments as one game batch.

    Each tournament samples ``tournament_size`` distinct individuals; every
    ordered pair plays ``tournament_games`` games per draft with alternating
    seats. The two best by tournament points become the parents, ties going
    to the earlier sampled individual.

    Returns:
        ``count`` pairs of population indices ``(parent1, parent2)``.
    """
    n = genomes.shape[0]
    if n < tournament_size:
        raise ValueError(f"population of {n} is smaller than the tournament size {tournament_size}")
    if tournament_size < 2:
        raise ValueError("a tournament needs at least two entrants")
    samples = [rng.choice(n, size=tournament_size, replace=False) for _ in range(count)]
    local_pairs = list(permutations(range(tournament_size), 2))
    pairings = [(int(s[a]), int(s[b])) for s in samples for a, b in local_pairs]
    cache = cache if cache is not None else DeckCache(genomes, drafts)
    points = play_pairings(sim, cache, drafts, pairings, tournament_games, seed_parts)
    parents = []
    per = len(local_pairs)
    for t, sample in enumerate(samples):
        wins = np.zeros(tournament_size, dtype=np.int64)
        for (a, b), (pa, pb) in zip(local_pairs, points[t * per : (t + 1) * per]):
            wins[a] += pa
            wins[b] += pb
        order = np.argsort(-wins, kind="stable")
        parents.append((int(sample[order[0]]), int(sample[order[1]])))
    return parents


def select_parents(
    sim: Simulator,
    genomes: np.ndarray,
    drafts: Sequence[Draft],
    tournament_size: int,
    tournament_games: int,
    rng: np.random.Generator,
    seed_parts: tuple = (0,),
) -> tuple[int, int]:
    """A single parent tournament; see :func:`select_parents_batch`."""
    return select_parents_batch(sim, genomes, drafts, 1, tournament_size, tournament_games, rng, seed_parts)[0]


# -------------------------------------------------------------------- scoring


def score_population(
    sim: Simulator,
    genomes: np.ndarray,
    drafts: Sequence[Draft],
    score_rounds: int,
    pair_games: int,
    seed_parts: tuple,
    scores: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Swiss-style scoring.

    Each round sorts by current score (stable, so ties keep index order),
    pairs ranks 1-2, 3-4, ... and plays ``pair_games`` games per draft in
    every pair. Half-points accumulate across rounds.

    Returns:
        Updated half-point scores (a new array).
    """
    n = genomes.shape[0]
    if n % 2:
        raise ValueError(f"scoring pairs the population and needs an even size, got {n}")
    scores = np.zeros(n, dtype=np.int64) if scores is None else np.array(scores, dtype=np.int64)
    cache = DeckCache(genomes, drafts)
    for rnd in range(score_rounds):
        order = np.argsort(-scores, kind="stable")
        pairings = [(int(order[i]), int(order[i + 1])) for i in range(0, n, 2)]
        points = play_pairings(sim, cache, drafts, pairings, pair_games, seed_parts + (rnd,))
        scores += credit(points, pairings, n)
    return scores


def create_offspring(
    sim: Simulator,
    genomes: np.ndarray,
    drafts: Sequence[Draft],
    config: TrainerConfig,
    score_rounds: int,
    rng: np.random.Generator,
    seed_parts: tuple,
) -> tuple[np.ndarray, np.ndarray]:
    """Tournament-selected parents, one crossover child each, mutation, then scoring."""
    n = genomes.shape[0]
    parents = select_parents_batch(
        sim,
        genomes,
        drafts,
        n,
        config.tournament_size,
        config.tournament_games,
        rng,
        seed_parts + ("tournament",),
    )
    children = np.empty_like(genomes)
    for slot, (p1, p2) in enumerate(parents):
        child = uniform_crossover(genomes[p1], genomes[p2], rng)
        children[slot] = mutate(child, config.mutation_rate, rng)
    scores = score_population(sim, children, drafts, score_rounds, config.pair_games, seed_parts + ("score",))
    return children, scores


# ------------------------------------------------------------------- schedule


def variant_schedule(config: TrainerConfig) -> list[tuple[tuple[int, ...], int]]:
    """Per-generation ``(draft indices, scoring rounds)`` for an active-genes run.

    Draft indices wrap around the training set if the schedule asks for
    more drafts than there are.
    """
    if config.variant not in AG_FAMILY:
        raise ValueError(f"{config.variant!r} has no active-genes schedule")
    g = config.generation_count
    d = config.train_drafts
    k = config.k
    if config.variant == AG_WEIGHTS_KD:
        if g % k:
            raise ValueError(f"k={k} must divide generations={g}")
        return [(tuple((b * k + j) % d for j in range(k)), config.score_rounds) for b in range(g // k)]
    if config.variant == AG_WEIGHTS_KG:
        if config.score_rounds % k:
            raise ValueError(f"k={k} must divide score_rounds={config.score_rounds}")
        return [(((b // k) % d,), config.score_rounds // k) for b in range(g * k)]
    return [((b % d,), config.score_rounds) for b in range(g)]


# ------------------------------------------------------------------ trainers


def _check_drafts(config: TrainerConfig, drafts: Sequence[Draft]) -> list[Draft]:
    drafts = list(drafts)
    if len(drafts) != config.train_drafts:
        raise ValueError(f"config expects {config.train_drafts} training drafts, got {len(drafts)}")
    return drafts


def ag_train(
    config: TrainerConfig,
    drafts: Sequence[Draft],
    card_set: CardSet,
    sim: Optional[Simulator] = None,
) -> tuple[Population, RunHistory]:
    """Active-genes evolution.

    Each generation draws its draft batch from :func:`variant_schedule`,
    builds and scores an offspring population, and merges it into the
    current one. A generation only starts if its full cost fits in what is
    left of the budget.
    """
    if config.variant not in AG_FAMILY:
        raise ValueError(f"ag_train cannot run variant {config.variant!r}")
    drafts = _check_drafts(config, drafts)
    sim = sim if sim is not None else make_simulator(config, card_set)
    size = len(card_set)
    genomes = random_population(_run_rng(config.seed, "population"), config.population_size, size)
    # the initial population was never scored, so its first roulette is uniform
    scores = np.zeros(config.population_size, dtype=np.int64)
    rng = _run_rng(config.seed, "evolution")
    history = RunHistory(config.to_dict(), drafts)
    start = sim.cost.games
    for gen, (indices, rounds) in enumerate(variant_schedule(config), start=1):
        gen_cost = ag_generation_cost(
            config.population_size,
            len(indices),
            rounds,
            config.pair_games,
            config.tournament_size,
            config.tournament_games,
        )
        if sim.cost.games - start + gen_cost > config.budget:
            break
        batch = [drafts[i] for i in indices]
        children, child_scores = create_offspring(sim, genomes, batch, config, rounds, rng, (config.seed, gen))
        if config.variant == AG_ALL:
            active = np.ones(size, dtype=bool)
        else:
            active = active_mask(batch, size)
        genomes, scores = merge_all(
            genomes, scores, children, child_scores, active, config.variant, config.merge_weight, rng
        )
        history.record(gen, sim.cost.games - start, indices, genomes, scores, config.top_k)
    return Population(genomes, scores), history


def round_robin_scores(
    sim: Simulator,
    genomes: np.ndarray,
    drafts: Sequence[Draft],
    pair_games: int,
    seed_parts: tuple,
) -> np.ndarray:
    """Half-points from every ordered pair playing ``pair_games`` per draft."""
    n = genomes.shape[0]
    pairings = list(permutations(range(n), 2))
    points = play_pairings(sim, genomes, drafts, pairings, pair_games, seed_parts)
    return credit(points, pairings, n)


def _tournament_pick(scores: np.ndarray, size: int, rng: np.random.Generator) -> int:
    sample = rng.choice(scores.shape[0], size=size, replace=False)
    best = sample[0]
    for idx in sample[1:]:
        if scores[idx] > scores[best]:
            best = idx
    return int(best)


def evo_base_train(
    config: TrainerConfig,
    drafts: Sequence[Draft],
    card_set: CardSet,
    sim: Optional[Simulator] = None,
) -> tuple[Population, RunHistory]:
    """Generational EA evaluated by a full round robin on every training draft.

    The initial population is evaluated once, then each generation keeps
    the ``elitism`` best, fills the rest with mutated uniform-crossover
    children of tournament-selected parents and re-evaluates everyone.
    Stops after ``generations`` generations, or earlier when the next
    evaluation would overrun the budget.

    Raises:
        BudgetError: if the budget cannot pay for the initial evaluation.
    """
    if config.variant != EVO_BASE:
        raise ValueError(f"evo_base_train cannot run variant {config.variant!r}")
    drafts = _check_drafts(config, drafts)
    sim = sim if sim is not None else make_simulator(config, card_set)
    n = config.population_size
    eval_cost = round_robin_cost(n, config.pair_games, len(drafts))
    if eval_cost > config.budget:
        raise BudgetError(f"one evaluation costs {eval_cost} games, budget is {config.budget}")
    genomes = random_population(_run_rng(config.seed, "population"), n, len(card_set))
    rng = _run_rng(config.seed, "evolution")
    history = RunHistory(config.to_dict(), drafts)
    all_drafts = tuple(range(len(drafts)))
    start = sim.cost.games
    scores = round_robin_scores(sim, genomes, drafts, config.pair_games, (config.seed, 0, "eval"))
    history.record(0, sim.cost.games - start, all_drafts, genomes, scores, config.top_k)
    gen = 0
    limit = config.generations
    while limit is None or gen < limit:
        if sim.cost.games - start + eval_cost > config.budget:
            break
        gen += 1
        order = np.argsort(-scores, kind="stable")
        nxt = np.empty_like(genomes)
        nxt[: config.elitism] = genomes[order[: config.elitism]]
        for slot in range(config.elitism, n):
            p1 = _tournament_pick(scores, config.tournament_size, rng)
            p2 = _tournament_pick(scores, config.tournament_size, rng)
            child = uniform_crossover(genomes[p1], genomes[p2], rng)
            nxt[slot] = mutate(child, config.mutation_rate, rng)
        genomes = nxt
        scores = round_robin_scores(sim, genomes, drafts, config.pair_games, (config.seed, gen, "eval"))
        history.record(gen, sim.cost.games - start, all_drafts, genomes, scores, config.top_k)
    return Population(genomes, scores), history
