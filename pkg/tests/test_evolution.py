import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arenadraft.agents import make_agent
from arenadraft.draft import active_mask, generate_drafts
from arenadraft.evolution import (
    AG,
    AG_ALL,
    AG_FAMILY,
    AG_WEIGHTS,
    AG_WEIGHTS_KD,
    AG_WEIGHTS_KG,
    EVO_BASE,
    RANDOM_ALL,
    RANDOM_TOURNAMENT,
    BudgetError,
    ConfigError,
    RunHistory,
    TrainerConfig,
    ag_train,
    all_drafts_ag_cost,
    config_cost,
    estimate_cost,
    evo_base_train,
    merge_all,
    merge_one,
    mutate,
    roulette,
    score_population,
    select_parents,
    uniform_crossover,
    variant_schedule,
)
from arenadraft.seeding import derive_seed
from arenadraft.simulation import Simulator
from arenadraft.training import budget_generations, budget_population, train

from conftest import card_set_from

genome = st.lists(st.floats(0.0, 1.0), min_size=12, max_size=12).map(np.array)


def sim_for(card_set, kind="random"):
    return Simulator(card_set, make_agent(kind))


# ----------------------------------------------------------------- merge


def test_merge_examples():
    parent = np.array([0.1, 0.8, 0.3])
    child = np.array([0.5, 0.0, 0.9])
    active = [1, 3]
    np.testing.assert_allclose(merge_one(parent, child, active, AG_WEIGHTS), [0.2, 0.8, 0.45])
    np.testing.assert_array_equal(merge_one(parent, child, active, AG), [0.5, 0.8, 0.9])
    np.testing.assert_array_equal(merge_one(parent, child, active, AG_ALL), child)


def test_merge_weight_exact_value():
    out = merge_one(np.array([1.0]), np.array([0.0]), [1], AG_WEIGHTS)
    assert out[0] == 0.75
    out = merge_one(np.array([0.4]), np.array([1.0]), [1], AG_WEIGHTS)
    assert out[0] == 0.75 * 0.4 + 0.25 * 1.0


def test_merge_with_no_active_genes_returns_parent():
    rng = np.random.default_rng(0)
    parent, child = rng.random(160), rng.random(160)
    for variant in (AG, AG_WEIGHTS, AG_WEIGHTS_KD, AG_WEIGHTS_KG):
        out = merge_one(parent, child, [], variant)
        assert out.tobytes() == parent.tobytes()


def test_merge_errors():
    with pytest.raises(ValueError):
        merge_one(np.zeros(3), np.zeros(4), [1], AG)
    with pytest.raises(ValueError):
        merge_one(np.zeros(3), np.zeros(3), [1], EVO_BASE)
    with pytest.raises(ValueError):
        merge_one(np.zeros(3), np.zeros(3), [4], AG)


@settings(max_examples=200)
@given(genome, genome, st.sets(st.integers(1, 12)), st.sampled_from([AG, AG_WEIGHTS, AG_WEIGHTS_KG]))
def test_merge_preserves_inactive_genes_and_bounds(parent, child, active, variant):
    out = merge_one(parent, child, active, variant)
    for i in range(12):
        if i + 1 not in active:
            assert out[i] == parent[i]
        else:
            lo, hi = min(parent[i], child[i]), max(parent[i], child[i])
            assert lo <= out[i] <= hi
    assert np.all((out >= 0) & (out <= 1))


@given(genome, genome)
def test_ag_all_forgets_the_parent(parent, child):
    assert merge_one(parent, child, [], AG_ALL).tobytes() == child.tobytes()


def test_merge_all_inherits_child_scores():
    rng = np.random.default_rng(3)
    old, new = rng.random((4, 6)), rng.random((4, 6))
    genomes, scores = merge_all(old, np.zeros(4), new, np.array([0, 0, 5, 0]), [1, 2], AG, 0.75, rng)
    assert list(scores) == [5, 5, 5, 5]
    for g in genomes:
        np.testing.assert_array_equal(g[:2], new[2, :2])


# ------------------------------------------------------- variation operators


def test_mutation_rate():
    rng = np.random.default_rng(11)
    g = np.full(160, 2.0)  # impossible value marks untouched genes
    changed = sum(int((mutate(g, 0.05, rng) != 2.0).sum()) for _ in range(500))
    rate = changed / (500 * 160)
    assert abs(rate - 0.05) < 3 * np.sqrt(0.05 * 0.95 / 80_000)


def test_full_mutation_ignores_the_input():
    a = mutate(np.zeros(50), 1.0, np.random.default_rng(4))
    b = mutate(np.ones(50), 1.0, np.random.default_rng(4))
    np.testing.assert_array_equal(a, b)


def test_crossover_takes_genes_from_parents():
    rng = np.random.default_rng(5)
    p1, p2 = np.zeros(2000), np.ones(2000)
    child = uniform_crossover(p1, p2, rng)
    assert set(np.unique(child)) <= {0.0, 1.0}
    assert abs(child.mean() - 0.5) < 0.05


def test_roulette_zero_scores_uniform():
    rng = np.random.default_rng(6)
    counts = np.bincount([roulette(np.zeros(4), rng) for _ in range(8000)], minlength=4)
    assert np.all(np.abs(counts - 2000) < 3 * np.sqrt(8000 * 0.25 * 0.75))


def test_roulette_never_picks_zero_score():
    rng = np.random.default_rng(7)
    picks = {roulette(np.array([0, 3, 0, 1]), rng) for _ in range(2000)}
    assert picks == {1, 3}
    with pytest.raises(ValueError):
        roulette(np.array([]), rng)
    with pytest.raises(ValueError):
        roulette(np.array([1, -1]), rng)


# ------------------------------------------------------ tournaments, scoring

# Cards 1-3 are strong cheap creatures; 4-6 cost more mana than ever exists.
LOPSIDED = card_set_from(
    "1;Lion;creature;1;6;6;------;0;0;0",
    "2;Bear;creature;2;7;7;------;0;0;0",
    "3;Wolf;creature;1;5;5;------;0;0;0",
    "4;Brick;creature;12;0;1;------;0;0;0",
    "5;Stone;creature;12;0;1;------;0;0;0",
    "6;Rock;creature;12;0;1;------;0;0;0",
)


def test_select_parents_cost_and_dominance():
    drafts = generate_drafts(LOPSIDED, 1, 2)
    weak = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])
    genomes = np.stack([weak, weak, np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]), weak])
    sim = sim_for(LOPSIDED)
    p1, p2 = select_parents(sim, genomes, drafts[:1], 4, 10, np.random.default_rng(0))
    assert sim.cost.games == 4 * 3 * 10
    assert p1 == 2 and p2 != 2
    sim = sim_for(LOPSIDED)
    select_parents(sim, genomes, drafts, 4, 10, np.random.default_rng(0))
    assert sim.cost.games == 240


def test_select_parents_needs_enough_individuals():
    with pytest.raises(ValueError):
        select_parents(sim_for(LOPSIDED), np.zeros((3, 6)), generate_drafts(LOPSIDED, 1, 1), 4, 10, np.random.default_rng(0))


def test_score_population_counts(cards160):
    genomes = np.random.default_rng(1).random((4, 160))
    drafts = generate_drafts(cards160, 2, 1)
    sim = sim_for(cards160)
    scores = score_population(sim, genomes, drafts, 2, 2, (0,))
    assert sim.cost.games == 8
    assert scores.sum() == 2 * 2 * 2 * 2  # rounds * pairs * games * half-points per game
    with pytest.raises(ValueError):
        score_population(sim, genomes[:3], drafts, 1, 2, (0,))


# ------------------------------------------------------------------ costs


def _cost_configs():
    rng = np.random.default_rng(2024)
    configs = []
    for variant in AG_FAMILY + (EVO_BASE,):
        for _ in range(4):
            n = int(rng.choice([4, 6]))
            d = int(rng.integers(1, 4))
            k = int(rng.choice([1, 2]))
            gens = k * int(rng.integers(1, 3)) if variant == AG_WEIGHTS_KD else int(rng.integers(1, 3))
            configs.append(
                TrainerConfig(
                    variant=variant,
                    population_size=n,
                    train_drafts=d,
                    generations=gens,
                    score_rounds=2,
                    tournament_size=int(rng.integers(2, n + 1)),
                    tournament_games=2,
                    k=k if variant in (AG_WEIGHTS_KD, AG_WEIGHTS_KG) else 1,
                    elitism=1,
                    budget=10**9,
                    seed=int(rng.integers(1000)),
                )
            )
    for n in (2, 4):
        for d in (1, 3):
            configs.append(TrainerConfig(variant=RANDOM_ALL, population_size=n, train_drafts=d, budget=10**9))
            configs.append(TrainerConfig(variant=RANDOM_TOURNAMENT, population_size=n, train_drafts=d, budget=10**9))
    return configs


@pytest.mark.parametrize("config", _cost_configs(), ids=lambda c: f"{c.variant}-n{c.population_size}-d{c.train_drafts}")
def test_counted_cost_matches_closed_form(cards160, config):
    drafts = generate_drafts(cards160, config.seed, config.train_drafts)
    sim = sim_for(cards160)
    result = train(config, drafts, cards160, sim)
    assert sim.cost.games == result.cost == config_cost(config)


def test_estimate_cost_examples():
    assert estimate_cost(RANDOM_ALL, population_size=4, train_drafts=3, pair_games=2) == 72
    assert estimate_cost(RANDOM_TOURNAMENT, population_size=4, train_drafts=3, pair_games=2) == 18
    assert estimate_cost(EVO_BASE, population_size=4, train_drafts=3, pair_games=2, generations=1) == 144
    per_gen = estimate_cost(AG_WEIGHTS, population_size=2, generations=1, score_rounds=1, tournament_size=2, tournament_games=2)
    assert per_gen == 2 * 2 * 2 + 1 * 1 * 2
    assert estimate_cost(AG, population_size=10, train_drafts=1, generations=1) == 10 * (4 * 3 * 10) + 5 * 10 * 2
    with pytest.raises(ValueError):
        estimate_cost("hill_climb", population_size=4)


def test_all_drafts_formula():
    assert all_drafts_ag_cost(2, 1, 2, 2, 1, 2, 1) == 2 * (2 * 1 * 2 + 1 * 2 * 1)
    assert all_drafts_ag_cost(10, 1, 4, 10, 10, 2, 1) == 10 * (120 + 20)


# --------------------------------------------------------------- schedules


def test_schedules():
    base = dict(population_size=4, train_drafts=6, generations=6, score_rounds=4)
    sched = variant_schedule(TrainerConfig(variant=AG_WEIGHTS, **base))
    assert sched == [((i,), 4) for i in range(6)]
    sched = variant_schedule(TrainerConfig(variant=AG_WEIGHTS_KD, k=2, **base))
    assert sched == [((0, 1), 4), ((2, 3), 4), ((4, 5), 4)]
    sched = variant_schedule(TrainerConfig(variant=AG_WEIGHTS_KG, k=2, **base))
    assert [s[0][0] for s in sched] == [0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5]
    assert all(rounds == 2 for _, rounds in sched)


def test_schedule_divisibility_errors():
    with pytest.raises(ConfigError):
        TrainerConfig(variant=AG_WEIGHTS_KD, train_drafts=100, k=3)
    with pytest.raises(ConfigError):
        TrainerConfig(variant=AG_WEIGHTS_KG, score_rounds=10, k=3)


# ----------------------------------------------------------------- trainers


SMALL = dict(population_size=4, train_drafts=3, score_rounds=2, tournament_games=2, budget=10**6, seed=9)


def test_ag_train_deterministic(cards160):
    config = TrainerConfig(variant=AG_WEIGHTS, **SMALL)
    drafts = generate_drafts(cards160, 1, 3)
    a_pop, a_hist = ag_train(config, drafts, cards160)
    b_pop, b_hist = ag_train(config, drafts, cards160)
    assert a_pop.genomes.tobytes() == b_pop.genomes.tobytes()
    assert [s.to_dict() for s in a_hist.snapshots] == [s.to_dict() for s in b_hist.snapshots]


def test_ag_train_only_changes_active_genes(cards160):
    config = TrainerConfig(variant=AG, generations=1, **SMALL)
    drafts = generate_drafts(cards160, 1, 3)
    pop, hist = ag_train(config, drafts, cards160)
    initial = np.random.default_rng(derive_seed(9, "population")).random((4, 160))
    inactive = ~active_mask(drafts[:1], 160)
    for g in pop.genomes:
        # every merged genome descends from some initial genome on inactive genes
        assert any(np.array_equal(g[inactive], row[inactive]) for row in initial)


@pytest.mark.parametrize("budget", [0, 150, 300, 1000])
def test_ag_train_respects_budget(cards160, budget):
    config = TrainerConfig(variant=AG_WEIGHTS, **{**SMALL, "budget": budget})
    drafts = generate_drafts(cards160, 1, 3)
    sim = sim_for(cards160)
    pop, hist = ag_train(config, drafts, cards160, sim)
    assert sim.cost.games <= budget
    assert len(hist) <= config.generation_count
    assert len(hist) == min(3, budget // estimate_cost(AG_WEIGHTS, population_size=4, generations=1, score_rounds=2, tournament_games=2))


def test_evo_base_budget_error(cards160):
    config = TrainerConfig(variant=EVO_BASE, **{**SMALL, "budget": 10})
    with pytest.raises(BudgetError):
        evo_base_train(config, generate_drafts(cards160, 1, 3), cards160)


def test_evo_base_stops_at_budget(cards160):
    config = TrainerConfig(variant=EVO_BASE, **{**SMALL, "budget": 72 * 3 + 10})
    sim = sim_for(cards160)
    pop, hist = evo_base_train(config, generate_drafts(cards160, 1, 3), cards160, sim)
    assert sim.cost.games == 72 * 3
    assert [s.generation for s in hist.snapshots] == [0, 1, 2]
    assert budget_generations(config) == 2


def test_evo_base_fixed_point(cards160):
    config = TrainerConfig(variant=EVO_BASE, mutation_rate=0.0, elitism=4, generations=2, **SMALL)
    pop, hist = evo_base_train(config, generate_drafts(cards160, 1, 3), cards160)
    initial = np.random.default_rng(derive_seed(9, "population")).random((4, 160))
    assert sorted(g.tobytes() for g in pop.genomes) == sorted(g.tobytes() for g in initial)
    assert [s.generation for s in hist.snapshots] == [0, 1, 2]


def test_crossover_of_identical_parents_is_identity():
    g = np.random.default_rng(0).random(160)
    child = mutate(uniform_crossover(g, g, np.random.default_rng(1)), 0.0, np.random.default_rng(2))
    assert child.tobytes() == g.tobytes()


def test_history_round_trip(cards160, tmp_path):
    config = TrainerConfig(variant=AG, generations=2, **SMALL)
    drafts = generate_drafts(cards160, 1, 3)
    _, hist = ag_train(config, drafts, cards160)
    first = tmp_path / "a"
    hist.save(first)
    loaded = RunHistory.load(first)
    second = tmp_path / "b"
    loaded.save(second)
    for path in sorted(first.iterdir()):
        assert path.read_bytes() == (second / path.name).read_bytes()
    assert json.loads((first / "config.json").read_text())["variant"] == AG
    assert loaded.total_cost == hist.total_cost


def test_budget_population():
    assert budget_population(RANDOM_ALL, 72, 3, 2) == 4
    assert budget_population(RANDOM_ALL, 71, 3, 2) == 3
    assert budget_population(RANDOM_TOURNAMENT, 18, 3, 2) == 4
    assert budget_population(RANDOM_TOURNAMENT, 41, 3, 2) == 4
    assert budget_population(RANDOM_TOURNAMENT, 42, 3, 2) == 8


def test_budget_generations_kd_multiple_of_k():
    config = TrainerConfig(variant=AG_WEIGHTS_KD, k=2, population_size=4, train_drafts=4, score_rounds=2, tournament_games=2, budget=1000)
    gens = budget_generations(config)
    assert gens % 2 == 0
    assert config_cost(replace(config, generations=gens)) <= 1000 < config_cost(replace(config, generations=gens + 2))
