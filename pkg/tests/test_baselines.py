import numpy as np
import pytest
from hypothesis import given, strategies as st

from arenadraft.agents import make_agent
from arenadraft.baselines import (
    check_ordering,
    load_ordering,
    ordering_to_policy,
    placeholder_orderings,
    random_all_baseline,
    random_tournament_baseline,
)
from arenadraft.draft import generate_drafts
from arenadraft.simulation import Simulator


@pytest.fixture
def sim(cards160):
    return Simulator(cards160, make_agent("random"))


def test_random_all_cost_and_winner(cards160, sim):
    drafts = generate_drafts(cards160, 3, 3)
    best, genomes, scores = random_all_baseline(sim, 4, drafts, 2, seed=1)
    assert sim.cost.games == 72
    assert scores.sum() == 72 * 2
    assert best.values.tobytes() == genomes[int(np.argmax(scores))].tobytes()


def test_random_tournament_cost(cards160, sim):
    drafts = generate_drafts(cards160, 3, 3)
    random_tournament_baseline(sim, 4, drafts, 2, seed=1)
    assert sim.cost.games == 18


def test_baselines_with_two_genomes(cards160, sim):
    drafts = generate_drafts(cards160, 3, 1)
    random_all_baseline(sim, 2, drafts, 2, seed=0)
    random_tournament_baseline(sim, 2, drafts, 2, seed=0)
    assert sim.cost.games == 4 + 2


def test_baselines_are_seeded(cards160):
    drafts = generate_drafts(cards160, 3, 2)
    runs = [random_all_baseline(Simulator(cards160, make_agent("random")), 4, drafts, 2, seed=5) for _ in range(2)]
    assert runs[0][0] == runs[1][0]
    np.testing.assert_array_equal(runs[0][2], runs[1][2])


def test_tournament_bracket_structure(cards160, sim):
    drafts = generate_drafts(cards160, 3, 1)
    best, genomes, rounds = random_tournament_baseline(sim, 8, drafts, 2, seed=2)
    assert sorted(rounds) == [1, 1, 1, 1, 2, 2, 3, 4]
    champion = rounds.index(4)
    assert best.values.tobytes() == genomes[champion].tobytes()


def test_tournament_rejects_other_sizes(cards160, sim):
    with pytest.raises(ValueError):
        random_tournament_baseline(sim, 6, generate_drafts(cards160, 3, 1), 2, seed=0)


def test_ordering_examples():
    policy = ordering_to_policy([3, 1, 4, 2])
    np.testing.assert_array_equal(policy.values, [0.75, 0.25, 1.0, 0.5])


@given(st.permutations(list(range(1, 21))))
def test_ordering_policy_is_monotone_and_injective(ordering):
    values = ordering_to_policy(ordering).values
    ranked = [values[c - 1] for c in ordering]
    assert all(a > b for a, b in zip(ranked, ranked[1:]))
    reversed_values = ordering_to_policy(ordering[::-1]).values
    assert np.all(np.argsort(values) == np.argsort(-reversed_values))


def test_ordering_must_be_a_permutation():
    with pytest.raises(ValueError):
        ordering_to_policy([1, 1, 2])
    with pytest.raises(ValueError):
        check_ordering([1, 2, 4], 3)


def test_load_ordering(tmp_path):
    path = tmp_path / "order.txt"
    path.write_text("# best first\n2\n3\n\n1  # worst\n")
    assert load_ordering(path) == [2, 3, 1]
    with pytest.raises(ValueError):
        load_ordering(path, set_size=4)
    path.write_text("2\nthree\n")
    with pytest.raises(ValueError):
        load_ordering(path)


def test_placeholder_orderings_cover_the_default_set():
    orderings = placeholder_orderings()
    assert len(orderings) == 2
    for ordering in orderings:
        check_ordering(ordering, 160)
    assert orderings[0] != orderings[1]
