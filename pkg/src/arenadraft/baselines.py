"""Non-evolutionary reference policies.

``random_all_baseline`` and ``random_tournament_baseline`` pick the best of
``n`` uniform random genomes by playing games; ``ordering_to_policy`` turns
a fixed card ranking into a draft policy.
"""

from __future__ import annotations

from itertools import permutations
from pathlib import Path
from typing import Sequence

import numpy as np

from .draft import Draft, DraftPolicy
from .matches import DeckCache, credit, play_pairings
from .seeding import derive_seed
from .simulation import Simulator


def _random_genomes(seed: int, tag: str, n: int, size: int) -> np.ndarray:
    return np.random.default_rng(derive_seed(seed, tag)).random((n, size))


def random_all_scores(
    sim: Simulator, genomes: np.ndarray, drafts: Sequence[Draft], pair_games: int, seed: int
) -> np.ndarray:
    """Half-points of every genome when each ordered pair plays ``pair_games`` per draft."""
    n = genomes.shape[0]
    pairings = list(permutations(range(n), 2))
    points = play_pairings(sim, genomes, drafts, pairings, pair_games, (seed, "random_all"))
    return credit(points, pairings, n)


def random_all_baseline(
    sim: Simulator, n: int, drafts: Sequence[Draft], pair_games: int, seed: int
) -> tuple[DraftPolicy, np.ndarray, np.ndarray]:
    """Best of ``n`` random genomes after a full round robin.

    Every ordered pair plays ``pair_games`` games on each draft, so the run
    costs ``n * (n - 1) * pair_games * len(drafts)`` games.

    Returns:
        ``(winner, genomes, scores)``; ties go to the lowest index.
    """
    if n < 2:
        raise ValueError("random_all needs at least two genomes")
    genomes = _random_genomes(seed, "random_all", n, len(sim.card_set))
    scores = random_all_scores(sim, genomes, drafts, pair_games, seed)
    return DraftPolicy(genomes[int(np.argmax(scores))]), genomes, scores


def random_tournament_baseline(
    sim: Simulator, n: int, drafts: Sequence[Draft], pair_games: int, seed: int
) -> tuple[DraftPolicy, np.ndarray, list[int]]:
    """Single-elimination bracket over ``n`` random genomes.

    Each matchup plays ``pair_games`` games per draft; the genome with more
    points advances and a tie advances the lower bracket index. The run
    costs ``(n - 1) * pair_games * len(drafts)`` games.

    Returns:
        ``(winner, genomes, elimination_round)`` where
        ``elimination_round[i]`` is the round genome ``i`` lost in (the
        champion gets the number of rounds plus one).
    """
    if n < 2 or n & (n - 1):
        raise ValueError(f"random_tournament needs a power-of-two population, got {n}")
    genomes = _random_genomes(seed, "random_tournament", n, len(sim.card_set))
    cache = DeckCache(genomes, drafts)
    alive = list(range(n))
    eliminated = [0] * n
    rnd = 0
    while len(alive) > 1:
        rnd += 1
        pairings = [(alive[i], alive[i + 1]) for i in range(0, len(alive), 2)]
        points = play_pairings(sim, cache, drafts, pairings, pair_games, (seed, "random_tournament", rnd))
        survivors = []
        for (a, b), (pa, pb) in zip(pairings, points):
            winner, loser = (a, b) if pa >= pb else (b, a)
            survivors.append(winner)
            eliminated[loser] = rnd
        alive = survivors
    eliminated[alive[0]] = rnd + 1
    return DraftPolicy(genomes[alive[0]]), genomes, eliminated


def check_ordering(ordering: Sequence[int], set_size: int) -> None:
    if sorted(ordering) != list(range(1, set_size + 1)):
        raise ValueError(f"ordering is not a permutation of 1..{set_size}")


def ordering_to_policy(ordering: Sequence[int]) -> DraftPolicy:
    """Card at 0-based rank ``r`` gets value ``1 - r / len(ordering)``."""
    size = len(ordering)
    check_ordering(ordering, size)
    values = np.empty(size, dtype=np.float64)
    for rank, card_id in enumerate(ordering):
        values[card_id - 1] = 1.0 - rank / size
    return DraftPolicy(values)


def load_ordering(path, set_size: int | None = None) -> list[int]:
    """Read an ordering file: one card id per line, best first."""
    ids = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            ids.append(int(line))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: not a card id: {line!r}") from None
    check_ordering(ids, set_size if set_size is not None else len(ids))
    return ids


def placeholder_orderings() -> list[list[int]]:
    """The two illustrative orderings shipped with the package."""
    here = Path(__file__).parent / "data"
    return [load_ordering(here / name) for name in ("ordering_a.txt", "ordering_b.txt")]
