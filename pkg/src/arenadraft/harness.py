"""Evaluation protocols over trained policies and run histories.

Every protocol plays through a :class:`~arenadraft.simulation.Simulator`
and derives its game seeds and evaluation drafts from the ``seed`` it is
given, so outputs are pure functions of their inputs. Win rates are in
percent with draws counted as half a win.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .baselines import ordering_to_policy, placeholder_orderings
from .cardset import CardSet
from .draft import Draft, DraftPolicy, generate_drafts
from .evolution.history import RunHistory, Snapshot
from .matches import credit, play_pairings
from .seeding import derive_seed
from .simulation import Simulator


def evaluation_drafts(card_set: CardSet, seed: int, count: int, tag: str = "eval") -> list[Draft]:
    """Drafts from a seed namespace that training never uses."""
    return generate_drafts(card_set, derive_seed(seed, "harness", tag), count)


def _genome_matrix(policies: Sequence) -> np.ndarray:
    return np.stack([p.values if isinstance(p, DraftPolicy) else np.asarray(p, dtype=np.float64) for p in policies])


# ------------------------------------------------------------------- opponents


@dataclass(frozen=True)
class OpponentPool:
    labels: tuple[str, ...]
    policies: tuple[DraftPolicy, ...]

    def __len__(self) -> int:
        return len(self.policies)


def default_opponent_pool(card_set: CardSet, seed: int, random_count: int = 3, orderings=None) -> OpponentPool:
    """Fixed random genomes plus ordering policies.

    The random genomes depend only on ``seed``; ``orderings`` defaults to
    the two bundled placeholder orderings.
    """
    rng = np.random.default_rng(derive_seed(seed, "harness", "pool"))
    labels, policies = [], []
    for i in range(random_count):
        labels.append(f"random_{i + 1}")
        policies.append(DraftPolicy(rng.random(len(card_set))))
    if orderings is None:
        orderings = placeholder_orderings() if len(card_set) == 160 else []
    for i, ordering in enumerate(orderings):
        labels.append(f"ordering_{i + 1}")
        policies.append(ordering_to_policy(ordering))
    return OpponentPool(tuple(labels), tuple(policies))


def winrates_vs_pool(
    sim: Simulator,
    policies: Sequence,
    pool: OpponentPool,
    drafts: Sequence[Draft],
    games: int,
    seed_parts: tuple,
) -> np.ndarray:
    """Win rate (%) of each policy against each pool member, shape ``(P, len(pool))``.

    Every (policy, opponent) pairing plays ``games`` games per draft with
    alternating seats; cost is ``P * len(pool) * len(drafts) * games``.
    """
    p = len(policies)
    genomes = _genome_matrix(list(policies) + list(pool.policies))
    pairings = [(i, p + j) for i in range(p) for j in range(len(pool))]
    points = play_pairings(sim, genomes, drafts, pairings, games, seed_parts)
    rates = points[:, 0] / (2.0 * games * len(drafts)) * 100.0
    return rates.reshape(p, len(pool))


# --------------------------------------------------------------- matchup table


@dataclass
class MatchupTable:
    """Square win-rate table; ``mean[i, j]`` is row policy i's rate against j.

    Diagonal cells are unused and hold zero.
    """

    labels: list[str]
    mean: np.ndarray
    std: np.ndarray
    per_repetition: np.ndarray

    @property
    def row_average(self) -> np.ndarray:
        n = len(self.labels)
        off = ~np.eye(n, dtype=bool)
        return np.array([self.mean[i][off[i]].mean() for i in range(n)])

    def render(self) -> str:
        width = max(12, max(len(label) for label in self.labels) + 2)
        head = "".ljust(width) + "".join(label.rjust(width) for label in self.labels) + "average".rjust(width)
        lines = [head]
        for i, label in enumerate(self.labels):
            cells = []
            for j in range(len(self.labels)):
                cell = "-" if i == j else f"{self.mean[i, j]:.2f}±{self.std[i, j]:.2f}"
                cells.append(cell.rjust(width))
            lines.append(label.ljust(width) + "".join(cells) + f"{self.row_average[i]:.2f}".rjust(width))
        return "\n".join(lines)


def round_robin_eval(
    sim: Simulator,
    labels: Sequence[str],
    policies: Sequence,
    n_drafts: int,
    games_per_pair: int,
    repetitions: int,
    seed: int,
) -> MatchupTable:
    """Every unordered pair plays ``games_per_pair`` games per draft.

    Each repetition uses fresh evaluation drafts. The standard deviation is
    the population deviation across repetitions.
    """
    n = len(policies)
    if n < 2:
        raise ValueError("need at least two policies")
    if len(labels) != n:
        raise ValueError("one label per policy")
    genomes = _genome_matrix(policies)
    pairings = list(combinations(range(n), 2))
    reps = np.zeros((repetitions, n, n))
    for rep in range(repetitions):
        drafts = evaluation_drafts(sim.card_set, seed, n_drafts, tag=f"matchup{rep}")
        points = play_pairings(sim, genomes, drafts, pairings, games_per_pair, (seed, "matchup", rep))
        total = 2.0 * games_per_pair * n_drafts
        for (a, b), (pa, pb) in zip(pairings, points):
            reps[rep, a, b] = pa / total * 100.0
            reps[rep, b, a] = pb / total * 100.0
    return MatchupTable(list(labels), reps.mean(axis=0), reps.std(axis=0), reps)


# ------------------------------------------------------------ evolution curve


@dataclass(frozen=True)
class CurvePoint:
    cost: int
    winrate: float


def snapshot_winrate(
    sim: Simulator,
    snapshot: Snapshot,
    pool: OpponentPool,
    drafts: Sequence[Draft],
    games: int,
    seed_parts: tuple,
    top: int = 5,
) -> float:
    """Mean win rate of a snapshot's best ``top`` genomes against the pool."""
    rates = winrates_vs_pool(sim, snapshot.genomes[:top], pool, drafts, games, seed_parts)
    return float(rates.mean())


def evolution_curve(
    sim: Simulator,
    history: RunHistory,
    eval_drafts: Sequence[Draft],
    pool: OpponentPool,
    games: int,
    seed: int,
    top: int = 5,
) -> list[CurvePoint]:
    """Win rate of each snapshot's top genomes against cumulative training cost."""
    if not history.snapshots:
        raise ValueError("history has no snapshots")
    return [
        CurvePoint(snap.cost, snapshot_winrate(sim, snap, pool, eval_drafts, games, (seed, "curve"), top))
        for snap in history.snapshots
    ]


# ---------------------------------------------------------------- correlation


def pearson(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    """Pearson correlation, or ``None`` when either series has no variance."""
    if len(xs) != len(ys):
        raise ValueError("series differ in length")
    if len(xs) < 2:
        return None
    try:
        return statistics.correlation(list(xs), list(ys))
    except statistics.StatisticsError:
        return None


@dataclass
class CorrelationResult:
    generations: list[int]
    train: list[float]
    eval: list[float]
    r: Optional[float]

    @property
    def final_shortfall(self) -> float:
        """Train minus eval win rate at the last checkpoint."""
        return self.train[-1] - self.eval[-1]


def correlation_experiment(
    sim: Simulator,
    history: RunHistory,
    train_drafts: Sequence[Draft],
    eval_drafts: Sequence[Draft],
    pool: OpponentPool,
    games: int,
    seed: int,
    top: int = 5,
    stride: int = 1,
) -> CorrelationResult:
    """Per-checkpoint win rates on training and held-out drafts, with Pearson r."""
    train_ids = {d.turns for d in train_drafts}
    if any(d.turns in train_ids for d in eval_drafts):
        raise ValueError("training and evaluation drafts overlap")
    if stride < 1:
        raise ValueError("stride must be at least 1")
    if not history.snapshots:
        raise ValueError("history has no snapshots")
    snaps = history.snapshots[::stride]
    if snaps[-1] is not history.snapshots[-1]:
        snaps.append(history.snapshots[-1])
    gens, train, held = [], [], []
    for snap in snaps:
        gens.append(snap.generation)
        train.append(snapshot_winrate(sim, snap, pool, train_drafts, games, (seed, "corr-train"), top))
        held.append(snapshot_winrate(sim, snap, pool, eval_drafts, games, (seed, "corr-eval"), top))
    return CorrelationResult(gens, train, held, pearson(train, held))


# ------------------------------------------------------------------ champions


@dataclass
class ChampionsResult:
    champion_generations: list[int]
    generations: list[int]
    winrates: np.ndarray  # (champions, generations)


def champions_analysis(
    sim: Simulator,
    history: RunHistory,
    train_drafts: Sequence[Draft],
    games: int,
    stride: int,
    seed: int,
    top: int = 5,
) -> ChampionsResult:
    """Pit snapshot champions against the top genomes of every generation.

    Every ``stride``-th snapshot's top genomes form a champion group; each
    group plays every generation's top genomes (all group-vs-group
    pairings) on all training drafts.
    """
    if stride < 1:
        raise ValueError("stride must be at least 1")
    snaps = history.snapshots
    if not snaps:
        raise ValueError("history has no snapshots")
    champions = snaps[::stride]
    rates = np.zeros((len(champions), len(snaps)))
    for ci, champ in enumerate(champions):
        for gi, snap in enumerate(snaps):
            a = champ.genomes[:top]
            b = snap.genomes[:top]
            genomes = np.vstack([a, b])
            pairings = [(i, len(a) + j) for i in range(len(a)) for j in range(len(b))]
            points = play_pairings(sim, genomes, train_drafts, pairings, games, (seed, "champions", ci, gi))
            totals = credit(points, pairings, len(genomes))[: len(a)]
            rates[ci, gi] = totals.sum() / (2.0 * games * len(train_drafts) * len(pairings)) * 100.0
    return ChampionsResult([c.generation for c in champions], [s.generation for s in snaps], rates)


# ----------------------------------------------------------------------- CSVs


def _write_rows(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_matchup_csv(table: MatchupTable, path) -> Path:
    rows = []
    for i, row in enumerate(table.labels):
        for j, col in enumerate(table.labels):
            if i != j:
                rows.append([row, col, f"{table.mean[i, j]:.4f}", f"{table.std[i, j]:.4f}"])
    return _write_rows(path, ["row", "col", "mean", "std"], rows)


def write_curve_csv(points: Sequence[CurvePoint], path) -> Path:
    return _write_rows(path, ["cost", "winrate"], [[p.cost, f"{p.winrate:.4f}"] for p in points])


def write_correlation_csv(result: CorrelationResult, path) -> Path:
    rows = [[g, f"{t:.4f}", f"{e:.4f}"] for g, t, e in zip(result.generations, result.train, result.eval)]
    return _write_rows(path, ["checkpoint", "train_wr", "eval_wr"], rows)


def write_champions_csv(result: ChampionsResult, path) -> Path:
    rows = []
    for ci, champ in enumerate(result.champion_generations):
        for gi, gen in enumerate(result.generations):
            rows.append([champ, gen, f"{result.winrates[ci, gi]:.4f}"])
    return _write_rows(path, ["champion_id", "generation", "winrate"], rows)
