"""Trainer hyperparameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Optional

EVO_BASE = "evo_base"
AG = "ag"
AG_ALL = "ag_all"
AG_WEIGHTS = "ag_weights"
AG_WEIGHTS_KD = "ag_weights_kd"
AG_WEIGHTS_KG = "ag_weights_kg"
RANDOM_ALL = "random_all"
RANDOM_TOURNAMENT = "random_tournament"

AG_FAMILY = (AG, AG_ALL, AG_WEIGHTS, AG_WEIGHTS_KD, AG_WEIGHTS_KG)
EVOLUTIONARY = (EVO_BASE,) + AG_FAMILY
BASELINES = (RANDOM_ALL, RANDOM_TOURNAMENT)
ALL_VARIANTS = EVOLUTIONARY + BASELINES


class ConfigError(ValueError):
    """Inconsistent trainer configuration."""


@dataclass
class TrainerConfig:
    """Every knob of a training run.

    ``generations=None`` means "as many as the draft count" for the
    active-genes family and "as many as the budget allows" for ``evo_base``.
    ``pair_games`` and ``tournament_games`` must be even because every
    pairing plays half of its games from each seat.
    """

    variant: str = AG_WEIGHTS
    population_size: int = 20
    train_drafts: int = 100
    generations: Optional[int] = None
    pair_games: int = 2
    score_rounds: int = 10
    tournament_size: int = 4
    tournament_games: int = 10
    mutation_rate: float = 0.05
    elitism: int = 2
    merge_weight: float = 0.75
    k: int = 1
    budget: int = 1_000_000
    seed: int = 0
    player: str = "random"
    lanes: int = 2
    top_k: int = 5

    def __post_init__(self):
        self.validate()

    @property
    def generation_count(self) -> Optional[int]:
        if self.generations is not None:
            return self.generations
        return self.train_drafts if self.variant in AG_FAMILY else None

    def validate(self) -> None:
        if self.variant not in ALL_VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}; expected one of {ALL_VARIANTS}")
        if self.population_size < 2:
            raise ConfigError("population_size must be at least 2")
        if self.train_drafts < 1:
            raise ConfigError("train_drafts must be at least 1")
        if self.generations is not None and self.generations < 0:
            raise ConfigError("generations must be non-negative")
        for name in ("pair_games", "tournament_games"):
            value = getattr(self, name)
            if value < 2 or value % 2:
                raise ConfigError(f"{name} must be a positive even number, got {value}")
        if self.score_rounds < 1:
            raise ConfigError("score_rounds must be at least 1")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigError("mutation_rate must lie in [0, 1]")
        if not 0.0 <= self.merge_weight <= 1.0:
            raise ConfigError("merge_weight must lie in [0, 1]")
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if self.budget < 0:
            raise ConfigError("budget must be non-negative")
        if self.player not in ("random", "greedy"):
            raise ConfigError(f"player must be 'random' or 'greedy', got {self.player!r}")
        if self.lanes not in (1, 2):
            raise ConfigError("lanes must be 1 or 2")
        if self.variant == EVO_BASE:
            if not 0 <= self.elitism <= self.population_size:
                raise ConfigError("elitism must lie in [0, population_size]")
            if self.tournament_size > self.population_size:
                raise ConfigError("tournament_size exceeds the population")
        if self.variant in AG_FAMILY:
            if self.population_size % 2:
                raise ConfigError("active-genes variants pair the population and need an even size")
            if self.tournament_size < 2 or self.tournament_size > self.population_size:
                raise ConfigError("tournament_size must lie in [2, population_size]")
            gens = self.generation_count
            if self.variant == AG_WEIGHTS_KD and gens % self.k:
                raise ConfigError(f"k={self.k} must divide generations={gens}")
            if self.variant == AG_WEIGHTS_KG and self.score_rounds % self.k:
                raise ConfigError(f"k={self.k} must divide score_rounds={self.score_rounds}")
        if self.variant == RANDOM_TOURNAMENT and self.population_size & (self.population_size - 1):
            raise ConfigError("random_tournament needs a power-of-two population")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TrainerConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)
