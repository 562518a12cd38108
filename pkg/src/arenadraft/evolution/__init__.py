"""Evolutionary trainers for draft policies."""

from .config import (
    AG,
    AG_ALL,
    AG_FAMILY,
    AG_WEIGHTS,
    AG_WEIGHTS_KD,
    AG_WEIGHTS_KG,
    ALL_VARIANTS,
    BASELINES,
    EVO_BASE,
    EVOLUTIONARY,
    RANDOM_ALL,
    RANDOM_TOURNAMENT,
    ConfigError,
    TrainerConfig,
)
from .cost import all_drafts_ag_cost, config_cost, estimate_cost
from .history import RunHistory, Snapshot
from .operators import merge_all, merge_one, mutate, random_population, roulette, uniform_crossover
from .trainers import (
    BudgetError,
    Individual,
    Population,
    ag_train,
    create_offspring,
    evo_base_train,
    make_simulator,
    score_population,
    select_parents,
    variant_schedule,
)

__all__ = [
    "AG",
    "AG_ALL",
    "AG_FAMILY",
    "AG_WEIGHTS",
    "AG_WEIGHTS_KD",
    "AG_WEIGHTS_KG",
    "ALL_VARIANTS",
    "BASELINES",
    "EVO_BASE",
    "EVOLUTIONARY",
    "RANDOM_ALL",
    "RANDOM_TOURNAMENT",
    "BudgetError",
    "ConfigError",
    "Individual",
    "Population",
    "RunHistory",
    "Snapshot",
    "TrainerConfig",
    "ag_train",
    "all_drafts_ag_cost",
    "config_cost",
    "create_offspring",
    "estimate_cost",
    "evo_base_train",
    "make_simulator",
    "merge_all",
    "merge_one",
    "mutate",
    "random_population",
    "roulette",
    "score_population",
    "select_parents",
    "uniform_crossover",
    "variant_schedule",
]
