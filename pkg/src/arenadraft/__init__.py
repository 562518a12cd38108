"""Evolving draft policies for a two-lane collectible card game.

A draft policy is one value per card; during an arena draft the highest
valued card of each offered triple is picked. Policies are trained with
active-genes evolution, which only updates the genes of cards that
appeared in the drafts a generation was evaluated on.
"""

from .cardset import CardSet, default_card_set, generate_card_set, load_card_set
from .draft import Draft, DraftPolicy, build_deck, generate_drafts, pick
from .evolution import TrainerConfig, estimate_cost
from .simulation import Simulator
from .training import TrainingResult, train

__version__ = "0.1.0"

__all__ = [
    "CardSet",
    "Draft",
    "DraftPolicy",
    "Simulator",
    "TrainerConfig",
    "TrainingResult",
    "build_deck",
    "default_card_set",
    "estimate_cost",
    "generate_card_set",
    "generate_drafts",
    "load_card_set",
    "pick",
    "train",
]
