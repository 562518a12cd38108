"""Genome-level variation, selection and merge operators.

Genomes are float64 vectors in ``[0, 1]``; populations are ``(n, size)``
matrices. Every random choice draws from a caller-supplied numpy Generator.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from .config import AG, AG_ALL, AG_FAMILY

ActiveSet = Union[np.ndarray, Iterable[int]]


def random_population(rng: np.random.Generator, population_size: int, genome_size: int) -> np.ndarray:
    """Uniform genomes in ``[0, 1)``, one per row."""
    return rng.random((population_size, genome_size))


def uniform_crossover(parent1: np.ndarray, parent2: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One child taking each gene from either parent with probability 1/2."""
    if parent1.shape != parent2.shape:
        raise ValueError("parents differ in length")
    take_first = rng.random(parent1.shape[0]) < 0.5
    return np.where(take_first, parent1, parent2)


def mutate(genome: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Copy of ``genome`` with each gene resampled uniformly with probability ``rate``."""
    out = genome.copy()
    hit = rng.random(out.shape[0]) < rate
    out[hit] = rng.random(int(hit.sum()))
    return out


def roulette(scores: np.ndarray, rng: np.random.Generator) -> int:
    """Index drawn with probability proportional to score; uniform if all are zero."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        raise ValueError("cannot select from an empty population")
    if np.any(scores < 0):
        raise ValueError("roulette needs non-negative scores")
    total = scores.sum()
    if total == 0:
        return int(rng.integers(scores.size))
    return int(rng.choice(scores.size, p=scores / total))


def _as_mask(active: ActiveSet, size: int) -> np.ndarray:
    if isinstance(active, np.ndarray) and active.dtype == bool:
        if active.shape != (size,):
            raise ValueError(f"active mask has shape {active.shape}, expected ({size},)")
        return active
    mask = np.zeros(size, dtype=bool)
    for card_id in active:
        if not 1 <= card_id <= size:
            raise ValueError(f"active card id {card_id} outside 1..{size}")
        mask[card_id - 1] = True
    return mask


def merge_one(
    parent: np.ndarray,
    child: np.ndarray,
    active: ActiveSet,
    variant: str,
    weight: float = 0.75,
) -> np.ndarray:
    """Combine a parent and a child genome.

    Args:
        parent: genome from the previous population.
        child: genome from the offspring population.
        active: boolean gene mask, or an iterable of active card ids (1-based).
        variant: ``ag`` copies active genes from the child; ``ag_all``
            returns the child; the weighted variants blend active genes as
            ``weight * parent + (1 - weight) * child``.
        weight: parent share for the weighted variants.

    Returns:
        A new genome; inactive genes are bit-identical to the parent's.
    """
    parent = np.asarray(parent, dtype=np.float64)
    child = np.asarray(child, dtype=np.float64)
    if parent.shape != child.shape:
        raise ValueError(f"genome lengths differ: {parent.shape} vs {child.shape}")
    if variant not in AG_FAMILY:
        raise ValueError(f"merge is undefined for variant {variant!r}")
    if variant == AG_ALL:
        return child.copy()
    mask = _as_mask(active, parent.shape[0])
    if variant == AG:
        return np.where(mask, child, parent)
    blended = weight * parent + (1.0 - weight) * child
    return np.where(mask, np.clip(blended, 0.0, 1.0), parent)


def merge_all(
    old: np.ndarray,
    old_scores: np.ndarray,
    new: np.ndarray,
    new_scores: np.ndarray,
    active: ActiveSet,
    variant: str,
    weight: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Build the next population by merging roulette-picked parent/child pairs.

    Returns:
        ``(genomes, scores)`` where each merged genome carries the score of
        the child it was merged from.
    """
    n = old.shape[0]
    if new.shape != old.shape:
        raise ValueError("old and new populations differ in shape")
    mask = _as_mask(active, old.shape[1])
    genomes = np.empty_like(old)
    scores = np.empty(n, dtype=np.int64)
    for slot in range(n):
        p = roulette(old_scores, rng)
        c = roulette(new_scores, rng)
        genomes[slot] = merge_one(old[p], new[c], mask, variant, weight)
        scores[slot] = new_scores[c]
    return genomes, scores
