"""Per-generation training snapshots and their on-disk layout.

A run directory holds ``config.json``, ``drafts.txt``, one
``gen_XXXX.json`` per snapshot and a ``curve.csv`` summary. All JSON is
written with sorted keys and fixed float formatting so equal runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..draft import Draft, DraftPolicy, drafts_from_text, drafts_to_text


@dataclass
class Snapshot:
    """Top individuals after one generation.

    Attributes:
        generation: 0 for an initial evaluation, then 1, 2, ...
        cost: cumulative simulated games at the end of the generation.
        draft_indices: training drafts used by the generation.
        genomes: ``(k, size)`` matrix, best first.
        scores: half-point scores matching ``genomes``.
    """

    generation: int
    cost: int
    draft_indices: tuple[int, ...]
    genomes: np.ndarray
    scores: tuple[int, ...]

    def policies(self) -> list[DraftPolicy]:
        return [DraftPolicy(g) for g in self.genomes]

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "cost": self.cost,
            "draft_indices": list(self.draft_indices),
            "scores": list(self.scores),
            "genomes": [[float(v) for v in g] for g in self.genomes],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Snapshot":
        return cls(
            generation=int(data["generation"]),
            cost=int(data["cost"]),
            draft_indices=tuple(int(i) for i in data["draft_indices"]),
            genomes=np.asarray(data["genomes"], dtype=np.float64),
            scores=tuple(int(s) for s in data["scores"]),
        )


def top_individuals(genomes: np.ndarray, scores: np.ndarray, k: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """The ``k`` highest-scoring rows; ties keep population order."""
    order = np.argsort(-np.asarray(scores), kind="stable")[:k]
    return genomes[order].copy(), tuple(int(scores[i]) for i in order)


@dataclass
class RunHistory:
    config: dict
    drafts: list[Draft]
    snapshots: list[Snapshot] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.snapshots)

    def record(
        self,
        generation: int,
        cost: int,
        draft_indices: Sequence[int],
        genomes: np.ndarray,
        scores: np.ndarray,
        top_k: int,
    ) -> Snapshot:
        top, top_scores = top_individuals(genomes, scores, top_k)
        snap = Snapshot(generation, int(cost), tuple(int(i) for i in draft_indices), top, top_scores)
        self.snapshots.append(snap)
        return snap

    @property
    def final(self) -> Optional[Snapshot]:
        return self.snapshots[-1] if self.snapshots else None

    @property
    def total_cost(self) -> int:
        return self.snapshots[-1].cost if self.snapshots else 0

    def save(self, directory) -> Path:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.json").write_text(json.dumps(self.config, sort_keys=True, indent=2) + "\n")
        (out / "drafts.txt").write_text(drafts_to_text(self.drafts))
        for snap in self.snapshots:
            path = out / f"gen_{snap.generation:04d}.json"
            path.write_text(json.dumps(snap.to_dict(), sort_keys=True) + "\n")
        with open(out / "curve.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["generation", "cost", "best_score", "mean_top_score"])
            for snap in self.snapshots:
                mean = sum(snap.scores) / len(snap.scores) if snap.scores else 0.0
                writer.writerow([snap.generation, snap.cost, snap.scores[0] if snap.scores else 0, f"{mean:.4f}"])
        return out

    @classmethod
    def load(cls, directory) -> "RunHistory":
        src = Path(directory)
        if not (src / "config.json").is_file():
            raise FileNotFoundError(f"{src} is not a run directory (config.json missing)")
        config = json.loads((src / "config.json").read_text())
        drafts_path = src / "drafts.txt"
        drafts = drafts_from_text(drafts_path.read_text()) if drafts_path.is_file() else []
        snaps = [Snapshot.from_dict(json.loads(p.read_text())) for p in sorted(src.glob("gen_*.json"))]
        snaps.sort(key=lambda s: s.generation)
        return cls(config, drafts, snaps)
