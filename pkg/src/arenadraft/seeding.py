"""Seed derivation and the per-game random stream.

Every simulated game draws its randomness from a :class:`GameRng` whose
seed is derived by hashing a tuple of identifying parts, e.g.
``(run_seed, generation, "score", pairing, game)``. Results therefore do not
depend on the order in which games are scheduled.
"""

from __future__ import annotations

import hashlib
import struct

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def derive_seed(*parts) -> int:
    """Hash an ordered tuple of ints/strings into a 64-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, str):
            data = part.encode("utf-8")
            h.update(b"s" + struct.pack("<I", len(data)) + data)
        else:
            h.update(b"i" + struct.pack("<Q", int(part) & MASK64))
    return int.from_bytes(h.digest(), "little")


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step; returns ``(new_state, output)``."""
    state = (state + _GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class GameRng:
    """SplitMix64 stream used for deck shuffles and agent choices.

    The compiled simulator implements the same recurrence, so a game played
    by either engine path sees the identical sequence of draws.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state, out = splitmix64(self.state)
        return out

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by multiply-shift."""
        self.state = s = (self.state + _GOLDEN) & MASK64
        z = ((s ^ (s >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return ((z ^ (z >> 31)) * n) >> 64

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
