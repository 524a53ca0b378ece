"""Counter-based deterministic random stream (SplitMix64).

A single stream drives a whole simulation run. The state is just
(seed, counter), so it can be embedded in a snapshot and resumed
exactly. Draw order is part of the frozen simulation interface:
buyer sampling draws come first each tick, then mutation draws
inside applied pokes.
"""

from __future__ import annotations

from dataclasses import dataclass

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass
class RandomStream:
    seed: int
    counter: int = 0

    def __post_init__(self) -> None:
        self.seed &= _MASK64

    def next_u64(self) -> int:
        self.counter += 1
        return _mix((self.seed + self.counter * _GAMMA) & _MASK64)

    def randrange(self, n: int) -> int:
        """Uniform int in [0, n). Modulo bias is negligible for n << 2^64."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        return self.next_u64() % n

    def sample_indices(self, n: int, k: int) -> list[int]:
        """First k slots of a partial Fisher-Yates shuffle of range(n).

        Consumes exactly min(k, n) draws; returns all of range(n) when k >= n.
        """
        if k >= n:
            k = n
        pool = list(range(n))
        for i in range(k):
            j = i + self.randrange(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def state(self) -> dict[str, int]:
        return {"counter": self.counter, "seed": self.seed}

    @classmethod
    def from_state(cls, state: dict[str, int]) -> "RandomStream":
        return cls(seed=state["seed"], counter=state["counter"])
