"""Deterministic pseudo-random streams.

SplitMix64 throughout: a fixed, documented generator with a 64-bit seed
that is stable across platforms and Python versions, so every randomized
command reproduces bit-identically from its seed.

Stream-split rule: the stream for trial ``i`` under master seed ``s`` is
seeded with ``mix64(s ^ ((i + 1) * GOLDEN))``.  Per-trial seeds are
index-derived, not sequence-derived, so aggregation order (and worker
count) cannot change results.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """SplitMix64 finalizer."""
    x &= MASK64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & MASK64
    return x ^ (x >> 31)


class Stream:
    """A SplitMix64 stream of 64-bit words."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n).  Multiply-shift reduction; the bias
        of ~n/2**64 is negligible for the sample sizes used here."""
        return (self.next_u64() * n) >> 64

    def uniform(self) -> float:
        return self.next_u64() / float(1 << 64)


def trial_seed(master_seed: int, index: int) -> int:
    """Seed of the ``index``-th trial (see the stream-split rule above)."""
    return mix64(master_seed ^ ((index + 1) * GOLDEN & MASK64))


def trial_stream(master_seed: int, index: int) -> Stream:
    """Independent stream for the ``index``-th trial."""
    return Stream(trial_seed(master_seed, index))
