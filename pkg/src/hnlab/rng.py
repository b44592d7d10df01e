"""SplitMix64, the generator behind every sampling command.

State advance and output mixing follow the published SplitMix64 reference:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all arithmetic mod 2**64.  ``below(n)`` draws by rejection on the top of the
64-bit range, so streams are reproducible in any language that implements the
same two functions.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def split(self, index: int) -> "SplitMix64":
        """Independent child stream for worker ``index``."""
        child = SplitMix64(self.state ^ ((index + 1) * GOLDEN & MASK64))
        child.next_u64()
        return child


def random_scalar(rng: SplitMix64, field, bound: int = 3):
    """Uniform element of F_p, or a uniform integer in [-bound, bound] over Q."""
    if field.p is not None:
        return field(rng.below(field.p))
    return field(rng.randint(-bound, bound))
