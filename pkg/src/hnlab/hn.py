"""Harder-Narasimhan types of vector bundles on the Fargues-Fontaine curve.

A bundle is determined up to isomorphism by the multiset of its stable
summands O(d/h), each of rank h and degree d with gcd(d, h) = 1.  Slopes are
:class:`fractions.Fraction` values, which are reduced with positive
denominator by construction, so ``slope.denominator`` is the rank of O(slope).
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping

INFINITE = math.inf


class _SlopeMultiset:
    """Sorted (slope, multiplicity) pairs with distinct slopes, descending."""

    __slots__ = ("summands",)

    def __init__(self, summands: Mapping | Iterable = ()):
        counts: Counter = Counter()
        items = summands.items() if isinstance(summands, Mapping) else summands
        for slope, mult in items:
            slope = Fraction(slope)
            if mult < 0 or int(mult) != mult:
                raise ValueError(f"multiplicity must be a non-negative integer, got {mult}")
            counts[slope] += int(mult)
        self.summands = tuple(sorted(((s, m) for s, m in counts.items() if m), reverse=True))

    @classmethod
    def from_sorted(cls, summands: Iterable[tuple[Fraction, int]]):
        """Trusted fast path: distinct Fraction slopes, descending, positive multiplicities."""
        obj = cls.__new__(cls)
        obj.summands = tuple(summands)
        return obj

    @classmethod
    def from_slopes(cls, slopes: Iterable):
        """Build from a list of slopes, one entry per stable summand."""
        return cls(Counter(Fraction(s) for s in slopes).items())

    @property
    def rank(self) -> int:
        return sum(m * s.denominator for s, m in self.summands)

    @property
    def degree(self) -> int:
        return sum(m * s.numerator for s, m in self.summands)

    def slopes(self) -> list[Fraction]:
        """Distinct slopes, descending."""
        return [s for s, _ in self.summands]

    def multiplicity(self, slope) -> int:
        return dict(self.summands).get(Fraction(slope), 0)

    def is_empty(self) -> bool:
        return not self.summands

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.summands == other.summands

    def __hash__(self):
        return hash((type(self).__name__, self.summands))

    def __lt__(self, other):
        return self.summands < other.summands

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    def __repr__(self):
        return f"{type(self).__name__}({{{self.label()}}})"

    def label(self) -> str:
        """Slopes listed once per stable summand, e.g. '1/3,1/3,0,0'."""
        return ",".join(str(s) for s, m in self.summands for _ in range(m))

    def to_json(self) -> dict:
        return {"summands": [{"num": s.numerator, "den": s.denominator, "mult": m}
                             for s, m in self.summands]}

    @classmethod
    def from_json(cls, obj: dict):
        try:
            entries = obj["summands"]
            pairs = []
            for e in entries:
                if int(e["den"]) <= 0:
                    raise ValueError("denominator must be positive")
                s = Fraction(int(e["num"]), int(e["den"]))
                if s.denominator != int(e["den"]):
                    raise ValueError(f"slope {e['num']}/{e['den']} is not reduced")
                pairs.append((s, int(e["mult"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed slope multiset: {exc}") from exc
        return cls(pairs)


class HNType(_SlopeMultiset):
    """HN polygon of a bundle: stable slopes with multiplicities."""

    __slots__ = ()


class NewtonSlopes(_SlopeMultiset):
    """Newton slopes of an isocrystal or p-divisible group.

    Multiplicities count isoclinic simple pieces, so the height is
    sum(mult * denominator), same convention as :class:`HNType`.
    """

    __slots__ = ()

    @property
    def height(self) -> int:
        return self.rank

    def is_pdiv(self) -> bool:
        return all(0 <= s <= 1 for s, _ in self.summands)


O = HNType([(0, 1)])


def rank(t: HNType) -> int:
    return t.rank


def degree(t: HNType) -> int:
    return t.degree


def mu_max(t: HNType) -> Fraction:
    if t.is_empty():
        raise ValueError("mu_max of the zero bundle")
    return t.summands[0][0]


def mu_min(t: HNType) -> Fraction:
    if t.is_empty():
        raise ValueError("mu_min of the zero bundle")
    return t.summands[-1][0]


def dual(t: HNType) -> HNType:
    return type(t)((-s, m) for s, m in t.summands)


def tensor(a: HNType, b: HNType) -> HNType:
    """O(l) (x) O(m) = O(l+m)^(h*h'/h'') where h'' is the denominator of l+m."""
    out: Counter = Counter()
    for s1, m1 in a.summands:
        for s2, m2 in b.summands:
            s = s1 + s2
            out[s] += m1 * m2 * s1.denominator * s2.denominator // s.denominator
    return HNType(out.items())


def direct_sum(a: HNType, b: HNType) -> HNType:
    return HNType(list(a.summands) + list(b.summands))


def bundle_of_isocrystal(n: NewtonSlopes) -> HNType:
    """HN slopes of E(N) are the negatives of the Newton slopes of N."""
    return HNType((-s, m) for s, m in n.summands)


def bundle_of_pdiv(h: NewtonSlopes) -> HNType:
    """E(H) = E(N) (x) O(1) where N has slopes 1 - s_i."""
    if not h.is_pdiv():
        bad = [str(s) for s, _ in h.summands if not 0 <= s <= 1]
        raise ValueError(f"p-divisible group slopes must lie in [0, 1]: {', '.join(bad)}")
    n = NewtonSlopes((1 - s, m) for s, m in h.summands)
    return tensor(bundle_of_isocrystal(n), HNType([(1, 1)]))


def h0_dim(t: HNType):
    """dim H^0, or INFINITE when some slope is positive.

    Negative slopes contribute nothing; each copy of O contributes 1.
    """
    if any(s > 0 for s, _ in t.summands):
        return INFINITE
    return t.multiplicity(0)


def h1_vanishes(t: HNType) -> bool:
    return all(s >= 0 for s, _ in t.summands)


def all_slopes_positive(t: HNType) -> bool:
    return all(s > 0 for s, _ in t.summands)


def is_isoclinic(n: NewtonSlopes) -> bool:
    return len(n.summands) == 1
