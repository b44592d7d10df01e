"""Admissible HN profiles of the tangent bundle at a point of a basic RZ space.

For a datum of height n and dimension d the pulled-back tangent bundle has
rank n^2 - 1 and degree nd - d^2, and all slopes are >= 0 because it is a
quotient of a trivial bundle.  Slope 0 occurs with multiplicity
dim(A_x) - 1, where A_x is a division subalgebra of End(H); that caps the
possible zero multiplicities.  A point is special exactly when slope 0
occurs, and otherwise all slopes are positive, so the point is smooth.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .hn import HNType, dual, h0_dim


@dataclass(frozen=True)
class RZDatum:
    height: int
    dim: int
    isoclinic: bool = True

    def __post_init__(self):
        if self.height < 1:
            raise ValueError("height must be positive")
        if not 0 < self.dim < self.height:
            raise ValueError(f"need 0 < dim < height, got dim={self.dim}, height={self.height}")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.dim, self.height)

    @property
    def dim_D_prime(self) -> int:
        return self.height ** 2


def tangent_rank_degree(datum: RZDatum) -> tuple[int, int]:
    n, d = datum.height, datum.dim
    return n * n - 1, n * d - d * d


def default_slope_max(datum: RZDatum) -> Fraction:
    """1/n for d = 1; there is no known bound for d > 1."""
    if datum.dim != 1:
        raise ValueError("no default slope bound for dim > 1; pass one explicitly")
    return Fraction(1, datum.height)


# ---------------------------------------------------------------- enumeration

def _stable_slopes(rank: int, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Reduced slopes in [lo, hi] with denominator <= rank, descending."""
    out = set()
    for h in range(1, rank + 1):
        for num in range(math.ceil(lo * h), math.floor(hi * h) + 1):
            if math.gcd(num, h) == 1:
                out.add(Fraction(num, h))
    return sorted(out, reverse=True)


def enumerate_profiles(rank: int, degree: int, slope_min, slope_max) -> list[HNType]:
    """Every HN type of the given rank and degree with all slopes in [slope_min, slope_max]."""
    if rank < 1:
        raise ValueError("rank must be at least 1")
    lo, hi = Fraction(slope_min), Fraction(slope_max)
    if lo > hi or not lo * rank <= degree <= hi * rank:
        return []
    slopes = _stable_slopes(rank, lo, hi)
    pairs = [(s.numerator, s.denominator) for s in slopes]
    ln, ld = lo.numerator, lo.denominator
    found: list[HNType] = []

    def walk(k: int, r: int, deg: int, acc: list):
        # acc holds the summands chosen so far; the next slope is slopes[j], j >= k
        if r == 0:
            if deg == 0:
                found.append(HNType.from_sorted(acc))
            return
        if deg * ld < ln * r:
            return
        for j in range(k, len(pairs)):
            num, h = pairs[j]
            if num * r < deg * h:
                break               # slopes only decrease from here
            for m in range(r // h, 0, -1):
                acc.append((slopes[j], m))
                walk(j + 1, r - m * h, deg - m * num, acc)
                acc.pop()

    # slopes descend with j and multiplicities descend with m, so profiles come
    # out already in descending lexicographic order
    walk(0, rank, degree, [])
    return found


# ---------------------------------------------------------------- admissibility

def allowed_zero_multiplicities(n: int) -> set[int]:
    """{0} and m e^2 - 1 for m e | n, m e^2 > 1 (center degree m, index e)."""
    if n < 1:
        raise ValueError("height must be positive")
    out = {0}
    for m in range(1, n + 1):
        for e in range(1, n // m + 1):
            if n % (m * e) == 0 and m * e * e > 1:
                out.add(m * e * e - 1)
    return out


class PointClass(enum.Enum):
    SPECIAL = "SPECIAL"
    NONSPECIAL_SMOOTH = "NONSPECIAL_SMOOTH"


def _check_nonnegative(profile: HNType) -> None:
    if any(s < 0 for s in profile.slopes()):
        raise ValueError(f"{profile!r} has a negative slope; a quotient of a trivial bundle cannot")


def classify_point(profile: HNType) -> PointClass:
    _check_nonnegative(profile)
    return PointClass.SPECIAL if profile.multiplicity(0) else PointClass.NONSPECIAL_SMOOTH


@dataclass(frozen=True)
class TangentProfile:
    hn: HNType
    zero_mult: int
    special: bool
    smooth: bool
    dim_Ax: int

    @classmethod
    def of(cls, hn: HNType) -> "TangentProfile":
        cls_ = classify_point(hn)
        # H^0 of the dual is A_x / Q_p
        dim_ax = h0_dim(dual(hn)) + 1
        return cls(hn, hn.multiplicity(0), cls_ is PointClass.SPECIAL,
                   cls_ is PointClass.NONSPECIAL_SMOOTH, int(dim_ax))

    def to_json(self) -> dict:
        return {"hn": self.hn.to_json(), "label": self.hn.label(), "zero_mult": self.zero_mult,
                "special": self.special, "smooth": self.smooth, "dimAx": self.dim_Ax}


def filter_admissible(profiles: Iterable[HNType], datum: RZDatum) -> list[TangentProfile]:
    rank, degree = tangent_rank_degree(datum)
    allowed = allowed_zero_multiplicities(datum.height)
    out = []
    for p in profiles:
        if p.rank != rank or p.degree != degree:
            raise ValueError(f"{p!r} has rank/degree ({p.rank}, {p.degree}), expected ({rank}, {degree})")
        if p.multiplicity(0) in allowed:
            out.append(TangentProfile.of(p))
    return out


# ---------------------------------------------------------------- full table

@dataclass(frozen=True)
class RZTable:
    datum: RZDatum
    slope_min: Fraction
    slope_max: Fraction
    candidates: tuple[HNType, ...]
    admissible: tuple[TangentProfile, ...]

    def consistency_failures(self) -> list[str]:
        """Internal checks; an empty list means the table is consistent."""
        rank, degree = tangent_rank_degree(self.datum)
        bad = []
        for p in self.candidates:
            if (p.rank, p.degree) != (rank, degree):
                bad.append(f"{p.label()}: wrong rank/degree")
        kept = {tp.hn for tp in self.admissible}
        for p in self.candidates:
            if p.multiplicity(0) == 0 and p not in kept:
                bad.append(f"{p.label()}: non-special profile was filtered")
        for tp in self.admissible:
            if tp.special != (h0_dim(dual(tp.hn)) > 0):
                bad.append(f"{tp.hn.label()}: special flag disagrees with h0 of the dual")
            if tp.special == tp.smooth:
                bad.append(f"{tp.hn.label()}: special and smooth must be exclusive")
        return bad

    def to_json(self) -> dict:
        rank, degree = tangent_rank_degree(self.datum)
        return {
            "height": self.datum.height, "dim": self.datum.dim,
            "rank": rank, "degree": degree,
            "slope_min": str(self.slope_min), "slope_max": str(self.slope_max),
            "candidates": [p.label() for p in self.candidates],
            "profiles": [tp.to_json() for tp in self.admissible],
            "consistent": not self.consistency_failures(),
        }


def rz_table(datum: RZDatum, slope_max=None, slope_min=0) -> RZTable:
    hi = default_slope_max(datum) if slope_max is None else Fraction(slope_max)
    lo = Fraction(slope_min)
    rank, degree = tangent_rank_degree(datum)
    cands = enumerate_profiles(rank, degree, lo, hi)
    return RZTable(datum, lo, hi, tuple(cands), tuple(filter_admissible(cands, datum)))


def profile_from_slopes(slopes: Sequence) -> HNType:
    """HNType with one stable summand per listed slope, e.g. ['1/3', '0']."""
    return HNType.from_slopes(Fraction(s) for s in slopes)
