"""Homology of the tensor product of two free resolutions over k[t].

Given short exact sequences 0 -> K -i-> A -> B -> 0 and
0 -> K' -i'-> A' -> B' -> 0 of finitely generated k[t]-modules with K, A,
K', A' free, the complex

    K(x)K' --(i(x)1, 1(x)i')--> (A(x)K') + (K(x)A') --(1(x)i' - i(x)1)--> A(x)A'

has H_2 = 0, H_1 = Tor_1(B, B') and H_0 = B (x) B'.  Everything here is
computed from Smith forms, so module isomorphism classes are compared as
invariant-factor lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exact import Field, KtPoly, poly_gcd, snf_kt
from .exact.snf import PolyMatrix, identity, matmul
from .rng import SplitMix64, random_scalar


@dataclass(frozen=True)
class KtModule:
    """k[t]^free_rank + sum k[t]/(d_i) with monic, nonconstant d_1 | d_2 | ..."""

    free_rank: int
    torsion: tuple[KtPoly, ...] = ()

    def __post_init__(self):
        for d in self.torsion:
            if d.is_zero() or d.degree < 1 or d.lc != d.field.one:
                raise ValueError(f"invariant factor {d!r} must be monic and nonconstant")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if not a.divides(b):
                raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def from_cyclics(cls, free_rank: int, orders: Sequence[KtPoly]) -> "KtModule":
        """Normalise a sum of cyclic modules k[t]/(f) into invariant factors."""
        orders = [f for f in orders if not f.is_unit()]
        if not orders:
            return cls(free_rank, ())
        F = orders[0].field
        n = len(orders)
        zero = KtPoly((), F)
        diag = [[orders[i] if i == j else zero for j in range(n)] for i in range(n)]
        invs = [d for d in snf_kt(diag, F) if not d.is_unit()]
        return cls(free_rank, tuple(invs))

    @property
    def torsion_length(self) -> int:
        """dim_k of the torsion submodule."""
        return sum(d.degree for d in self.torsion)

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __repr__(self):
        parts = []
        if self.free_rank:
            parts.append(f"k[t]^{self.free_rank}")
        parts += [f"k[t]/({d!r})" for d in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": [d.to_json() for d in self.torsion]}


def cokernel(m: PolyMatrix, nrows: int, field: Field) -> KtModule:
    """k[t]^nrows / (column span of m)."""
    if not m or not m[0]:
        return KtModule(nrows)
    invs = snf_kt(m, field)
    return KtModule(nrows - len(invs), tuple(d for d in invs if not d.is_unit()))


def tensor_modules(m1: KtModule, m2: KtModule) -> KtModule:
    free = m1.free_rank * m2.free_rank
    cyc = []
    cyc += [d for d in m1.torsion for _ in range(m2.free_rank)]
    cyc += [e for e in m2.torsion for _ in range(m1.free_rank)]
    cyc += [poly_gcd(d, e) for d in m1.torsion for e in m2.torsion]
    return KtModule.from_cyclics(free, cyc)


def tor1(m1: KtModule, m2: KtModule) -> KtModule:
    return KtModule.from_cyclics(0, [poly_gcd(d, e) for d in m1.torsion for e in m2.torsion])


@dataclass(frozen=True)
class PresentedSES:
    """0 -> K -> A -> B -> 0 with i: K -> A given as an (rank A) x (rank K) matrix."""

    i: tuple[tuple[KtPoly, ...], ...]
    rank_A: int
    rank_K: int
    field: Field

    @classmethod
    def of(cls, i: Sequence[Sequence[KtPoly]], field: Field, rank_A: int | None = None) -> "PresentedSES":
        rows = tuple(tuple(r) for r in i)
        rank_A = len(rows) if rank_A is None else rank_A
        rank_K = len(rows[0]) if rows else 0
        ses = cls(rows, rank_A, rank_K, field)
        if len(snf_kt([list(r) for r in rows], field)) != rank_K:
            raise ValueError("i is not injective (not of full column rank)")
        return ses

    def matrix(self) -> PolyMatrix:
        return [list(r) for r in self.i]

    @property
    def B(self) -> KtModule:
        return cokernel(self.matrix(), self.rank_A, self.field)


def kron(a: PolyMatrix, b: PolyMatrix, a_shape, b_shape) -> PolyMatrix:
    (ra, ca), (rb, cb) = a_shape, b_shape
    out = []
    for i in range(ra):
        for k in range(rb):
            out.append([a[i][j] * b[k][l] for j in range(ca) for l in range(cb)])
    return out


@dataclass(frozen=True)
class HomologyReport:
    H2_zero: bool
    H1: KtModule
    H0: KtModule
    tor: KtModule
    tensor: KtModule

    @property
    def H1_matches_tor(self) -> bool:
        return self.H1 == self.tor

    @property
    def H0_matches_tensor(self) -> bool:
        return self.H0 == self.tensor

    @property
    def passed(self) -> bool:
        return self.H2_zero and self.H1_matches_tor and self.H0_matches_tensor

    def to_json(self) -> dict:
        return {"H2_zero": self.H2_zero, "H1_matches_tor": self.H1_matches_tor,
                "H0_matches_tensor": self.H0_matches_tensor,
                "H1": self.H1.to_json(), "H0": self.H0.to_json()}


def tensor_complex(s1: PresentedSES, s2: PresentedSES):
    """Boundary matrices (d2, d1) and module ranks (c2, c1, c0)."""
    F = s1.field
    i, ip = s1.matrix(), s2.matrix()
    a, k, ap, kp = s1.rank_A, s1.rank_K, s2.rank_A, s2.rank_K
    IA, IK, IAp, IKp = identity(a, F), identity(k, F), identity(ap, F), identity(kp, F)
    # K(x)K' -> A(x)K' is i(x)1 ; K(x)K' -> K(x)A' is 1(x)i'
    top = kron(i, IKp, (a, k), (kp, kp))
    bottom = kron(IK, ip, (k, k), (ap, kp))
    d2 = top + bottom
    # A(x)K' -> A(x)A' is 1(x)i' ; K(x)A' -> A(x)A' is -(i(x)1)
    left = kron(IA, ip, (a, a), (ap, kp))
    right = kron(i, IAp, (a, k), (ap, ap))
    d1 = [l_row + [-x for x in r_row] for l_row, r_row in zip(left, right)]
    return d2, d1, (k * kp, a * kp + k * ap, a * ap)


def complex_homology(d2: PolyMatrix, d1: PolyMatrix, ranks, field: Field):
    """(H2, H1, H0) of C2 -d2-> C1 -d1-> C0 for free modules C_i, with d1 d2 = 0.

    ker d1 is a direct summand of C1 (the quotient embeds in C0, so it is
    free), hence coker d2 = H1 + k[t]^rank(d1).  H1 is therefore read off the
    invariant factors of d2 alone.
    """
    c2, c1, c0 = ranks
    inv2 = snf_kt(d2, field) if c1 and c2 else []
    inv1 = snf_kt(d1, field) if c0 and c1 else []
    H2 = KtModule(c2 - len(inv2))
    H1 = KtModule(c1 - len(inv2) - len(inv1), tuple(d for d in inv2 if not d.is_unit()))
    H0 = KtModule(c0 - len(inv1), tuple(d for d in inv1 if not d.is_unit()))
    return H2, H1, H0


def complex_homology_check(s1: PresentedSES, s2: PresentedSES) -> HomologyReport:
    if s1.field != s2.field:
        raise ValueError("sequences over different fields")
    d2, d1, ranks = tensor_complex(s1, s2)
    for row in matmul(d1, d2, s1.field, inner=ranks[1]):
        if any(row):
            raise AssertionError("d1 o d2 != 0")
    H2, H1, H0 = complex_homology(d2, d1, ranks, s1.field)
    B, Bp = s1.B, s2.B
    return HomologyReport(H2.is_zero(), H1, H0, tor1(B, Bp), tensor_modules(B, Bp))


# ---------------------------------------------------------------- random instances

def random_unimodular(rng: SplitMix64, n: int, field: Field, steps: int = 4, deg: int = 1) -> PolyMatrix:
    """Product of random elementary matrices over k[t]."""
    M = identity(n, field)
    if n < 2:
        if n == 1:
            c = random_scalar(rng, field)
            while not c:
                c = random_scalar(rng, field)
            M[0][0] = KtPoly([c], field)
        return M
    for _ in range(steps):
        i = rng.below(n)
        j = rng.below(n - 1)
        j = j + 1 if j >= i else j
        q = KtPoly([random_scalar(rng, field) for _ in range(deg + 1)], field)
        M[i] = [x + q * y for x, y in zip(M[i], M[j])]
    return M


def random_factor(rng: SplitMix64, field: Field, max_deg: int, t_power_only: bool = False) -> KtPoly:
    k = rng.randint(0, max_deg)
    if t_power_only:
        return KtPoly.monomial(k, field)
    while True:
        cs = [random_scalar(rng, field) for _ in range(k)] + [field.one]
        return KtPoly(cs, field)


def random_ses(rng: SplitMix64, field: Field, max_size: int = 3, max_deg: int = 4,
               t_power_only: bool = False) -> PresentedSES:
    """Random injective i = U D V with D a (possibly tall) diagonal of chained factors."""
    k = rng.randint(1, max_size)
    a = rng.randint(k, max_size)
    facs = []
    prev = KtPoly.constant(1, field)
    for _ in range(k):
        budget = max_deg - prev.degree
        f = random_factor(rng, field, max(0, budget), t_power_only) if budget > 0 else KtPoly.constant(1, field)
        prev = prev * f
        facs.append(prev)
    zero = KtPoly((), field)
    D = [[facs[c] if r == c else zero for c in range(k)] for r in range(a)]
    U = random_unimodular(rng, a, field)
    V = random_unimodular(rng, k, field)
    i = matmul(matmul(U, D, field), V, field)
    return PresentedSES.of(i, field, a)


@dataclass(frozen=True)
class TorSummary:
    trials: int
    passed: int
    symmetric: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return self.passed == self.trials and self.symmetric == self.trials

    def to_json(self) -> dict:
        return {"trials": self.trials, "passed": self.passed, "symmetric": self.symmetric,
                "ok": self.ok, "failures": list(self.failures)}


def tor_trials(trials: int, seed: int, field: Field, max_size: int = 3, max_deg: int = 4,
               check_symmetry: bool = True) -> TorSummary:
    """complex_homology_check on random pairs; every other trial uses t-power torsion."""
    rng = SplitMix64(seed)
    passed = sym = 0
    fails = []
    for k in range(trials):
        s1 = random_ses(rng, field, max_size, max_deg, t_power_only=(k % 2 == 0))
        s2 = random_ses(rng, field, max_size, max_deg, t_power_only=(k % 2 == 0))
        rep = complex_homology_check(s1, s2)
        passed += rep.passed
        if check_symmetry:
            rev = complex_homology_check(s2, s1)
            same = (rev.H2_zero, rev.H1, rev.H0) == (rep.H2_zero, rep.H1, rep.H0)
        else:
            same = True
        sym += same
        if not (rep.passed and same):
            fails.append({"trial": k, **rep.to_json(), "symmetric": same})
    return TorSummary(trials, passed, sym, tuple(fails))
