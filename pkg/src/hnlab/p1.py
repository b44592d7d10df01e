"""Split vector bundles on P^1: cohomology, kernels, elementary modifications.

Bundles are direct sums of line bundles O(c).  A map between two split
bundles is a matrix of binary forms; sections of O(k) are degree-k forms, so
every question below reduces to exact linear algebra on coefficient vectors,
one twist at a time.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from .exact import QQ, BinaryForm, ExactMatrix, Field, HomPoly, form_gcd, multiply, partial, substitute
from .exact.linalg import rref
from .rng import SplitMix64, random_scalar


class SplitType(tuple):
    """Multiset of twists {c_1, ..., c_r}, sorted descending."""

    def __new__(cls, twists: Sequence[int] = ()):
        return super().__new__(cls, sorted((int(c) for c in twists), reverse=True))

    @property
    def rank(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)

    def twist(self, m: int) -> "SplitType":
        return SplitType(c + m for c in self)

    def __repr__(self):
        return "{" + ",".join(str(c) for c in self) + "}"

    def to_json(self) -> list[int]:
        return list(self)


def h0_twist(s: Sequence[int], m: int = 0) -> int:
    return sum(max(0, c + m + 1) for c in s)


def h1_twist(s: Sequence[int], m: int = 0) -> int:
    return sum(max(0, -c - m - 1) for c in s)


@dataclass(frozen=True)
class GradedMap:
    """phi: sum O(a_i) -> sum O(b_j); ``entries[j][i]`` has degree b_j - a_i.

    ``source`` and ``target`` keep the caller's order because the matrix
    columns and rows refer to it.
    """

    source: tuple[int, ...]
    target: tuple[int, ...]
    entries: tuple[tuple[BinaryForm, ...], ...]
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(int(a) for a in self.source))
        object.__setattr__(self, "target", tuple(int(b) for b in self.target))
        object.__setattr__(self, "entries", tuple(tuple(r) for r in self.entries))
        if len(self.entries) != len(self.target):
            raise ValueError("one row of entries per target summand")
        for j, row in enumerate(self.entries):
            if len(row) != len(self.source):
                raise ValueError("one entry per source summand in every row")
            for i, e in enumerate(row):
                if e.field != self.field:
                    raise ValueError("entry over a different field")
                if not e.is_zero() and e.degree != self.target[j] - self.source[i]:
                    raise ValueError(
                        f"entry ({j},{i}) has degree {e.degree}, expected {self.target[j] - self.source[i]}")

    @classmethod
    def from_coeffs(cls, source, target, coeffs, field: Field = QQ) -> "GradedMap":
        entries = [[BinaryForm(c, field) for c in row] for row in coeffs]
        return cls(tuple(source), tuple(target), tuple(tuple(r) for r in entries), field)

    @classmethod
    def identity(cls, twists: Sequence[int], field: Field = QQ) -> "GradedMap":
        n = len(twists)
        one, zero = BinaryForm([1], field), BinaryForm.zero(field)
        return cls(tuple(twists), tuple(twists),
                   tuple(tuple(one if i == j else zero for i in range(n)) for j in range(n)), field)

    def to_json(self) -> dict:
        return {"source": list(self.source), "target": list(self.target),
                "entries": [[e.to_json() for e in row] for row in self.entries]}

    @classmethod
    def from_json(cls, obj: dict, field: Field) -> "GradedMap":
        try:
            return cls.from_coeffs(obj["source"], obj["target"], obj["entries"], field)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed graded map: {exc}") from exc


@dataclass(frozen=True)
class FiberSubspace:
    """Subspace K of the fiber of sum O(a_i) at the point (x0 : y0).

    The fiber coordinate of a section (s_i) is (s_i(x0, y0))_i, evaluated at
    the given representative of the point; for (1 : 0) this is the x^k
    coefficient, i.e. the trivialisation by powers of x.  ``basis`` lists
    the spanning vectors of K.
    """

    point: tuple
    basis: tuple[tuple, ...]
    dim: int
    field: Field = QQ

    def __post_init__(self):
        F = self.field
        x0, y0 = (F(c) for c in self.point)
        if not x0 and not y0:
            raise ValueError("(0 : 0) is not a point of P^1")
        object.__setattr__(self, "point", (x0, y0))
        vecs = tuple(tuple(F(c) for c in v) for v in self.basis)
        if any(len(v) != self.dim for v in vecs):
            raise ValueError("basis vectors must have the fiber dimension")
        if vecs and rref(ExactMatrix.from_rows(vecs, F)).rank != len(vecs):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "basis", vecs)

    @property
    def codim(self) -> int:
        return self.dim - len(self.basis)

    def annihilator(self) -> list[list]:
        """Rows spanning the linear forms that vanish on K."""
        if not self.basis:
            F = self.field
            return [[F.one if i == j else F.zero for j in range(self.dim)] for i in range(self.dim)]
        return ExactMatrix.from_columns(self.basis, self.field).left_kernel()


# ---------------------------------------------------------------- graded pieces

def graded_piece(phi: GradedMap, m: int) -> ExactMatrix:
    """Matrix of H^0(phi(m)): sum H^0(O(a_i+m)) -> sum H^0(O(b_j+m))."""
    F = phi.field
    col_off, ncols = [], 0
    for a in phi.source:
        col_off.append(ncols)
        ncols += max(0, a + m + 1)
    row_off, nrows = [], 0
    for b in phi.target:
        row_off.append(nrows)
        nrows += max(0, b + m + 1)
    rows = [[F.zero] * ncols for _ in range(nrows)]
    for j, b in enumerate(phi.target):
        for i, a in enumerate(phi.source):
            e = phi.entries[j][i]
            if e.is_zero() or a + m < 0:
                continue
            for k in range(a + m + 1):
                for l, c in enumerate(e.coeffs):
                    if c:
                        rows[row_off[j] + k + l][col_off[i] + k] = c
    return ExactMatrix.from_rows(rows, F, cols=ncols)


def graded_kernel_dim(phi: GradedMap, m: int) -> int:
    """h^0(ker(phi)(m)), by left exactness of global sections."""
    piece = graded_piece(phi, m)
    return piece.cols - rref(piece).rank if piece.rows else piece.cols


def _split_type_from_h0(h0: Callable[[int], int], rank: int, m0: int, cap: int) -> SplitType:
    """Recover twists from h^0(E(m)) given h^0(E(m0)) == 0.

    The first difference h^0(E(m)) - h^0(E(m-1)) counts twists c >= -m.
    """
    if rank == 0:
        return SplitType()
    twists: list[int] = []
    prev_h0 = 0
    prev_delta = 0
    m = m0
    while prev_delta < rank:
        m += 1
        if m - m0 > cap:
            raise RuntimeError(
                f"twist scan exceeded cap {cap} (reached m={m}, {prev_delta} of {rank} twists found)")
        cur = h0(m)
        delta = cur - prev_h0
        twists.extend([-m] * (delta - prev_delta))
        prev_h0, prev_delta = cur, delta
    if prev_delta != rank:
        raise RuntimeError(f"twist scan overshot: found {prev_delta} twists for rank {rank}")
    return SplitType(twists)


def _scan_cap(phi_size: int) -> int:
    return 10 * max(1, phi_size)


# ---------------------------------------------------------------- minors

def form_det(m: Sequence[Sequence[BinaryForm]], field: Field) -> BinaryForm:
    n = len(m)
    if n == 0:
        return BinaryForm([1], field)
    if n == 1:
        return m[0][0]
    total = BinaryForm.zero(field)
    for c in range(n):
        e = m[0][c]
        if e.is_zero():
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = multiply(e, form_det(minor, field))
        total = total + (term if c % 2 == 0 else -term)
    return total


def generic_rank(phi: GradedMap) -> int:
    rows, cols = len(phi.target), len(phi.source)
    for r in range(min(rows, cols), 0, -1):
        for rs in itertools.combinations(range(rows), r):
            for cs in itertools.combinations(range(cols), r):
                sub = [[phi.entries[j][i] for i in cs] for j in rs]
                if not form_det(sub, phi.field).is_zero():
                    return r
    return 0


def maximal_minors_gcd(phi: GradedMap) -> BinaryForm:
    rows, cols = len(phi.target), len(phi.source)
    g = BinaryForm.zero(phi.field)
    for cs in itertools.combinations(range(cols), rows):
        sub = [[phi.entries[j][i] for i in cs] for j in range(rows)]
        g = form_gcd(g, form_det(sub, phi.field))
        if g.degree == 0:
            break
    return g


def is_fiberwise_surjective(phi: GradedMap) -> bool:
    """No common projective zero of the maximal minors."""
    rows = len(phi.target)
    if rows == 0:
        return True
    if rows > len(phi.source) or generic_rank(phi) < rows:
        return False
    return maximal_minors_gcd(phi).degree == 0


def kernel_split_type(phi: GradedMap) -> SplitType:
    """Splitting type of ker(phi), scanned twist by twist from h^0 = 0."""
    r = len(phi.source) - generic_rank(phi)
    if r == 0:
        return SplitType()
    m0 = -max(phi.source) - 1
    size = sum(len(e.coeffs) for row in phi.entries for e in row)
    size += sum(abs(a) for a in phi.source) + sum(abs(b) for b in phi.target) + len(phi.source)
    return _split_type_from_h0(lambda m: graded_kernel_dim(phi, m), r, m0, _scan_cap(size))


# ---------------------------------------------------------------- modifications

def _evaluation_rows(twists: Sequence[int], m: int, point, field: Field) -> tuple[list[list], int]:
    """Fiber evaluation on sum H^0(O(a_i+m)); one row per summand."""
    x0, y0 = point
    ncols = sum(max(0, a + m + 1) for a in twists)
    rows = []
    off = 0
    for a in twists:
        row = [field.zero] * ncols
        k = a + m
        for j in range(k + 1):
            row[off + j] = x0 ** (k - j) * y0 ** j
        rows.append(row)
        off += max(0, k + 1)
    return rows, ncols


def modified_h0(E: Sequence[int], K: FiberSubspace, m: int) -> int:
    """dim { s in H^0(E(m)) : s(point) in K }."""
    F = K.field
    ev, ncols = _evaluation_rows(E, m, K.point, F)
    if ncols == 0:
        return 0
    ann = K.annihilator()
    cond = []
    for a in ann:
        row = [F.zero] * ncols
        for i, ai in enumerate(a):
            if ai:
                row = [x + ai * y for x, y in zip(row, ev[i])]
        cond.append(row)
    if not cond:
        return ncols
    return ncols - rref(ExactMatrix.from_rows(cond, F, cols=ncols)).rank


def modify(E: Sequence[int], K: FiberSubspace) -> SplitType:
    """Splitting type of E' = {sections of E whose value at the point lies in K}.

    E is read in its sorted (descending) order; that order defines the
    standard basis of the fiber.
    """
    E = SplitType(E)
    if K.dim != E.rank:
        raise ValueError(f"fiber subspace lives in dimension {K.dim}, bundle has rank {E.rank}")
    if E.rank == 0:
        return SplitType()
    m0 = -max(E) - 1
    cap = _scan_cap(sum(abs(c) for c in E) + E.rank)
    out = _split_type_from_h0(lambda m: modified_h0(E, K, m), E.rank, m0, cap)
    if out.degree != E.degree - K.codim:
        raise AssertionError(f"modification degree {out.degree} != {E.degree} - {K.codim}")
    return out


# ---------------------------------------------------------------- Jacobian example

@dataclass(frozen=True)
class JacobianReport:
    DgP: GradedMap
    hom_dim: int
    surjective: bool
    kernel: SplitType
    h0_kernel: int
    generic: bool

    def to_json(self) -> dict:
        return {"DgP": self.DgP.to_json(), "hom_dim": self.hom_dim, "surjective": self.surjective,
                "kernel": self.kernel.to_json(), "kernel_rank": self.kernel.rank,
                "kernel_degree": self.kernel.degree, "h0_kernel": self.h0_kernel,
                "generic": self.generic}


def derivative_map(P: HomPoly, g: Sequence[BinaryForm], d: int | None = None) -> GradedMap:
    """D_gP : O(d)^n -> O(d*delta), entries dP/dx_i evaluated at g."""
    if not P.is_homogeneous() or P.is_zero():
        raise ValueError("P must be a nonzero homogeneous polynomial")
    if len(g) != P.nvars:
        raise ValueError(f"P has {P.nvars} variables but {len(g)} forms were given")
    degs = {gi.degree for gi in g if not gi.is_zero()}
    if len(degs) > 1:
        raise ValueError(f"the forms g_i have unequal degrees {sorted(degs)}")
    if d is None:
        if not degs:
            raise ValueError("cannot infer d from all-zero forms")
        d = degs.pop()
    elif degs and degs != {d}:
        raise ValueError(f"forms have degree {degs.pop()}, expected {d}")
    delta = P.degree
    row = tuple(substitute(partial(P, i + 1), g) for i in range(P.nvars))
    return GradedMap((d,) * P.nvars, (d * delta,), (row,), P.field)


def jacobian_analysis(P: HomPoly, g: Sequence[BinaryForm], d: int | None = None) -> JacobianReport:
    phi = derivative_map(P, g, d)
    d = phi.source[0]
    hom_dim = P.nvars * max(0, phi.target[0] - d + 1)
    kernel = kernel_split_type(phi)
    return JacobianReport(
        DgP=phi,
        hom_dim=hom_dim,
        surjective=is_fiberwise_surjective(phi),
        kernel=kernel,
        h0_kernel=h0_twist(kernel, 0),
        generic=h1_twist(kernel, 0) == 0,
    )


@dataclass
class ExperimentResult:
    table: list[tuple[SplitType, int]]
    trials: int
    accepted: int
    rejected: int
    reports: list[JacobianReport] = dc_field(default_factory=list, repr=False)

    def count(self, twists: Sequence[int]) -> int:
        return dict(self.table).get(SplitType(twists), 0)

    def to_json(self) -> dict:
        return {"table": [{"kernel": k.to_json(), "count": c} for k, c in self.table],
                "trials": self.trials, "accepted": self.accepted, "rejected": self.rejected}


def random_form(rng: SplitMix64, degree: int, field: Field, bound: int = 3) -> BinaryForm:
    return BinaryForm([random_scalar(rng, field, bound) for _ in range(degree + 1)], field)


def sample_experiment(n: int, d: int, delta: int, field: Field, trials: int, seed: int = 0,
                      P: HomPoly | None = None, bound: int = 3,
                      keep_reports: bool = False, redraw: bool = False) -> ExperimentResult:
    """Tabulate kernel splitting types of D_gP over random g.

    g has uniformly random coefficients (in F_p, or integers in
    [-bound, bound] over Q).  P defaults to the Fermat form sum x_i^delta.
    Samples whose D_gP is not fiberwise surjective are skipped; with
    ``redraw`` they are replaced by fresh draws until ``trials`` samples are
    accepted (giving up after 100 * trials draws).
    """
    if P is None:
        P = HomPoly.fermat(n, delta, field)
    rng = SplitMix64(seed)
    counts: Counter = Counter()
    reports = []
    accepted = rejected = 0
    draws = 0
    limit = 100 * trials if redraw else trials
    while draws < limit and not (redraw and accepted == trials):
        draws += 1
        g = [random_form(rng, d, field, bound) for _ in range(n)]
        if all(gi.is_zero() for gi in g):
            rejected += 1
            continue
        rep = jacobian_analysis(P, g, d)
        if not rep.surjective:
            rejected += 1
            continue
        accepted += 1
        counts[rep.kernel] += 1
        if keep_reports:
            reports.append(rep)
    table = sorted(counts.items())
    return ExperimentResult(table, draws, accepted, rejected, reports)
