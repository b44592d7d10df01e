"""Matrix local model at the point t = 0.

A point of the model is an n x n matrix M over k[t] with det M = t^d * u,
u(0) != 0, whose reduction mod t has rank n - d.  On the chart where the
first n - d columns are independent mod t, row reduction brings M to

    [[I, P],
     [0, t Q]]

with det Q a unit at t = 0.  Row reduction happens in the local ring
k[t]_(t) (polynomials with denominators prime to t), which is where the
pivots are invertible; see :class:`LocalElem`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .exact import QQ, ExactMatrix, Field, KtPoly, field_of, poly_det, poly_gcd, rref
from .exact.snf import PolyMatrix, identity, matmul
from .p1 import FiberSubspace, SplitType, modify
from .rng import SplitMix64, random_scalar


class ChartError(ValueError):
    """No supplied column order puts M in the chart of the block factorization."""


class LocalElem:
    """num/den in k[t]_(t): den(0) != 0, gcd(num, den) = 1, den(0) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: KtPoly, den: KtPoly | None = None):
        F = num.field
        den = KtPoly.constant(1, F) if den is None else den
        if not den.at_zero():
            raise ZeroDivisionError("denominator vanishes at t = 0")
        if not num:
            den = KtPoly.constant(1, F)
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        c = den.at_zero()
        if c != F.one:
            inv = F.one / c
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def of(cls, x, field: Field) -> "LocalElem":
        if isinstance(x, LocalElem):
            return x
        if isinstance(x, KtPoly):
            return cls(x)
        return cls(KtPoly([x], field))

    @property
    def field(self) -> Field:
        return self.num.field

    def __add__(self, o):
        o = LocalElem.of(o, self.field)
        if self.den == o.den:
            return LocalElem(self.num + o.num, self.den)
        return LocalElem(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self):
        return LocalElem(-self.num, self.den)

    def __sub__(self, o):
        return self + (-LocalElem.of(o, self.field))

    def __mul__(self, o):
        o = LocalElem.of(o, self.field)
        return LocalElem(self.num * o.num, self.den * o.den)

    __radd__ = __add__
    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return bool(self.num.at_zero())

    def inverse(self) -> "LocalElem":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self!r} is not a unit of k[t]_(t)")
        return LocalElem(self.den, self.num)

    def at_zero(self):
        return self.num.at_zero()

    def divide_t(self) -> "LocalElem":
        return LocalElem(self.num.shift_down(1), self.den)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, o):
        if isinstance(o, (LocalElem, KtPoly, int)):
            o = LocalElem.of(o, self.field)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"

    def to_json(self):
        if self.is_polynomial():
            return self.num.to_json()
        return {"num": self.num.to_json(), "den": self.den.to_json()}


@dataclass(frozen=True)
class MatrixOverKt:
    n: int
    d: int
    entries: tuple[tuple[KtPoly, ...], ...]
    field: Field = QQ

    def __post_init__(self):
        if not 0 <= self.d <= self.n:
            raise ValueError(f"need 0 <= d <= n, got d={self.d}, n={self.n}")
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError(f"entries must form a {self.n} x {self.n} matrix")

    @classmethod
    def from_coeffs(cls, rows: Sequence[Sequence[Sequence]], d: int, field: Field | None = None) -> "MatrixOverKt":
        flat = [c for r in rows for e in r for c in e]
        F = field_of(flat, field)
        entries = tuple(tuple(KtPoly(e, F) for e in r) for r in rows)
        return cls(len(entries), d, entries, F)

    @classmethod
    def from_json(cls, obj: dict, field: Field | None = None) -> "MatrixOverKt":
        try:
            return cls.from_coeffs(obj["entries"], int(obj["d"]), field)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix: {exc}") from exc

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "entries": [[e.to_json() for e in r] for r in self.entries]}

    def rows(self) -> PolyMatrix:
        return [list(r) for r in self.entries]

    def mod_t(self) -> ExactMatrix:
        return ExactMatrix.from_rows([[e.at_zero() for e in r] for r in self.entries], self.field, cols=self.n)

    def det(self) -> KtPoly:
        return poly_det(self.entries, self.field)

    @property
    def max_degree(self) -> int:
        return max((e.degree for r in self.entries for e in r), default=-1)


@dataclass(frozen=True)
class MembershipReport:
    det_ok: bool
    rank_mod_t: int
    member: bool

    def to_json(self) -> dict:
        return {"det_ok": self.det_ok, "rank_mod_t": self.rank_mod_t, "member": self.member}


def check_point_of_Y(M: MatrixOverKt) -> MembershipReport:
    det = M.det()
    det_ok = bool(det) and det.order() == M.d
    rank0 = rref(M.mod_t()).rank if M.n else 0
    return MembershipReport(det_ok, rank0, det_ok and rank0 == M.n - M.d)


# ---------------------------------------------------------------- factorization

# ("swap", i, j) | ("scale", i, u) | ("add", i, j, c): row_i += c * row_j
RowOp = tuple


@dataclass(frozen=True)
class BlockFactorization:
    row_ops: tuple[RowOp, ...]
    P: tuple[tuple[LocalElem, ...], ...]
    Q: tuple[tuple[LocalElem, ...], ...]
    perm: tuple[int, ...]
    n: int
    d: int
    field: Field

    def block_form(self) -> list[list[LocalElem]]:
        n, r, F = self.n, self.n - self.d, self.field
        zero, one = LocalElem.of(0, F), LocalElem.of(1, F)
        t = LocalElem(KtPoly.monomial(1, F))
        out = [[zero] * n for _ in range(n)]
        for i in range(r):
            out[i][i] = one
            for j in range(self.d):
                out[i][r + j] = self.P[i][j]
        for i in range(self.d):
            for j in range(self.d):
                out[r + i][r + j] = t * self.Q[i][j]
        return out

    def ops_determinant(self) -> LocalElem:
        """det of the product of the row operations."""
        acc = LocalElem.of(1, self.field)
        for op in self.row_ops:
            if op[0] == "swap":
                acc = -acc
            elif op[0] == "scale":
                acc = acc * op[2]
        return acc

    def det_Q(self) -> LocalElem:
        return _local_det([list(r) for r in self.Q], self.field)

    def to_json(self) -> dict:
        ops = []
        for op in self.row_ops:
            if op[0] == "swap":
                ops.append({"op": "swap", "rows": [op[1], op[2]]})
            elif op[0] == "scale":
                ops.append({"op": "scale", "row": op[1], "by": op[2].to_json()})
            else:
                ops.append({"op": "add", "row": op[1], "from": op[2], "by": op[3].to_json()})
        return {"row_ops": ops, "perm": list(self.perm),
                "P": [[e.to_json() for e in r] for r in self.P],
                "Q": [[e.to_json() for e in r] for r in self.Q]}


def _local_det(m: list[list[LocalElem]], field: Field) -> LocalElem:
    n = len(m)
    if n == 0:
        return LocalElem.of(1, field)
    if n == 1:
        return m[0][0]
    acc = LocalElem.of(0, field)
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in m[1:]]
        term = m[0][j] * _local_det(minor, field)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _apply(op: RowOp, A: list[list[LocalElem]]) -> None:
    if op[0] == "swap":
        A[op[1]], A[op[2]] = A[op[2]], A[op[1]]
    elif op[0] == "scale":
        A[op[1]] = [op[2] * x for x in A[op[1]]]
    else:
        _, i, j, c = op
        A[i] = [x + c * y for x, y in zip(A[i], A[j])]


def _undo(op: RowOp, A: list[list[LocalElem]]) -> None:
    if op[0] == "swap":
        _apply(op, A)
    elif op[0] == "scale":
        _apply(("scale", op[1], op[2].inverse()), A)
    else:
        _apply(("add", op[1], op[2], -op[3]), A)


def in_chart(M: MatrixOverKt, perm: Sequence[int]) -> bool:
    r = M.n - M.d
    cols = [[M.entries[i][perm[j]].at_zero() for j in range(r)] for i in range(M.n)]
    return r == 0 or rref(ExactMatrix.from_rows(cols, M.field, cols=r)).rank == r


def chart_permutation(M: MatrixOverKt) -> tuple[int, ...] | None:
    """A column order whose first n - d columns are independent mod t."""
    r = M.n - M.d
    res = rref(M.mod_t())
    if res.rank < r:
        return None
    # the pivot columns of the reduced echelon form are independent
    pivots = _pivot_columns(M.mod_t())[:r]
    rest = [j for j in range(M.n) if j not in pivots]
    return tuple(pivots) + tuple(rest)


def _pivot_columns(m: ExactMatrix) -> list[int]:
    piv, rank = [], 0
    for j in range(m.cols):
        cols = [m.column(c) for c in piv + [j]]
        if rref(ExactMatrix.from_columns(cols, m.field, rows=m.rows)).rank > rank:
            piv.append(j)
            rank += 1
    return piv


def factor(M: MatrixOverKt, perms: Iterable[Sequence[int]] | None = None) -> BlockFactorization:
    """Row-reduce M (columns reordered by the first chart-valid perm) to block form."""
    if not check_point_of_Y(M).member:
        raise ValueError("matrix is not a point of the local model")
    n, d, F = M.n, M.d, M.field
    candidates = [tuple(range(n))] if perms is None else [tuple(p) for p in perms]
    for p in candidates:
        if sorted(p) != list(range(n)):
            raise ValueError(f"{list(p)} is not a permutation of 0..{n - 1}")
    perm = next((p for p in candidates if in_chart(M, p)), None)
    if perm is None:
        raise ChartError("the first n-d columns are dependent mod t for every supplied column order")
    r = n - d
    A = [[LocalElem(M.entries[i][perm[j]]) for j in range(n)] for i in range(n)]
    ops: list[RowOp] = []

    def do(op):
        ops.append(op)
        _apply(op, A)

    for c in range(r):
        piv = next(i for i in range(c, n) if A[i][c].is_unit())
        if piv != c:
            do(("swap", c, piv))
        if A[c][c] != 1:
            do(("scale", c, A[c][c].inverse()))
        for i in range(n):
            if i != c and A[i][c]:
                do(("add", i, c, -A[i][c]))
    P = tuple(tuple(A[i][r + j] for j in range(d)) for i in range(r))
    Q = tuple(tuple(A[r + i][r + j].divide_t() for j in range(d)) for i in range(d))
    fact = BlockFactorization(tuple(ops), P, Q, perm, n, d, F)
    if not fact.det_Q().is_unit():
        raise AssertionError("det Q is not a unit at t = 0")
    return fact


def reconstruct(fact: BlockFactorization) -> MatrixOverKt:
    """Undo the row operations and the column order; entries must come back polynomial."""
    A = fact.block_form()
    for op in reversed(fact.row_ops):
        _undo(op, A)
    n = fact.n
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            e = A[i][j]
            if not e.is_polynomial():
                raise AssertionError(f"entry ({i}, {fact.perm[j]}) is not a polynomial: {e!r}")
            c = e.den.at_zero()
            out[i][fact.perm[j]] = e.num * (fact.field.one / c)
    return MatrixOverKt(n, fact.d, tuple(tuple(r) for r in out), fact.field)


def determinant_identity(M: MatrixOverKt, fact: BlockFactorization) -> bool:
    """det(ops) * sign(perm) * det M == t^d det Q, exactly in k[t]_(t)."""
    F = M.field
    sign = _perm_sign(fact.perm)
    lhs = fact.ops_determinant() * LocalElem(M.det()) * sign
    rhs = LocalElem(KtPoly.monomial(M.d, F)) * fact.det_Q()
    return lhs == rhs


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------- modification

@dataclass(frozen=True)
class ModificationReport:
    E: SplitType
    E_prime: SplitType
    degree_drop: int
    normal_rank: int
    balanced: bool

    def to_json(self) -> dict:
        return {"E": self.E.to_json(), "E_prime": self.E_prime.to_json(), "degree_drop": self.degree_drop,
                "normal_rank": self.normal_rank, "balanced": self.balanced}


def modification_degree_check(E: Sequence[int], K: FiberSubspace) -> ModificationReport:
    """deg E - deg E' against dim(E_fiber / K), the rank of the normal term."""
    E = SplitType(E)
    Ep = modify(E, K)
    drop = E.degree - Ep.degree
    return ModificationReport(E, Ep, drop, K.codim, drop == K.codim)


# ---------------------------------------------------------------- random members

def _random_invertible(rng: SplitMix64, n: int, field: Field, steps: int, bound: int) -> PolyMatrix:
    """Nonzero scalar diagonal times elementary matrices with degree-1 multipliers."""
    M = identity(n, field)
    for i in range(n):
        c = random_scalar(rng, field, bound)
        while not c:
            c = random_scalar(rng, field, bound)
        M[i][i] = KtPoly([c], field)
    for _ in range(steps if n > 1 else 0):
        i = rng.below(n)
        j = rng.below(n - 1)
        j = j + 1 if j >= i else j
        q = KtPoly([random_scalar(rng, field, bound), random_scalar(rng, field, bound)], field)
        M[i] = [x + q * y for x, y in zip(M[i], M[j])]
    return M


def random_member(rng: SplitMix64, field: Field, max_n: int = 4, max_deg: int = 3,
                  bound: int = 2) -> MatrixOverKt:
    """L * diag(1.., t..) * R with L, R invertible over k[t]; columns shuffled.

    Retries until every entry has degree <= max_deg.
    """
    while True:
        n = rng.randint(1, max_n)
        d = rng.randint(0, n)
        D = identity(n, field)
        for i in range(n - d, n):
            D[i][i] = KtPoly.monomial(1, field)
        L = _random_invertible(rng, n, field, steps=2, bound=bound)
        R = _random_invertible(rng, n, field, steps=1, bound=bound)
        M = matmul(matmul(L, D, field), R, field)
        order = list(range(n))
        for i in range(n - 1, 0, -1):
            j = rng.below(i + 1)
            order[i], order[j] = order[j], order[i]
        rows = tuple(tuple(r[order[j]] for j in range(n)) for r in M)
        out = MatrixOverKt(n, d, rows, field)
        if out.max_degree <= max_deg:
            return out


@dataclass(frozen=True)
class RoundTripSummary:
    trials: int
    roundtrip: int
    det_Q_unit: int
    det_identity: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return self.roundtrip == self.det_Q_unit == self.det_identity == self.trials

    def to_json(self) -> dict:
        return {"trials": self.trials, "roundtrip": self.roundtrip, "det_Q_unit": self.det_Q_unit,
                "det_identity": self.det_identity, "ok": self.ok, "failures": list(self.failures)}


def roundtrip_trials(trials: int, seed: int, field: Field, max_n: int = 4, max_deg: int = 3) -> RoundTripSummary:
    rng = SplitMix64(seed)
    rt = unit = det_ok = 0
    fails = []
    for k in range(trials):
        M = random_member(rng, field, max_n, max_deg)
        fact = factor(M, [chart_permutation(M)])
        a = reconstruct(fact) == M
        b = fact.det_Q().is_unit()
        c = determinant_identity(M, fact)
        rt, unit, det_ok = rt + a, unit + b, det_ok + c
        if not (a and b and c):
            fails.append({"trial": k, "matrix": M.to_json()})
    return RoundTripSummary(trials, rt, unit, det_ok, tuple(fails))
