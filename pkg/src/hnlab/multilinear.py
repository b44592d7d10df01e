"""Exact checks of two multilinear identities.

* The derivative of the minor map sigma -> wedge^{r+1}(sigma) at a rank-r
  map f has kernel K = {sigma : q o sigma o (ker f -> V') = 0}, where q is the
  projection onto coker f.  Its dimension is n^2 - (n-r)^2.
* sum_i s_1 ^ ... ^ (alpha s_i) ^ ... ^ s_n = tr(alpha) s_1 ^ ... ^ s_n.

Wedge bases are indexed by index subsets in lexicographic order.  Hom spaces
are flattened row-major: sigma = E_ab (row a, column b) has index a*n + b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .exact import ExactMatrix, Field, rref, same_span
from .rng import SplitMix64, random_scalar


def _subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), k))


def _det(rows: list[list], field: Field):
    if not rows:
        return field.one
    return ExactMatrix.from_rows(rows, field).det()


def minor_derivative(f: ExactMatrix, r: int) -> ExactMatrix:
    """Matrix of D_f(wedge^{r+1}) : Hom(V', V) -> Hom(wedge^{r+1} V', wedge^{r+1} V).

    Row (J, I) holds the coefficient of e_J in D(sigma)(e_I), flattened as
    J_index * C(n, r+1) + I_index.  Column a*n+b is sigma = E_ab, whose
    contribution is the (a, b) cofactor of the minor f[J, I].
    """
    n = f.rows
    if f.cols != n:
        raise ValueError("minor_derivative expects a square matrix")
    if rref(f).rank != r:
        raise ValueError(f"f has rank {rref(f).rank}, not {r}")
    F = f.field
    subs = _subsets(n, r + 1)
    C = len(subs)
    a = f.tolist()
    rows = [[F.zero] * (n * n) for _ in range(C * C)]
    for ji, J in enumerate(subs):
        for ii, I in enumerate(subs):
            out = rows[ji * C + ii]
            for pa, ra in enumerate(J):
                for pb, cb in enumerate(I):
                    minor = [[a[x][y] for y in I if y != cb] for x in J if x != ra]
                    c = _det(minor, F)
                    if c:
                        out[ra * n + cb] = c if (pa + pb) % 2 == 0 else -c
    return ExactMatrix.from_rows(rows, F, cols=n * n)


@dataclass(frozen=True)
class RankedMap:
    f: ExactMatrix
    r: int
    kernel_basis: list        # columns spanning W' = ker f
    q: ExactMatrix            # (n-r) x n, rows span the left kernel of f

    @classmethod
    def of(cls, f: ExactMatrix) -> "RankedMap":
        res = rref(f)
        q_rows = f.left_kernel()
        q = ExactMatrix.from_rows(q_rows, f.field, cols=f.rows)
        return cls(f, res.rank, res.kernel_basis, q)


def restriction_map(q: ExactMatrix, w_basis: Sequence[Sequence], n: int) -> ExactMatrix:
    """Matrix of sigma -> q . sigma . W' on row-major Hom(V', V)."""
    F = q.field
    k = len(w_basis)
    rows = []
    for i in range(q.rows):
        for l in range(k):
            rows.append([q[i, a] * w_basis[l][b] for a in range(n) for b in range(n)])
    return ExactMatrix.from_rows(rows, F, cols=n * n)


@dataclass(frozen=True)
class LemmaReport:
    holds: bool
    dim_kernel: int
    dim_K: int
    expected_dim: int

    def to_json(self) -> dict:
        return {"holds": self.holds, "dim_kernel": self.dim_kernel, "dim_K": self.dim_K,
                "expected_dim": self.expected_dim}


def subspace_K(f: ExactMatrix, q: ExactMatrix | None = None, w_basis=None) -> list[list]:
    rm = RankedMap.of(f)
    q = rm.q if q is None else q
    w_basis = rm.kernel_basis if w_basis is None else w_basis
    n = f.rows
    if q.rows == 0 or not w_basis:
        F = f.field
        return [[F.one if i == j else F.zero for j in range(n * n)] for i in range(n * n)]
    return rref(restriction_map(q, w_basis, n)).kernel_basis


def lemma_kernel_check(f: ExactMatrix, r: int) -> LemmaReport:
    n = f.rows
    ker_d = rref(minor_derivative(f, r)).kernel_basis
    K = subspace_K(f)
    holds = same_span(ker_d, K, n * n, f.field)
    expected = n * n - (n - r) ** 2
    holds = holds and len(ker_d) == expected and len(K) == expected
    return LemmaReport(holds, len(ker_d), len(K), expected)


def random_rank_matrix(rng: SplitMix64, n: int, r: int, field: Field, bound: int = 3) -> ExactMatrix:
    """Random n x n matrix of exact rank r, as a product (n x r)(r x n)."""
    while True:
        A = ExactMatrix.from_rows([[random_scalar(rng, field, bound) for _ in range(r)] for _ in range(n)],
                                  field, cols=r)
        B = ExactMatrix.from_rows([[random_scalar(rng, field, bound) for _ in range(n)] for _ in range(r)],
                                  field, cols=n)
        f = A @ B
        if rref(f).rank == r:
            return f


# ---------------------------------------------------------------- trace identity

def wedge_coordinates(vectors: Sequence[Sequence], field: Field) -> list:
    """Coordinates of v_1 ^ ... ^ v_k in the lex basis of wedge^k of the ambient space."""
    k = len(vectors)
    N = len(vectors[0]) if vectors else 0
    return [_det([[vectors[j][i] for j in range(k)] for i in rows], field)
            for rows in _subsets(N, k)]


@dataclass(frozen=True)
class TraceWedgeReport:
    lhs: list
    rhs: list
    equal: bool


def trace_wedge_check(alpha: ExactMatrix, s: Sequence[Sequence]) -> TraceWedgeReport:
    """Compare sum_i s_1^..^(alpha s_i)^..^s_n with tr(alpha) s_1^..^s_n."""
    N = alpha.rows
    if alpha.cols != N:
        raise ValueError("alpha must be square")
    if any(len(v) != N for v in s):
        raise ValueError(f"vectors must have length {N}")
    F = alpha.field
    s = [[F(c) for c in v] for v in s]
    n = len(s)
    lhs = [F.zero] * comb(N, n)
    for i in range(n):
        vecs = list(s)
        vecs[i] = alpha.apply(s[i])
        lhs = [x + y for x, y in zip(lhs, wedge_coordinates(vecs, F))]
    tr = sum((alpha[i, i] for i in range(N)), F.zero)
    rhs = [tr * c for c in wedge_coordinates(s, F)]
    return TraceWedgeReport(lhs, rhs, lhs == rhs)


# ---------------------------------------------------------------- batch runs

@dataclass(frozen=True)
class TrialSummary:
    trials: int
    passed: int
    dims: tuple                 # sorted ((n, r, dim), count) for the kernel lemma
    failures: tuple

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def to_json(self) -> dict:
        return {"trials": self.trials, "passed": self.passed, "ok": self.ok,
                "dims": [{"n": n, "r": r, "dim": d, "count": c} for (n, r, d), c in self.dims],
                "failures": list(self.failures)}


def minor_trials(trials: int, seed: int, field: Field, n: int | None = None, r: int | None = None,
                 max_n: int = 5) -> TrialSummary:
    """Run lemma_kernel_check on random rank-r matrices; n, r random unless fixed."""
    rng = SplitMix64(seed)
    passed, fails, dims = 0, [], {}
    for k in range(trials):
        nn = n if n is not None else rng.randint(1, max_n)
        rr = r if r is not None else rng.randint(0, nn - 1)
        f = random_rank_matrix(rng, nn, rr, field)
        rep = lemma_kernel_check(f, rr)
        key = (nn, rr, rep.dim_kernel)
        dims[key] = dims.get(key, 0) + 1
        if rep.holds:
            passed += 1
        else:
            fails.append({"trial": k, "n": nn, "r": rr, **rep.to_json()})
    return TrialSummary(trials, passed, tuple(sorted(dims.items())), tuple(fails))


def trace_trials(trials: int, seed: int, field: Field, max_n: int = 5) -> TrialSummary:
    rng = SplitMix64(seed)
    passed, fails, dims = 0, [], {}
    for k in range(trials):
        n = rng.randint(1, max_n)
        alpha = ExactMatrix.from_rows([[random_scalar(rng, field) for _ in range(n)] for _ in range(n)],
                                      field, cols=n)
        s = [[random_scalar(rng, field) for _ in range(n)] for _ in range(n)]
        rep = trace_wedge_check(alpha, s)
        dims[(n, n, 1)] = dims.get((n, n, 1), 0) + 1
        if rep.equal:
            passed += 1
        else:
            fails.append({"trial": k, "n": n})
    return TrialSummary(trials, passed, tuple(sorted(dims.items())), tuple(fails))
