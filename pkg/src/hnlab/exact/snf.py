"""Smith normal form of matrices over k[t]."""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .fields import Field, field_of
from .ktpoly import KtPoly

PolyMatrix = list[list[KtPoly]]


class SmithForm(NamedTuple):
    U: PolyMatrix
    D: PolyMatrix
    V: PolyMatrix
    V_inv: PolyMatrix
    invariants: list[KtPoly]


def poly_matrix(rows: Sequence[Sequence], field: Field | None = None) -> PolyMatrix:
    """Build a matrix of KtPoly from nested coefficient lists or KtPoly entries."""
    flat = []
    for r in rows:
        for e in r:
            flat.extend(e.coeffs if isinstance(e, KtPoly) else (e if isinstance(e, (list, tuple)) else [e]))
    F = field_of(flat, field)
    out = []
    for r in rows:
        out.append([
            e if isinstance(e, KtPoly) else KtPoly(e if isinstance(e, (list, tuple)) else [e], F)
            for e in r
        ])
    return out


def identity(n: int, field: Field) -> PolyMatrix:
    one, zero = KtPoly.constant(1, field), KtPoly((), field)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a: PolyMatrix, b: PolyMatrix, field: Field, inner: int | None = None) -> PolyMatrix:
    n = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    zero = KtPoly((), field)
    out = []
    for row in a:
        r = []
        for j in range(cols):
            s = zero
            for k in range(n):
                if row[k] and b[k][j]:
                    s = s + row[k] * b[k][j]
            r.append(s)
        out.append(r)
    return out


def _matrix_field(m: Sequence[Sequence[KtPoly]], field: Field | None) -> Field:
    fields = {e.field for r in m for e in r}
    if field is not None:
        fields.add(field)
    if len(fields) > 1:
        raise ValueError("matrix entries from several fields")
    if not fields:
        raise ValueError("cannot infer the field of an empty matrix")
    return fields.pop()


def _weight(e: KtPoly) -> tuple[int, int]:
    """Pivot preference: lowest degree, then smallest coefficients."""
    if e.field.p is not None:
        return (e.degree, 0)
    return (e.degree, sum(c.numerator.bit_length() + c.denominator.bit_length() for c in e.coeffs))


def smith_form(m: Sequence[Sequence[KtPoly]], field: Field | None = None,
               transforms: bool = True) -> SmithForm:
    """U, D, V with U*m*V = D diagonal, d_1 | d_2 | ..., d_i monic.

    U and V are invertible over k[t]; V_inv is tracked alongside V.  With
    ``transforms=False`` only D is computed and U, V, V_inv are empty.
    """
    F = _matrix_field(m, field) if (m and m[0]) or field is None else field
    R = len(m)
    C = len(m[0]) if R else 0
    A = [list(r) for r in m]
    if transforms:
        U, V, Vi = identity(R, F), identity(C, F), identity(C, F)
    else:
        U = [[] for _ in range(R)]
        V = []
        Vi = [[] for _ in range(C)]

    def row_sub(i, k, q):  # row_i -= q*row_k
        A[i] = [x - q * y if y else x for x, y in zip(A[i], A[k])]
        U[i] = [x - q * y if y else x for x, y in zip(U[i], U[k])]

    def row_add(i, k):  # row_i += row_k
        A[i] = [x + y for x, y in zip(A[i], A[k])]
        U[i] = [x + y for x, y in zip(U[i], U[k])]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def col_sub(j, k, q):  # col_j -= q*col_k
        for r in A:
            if r[k]:
                r[j] = r[j] - q * r[k]
        for r in V:
            if r[k]:
                r[j] = r[j] - q * r[k]
        Vi[k] = [x + q * y if y else x for x, y in zip(Vi[k], Vi[j])]

    def col_swap(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]
        Vi[j], Vi[k] = Vi[k], Vi[j]

    t = 0
    while t < min(R, C):
        best = None
        for i in range(t, R):
            for j in range(t, C):
                e = A[i][j]
                if e and (best is None or _weight(e) < best[0]):
                    best = (_weight(e), i, j)
        if best is None:
            break
        _, bi, bj = best
        while True:
            if bi != t:
                row_swap(t, bi)
            if bj != t:
                col_swap(t, bj)
            piv = A[t][t]
            # Euclid along the pivot column and row; any remainder is of
            # lower degree than the pivot and becomes the next pivot.
            best = None
            for i in range(t + 1, R):
                if A[i][t]:
                    q, r = divmod(A[i][t], piv)
                    row_sub(i, t, q)
                    if r and (best is None or _weight(r) < best[0]):
                        best = (_weight(r), i, t)
            for j in range(t + 1, C):
                if A[t][j]:
                    q, r = divmod(A[t][j], piv)
                    col_sub(j, t, q)
                    if r and (best is None or _weight(r) < best[0]):
                        best = (_weight(r), t, j)
            if best is not None:
                _, bi, bj = best
                continue
            bad = next(
                (i for i in range(t + 1, R) for j in range(t + 1, C)
                 if A[i][j] and not piv.divides(A[i][j])),
                None)
            if bad is None:
                break
            row_add(t, bad)
            bi, bj = t, t
        lc = A[t][t].lc
        if lc != F.one:
            inv = F.one / lc
            A[t] = [x * inv for x in A[t]]
            U[t] = [x * inv for x in U[t]]
        t += 1
    invariants = [A[i][i] for i in range(min(R, C)) if A[i][i]]
    return SmithForm(U, A, V, Vi, invariants)


def snf_kt(m: Sequence[Sequence[KtPoly]], field: Field | None = None) -> list[KtPoly]:
    """Monic invariant factors d_1 | d_2 | ... of ``m`` (zeros omitted)."""
    if not m or not m[0]:
        return []
    if len(m[0]) > len(m):
        # same invariants; elimination is cheaper on the tall orientation
        m = [list(c) for c in zip(*m)]
    return smith_form(m, field, transforms=False).invariants
