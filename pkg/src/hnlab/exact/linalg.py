"""Dense exact matrices over a :class:`~hnlab.exact.fields.Field`."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .fields import QQ, Field, field_of


class RrefResult(NamedTuple):
    rank: int
    kernel_basis: list[list]
    image_basis: list[list]


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple
    field: Field = QQ

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field | None = None, cols: int | None = None):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        flat = [x for r in rows for x in r]
        F = field_of(flat, field)
        return cls(len(rows), ncols, tuple(F(x) for x in flat), F)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], field: Field | None = None, rows: int | None = None):
        if not cols:
            return cls.zeros(rows or 0, 0, field or QQ)
        return cls.from_rows([list(r) for r in zip(*cols)], field, cols=len(cols))

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ):
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ):
        z, o = field.zero, field.one
        return cls(n, n, tuple(o if i == j else z for i in range(n) for j in range(n)), field)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows([self.column(j) for j in range(self.cols)], self.field, cols=self.rows)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        if self.field != other.field:
            raise ValueError("field mismatch")
        a, b = self.tolist(), other.tolist()
        zero = self.field.zero
        out = []
        for i in range(self.rows):
            r = [zero] * other.cols
            for k, x in enumerate(a[i]):
                if x:
                    bk = b[k]
                    for j in range(other.cols):
                        if bk[j]:
                            r[j] = r[j] + x * bk[j]
            out.append(r)
        return ExactMatrix.from_rows(out, self.field, cols=other.cols)

    def apply(self, v: Sequence) -> list:
        zero = self.field.zero
        out = []
        for i in range(self.rows):
            s = zero
            for j in range(self.cols):
                x = self.entries[i * self.cols + j]
                if x and v[j]:
                    s = s + x * v[j]
            out.append(s)
        return out

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return ExactMatrix.from_rows(
            [self.row(i) + other.row(i) for i in range(self.rows)],
            self.field, cols=self.cols + other.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rank(self) -> int:
        return rref(self).rank

    def kernel(self) -> list[list]:
        return rref(self).kernel_basis

    def left_kernel(self) -> list[list]:
        """Row vectors y with y @ self == 0."""
        return rref(self.transpose()).kernel_basis

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        a = self.tolist()
        n = self.rows
        d = self.field.one
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return self.field.zero
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d = d * a[c][c]
            inv = self.field.one / a[c][c]
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return d


def _reduce(a: list[list], ncols: int, field: Field):
    """In-place reduced row echelon form; returns pivot columns."""
    one = field.one
    pivots = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = one / a[r][c]
        if inv != one:
            a[r] = [x * inv if x else x for x in a[r]]
        prow = a[r]
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    row = a[i]
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: ExactMatrix) -> RrefResult:
    """Rank, a kernel basis and a column-space basis of ``m``.

    Kernel vectors are the standard ones read off the reduced echelon form
    (a free variable set to 1, the others to 0).  The image basis consists of
    the pivot columns of ``m`` itself.
    """
    field_of(m.entries, m.field)
    a = m.tolist()
    pivots = _reduce(a, m.cols, m.field)
    zero, one = m.field.zero, m.field.one
    pivset = set(pivots)
    kernel = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [zero] * m.cols
        v[free] = one
        for i, pc in enumerate(pivots):
            if a[i][free]:
                v[pc] = -a[i][free]
        kernel.append(v)
    image = [m.column(c) for c in pivots]
    return RrefResult(len(pivots), kernel, image)


def span_rank(vectors: Sequence[Sequence], dim: int, field: Field) -> int:
    if not vectors:
        return 0
    return rref(ExactMatrix.from_rows(vectors, field, cols=dim)).rank


def same_span(u: Sequence[Sequence], v: Sequence[Sequence], dim: int, field: Field) -> bool:
    """Subspace equality by double inclusion, via exact ranks."""
    ru = span_rank(u, dim, field)
    rv = span_rank(v, dim, field)
    ruv = span_rank(list(u) + list(v), dim, field)
    return ru == ruv and rv == ruv
