"""Univariate polynomials k[t] over an exact field."""

from __future__ import annotations

from typing import Sequence

from .fields import QQ, Field, field_of


class KtPoly:
    """Polynomial in ``t``; ``coeffs[i]`` is the coefficient of ``t**i``.

    Immutable.  Trailing zeros are trimmed, so the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence = (), field: Field | None = None):
        F = field_of(coeffs, field)
        cs = [F(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.field = F

    @classmethod
    def _raw(cls, coeffs: list, field: Field) -> "KtPoly":
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        obj.field = field
        return obj

    @classmethod
    def constant(cls, c, field: Field = QQ) -> "KtPoly":
        return cls([c], field)

    @classmethod
    def monomial(cls, k: int, field: Field = QQ, c=1) -> "KtPoly":
        return cls([0] * k + [c], field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def at_zero(self):
        return self.coeffs[0] if self.coeffs else self.field.zero

    def order(self) -> int:
        """t-adic valuation; -1 for the zero polynomial."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def _lift(self, other) -> "KtPoly":
        if isinstance(other, KtPoly):
            if other.field != self.field:
                raise ValueError(f"field mismatch {self.field!r} vs {other.field!r}")
            return other
        return KtPoly([other], self.field)

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return KtPoly._raw(out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return KtPoly._raw([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return KtPoly._raw([], self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return KtPoly._raw(out, self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = KtPoly._raw([self.field.one], self.field)
        for _ in range(e):
            out = out * self
        return out

    def __divmod__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs) + 1
        quo = [self.field.zero] * max(dq, 0)
        inv = self.field.one / o.lc
        db = o.degree
        for k in range(dq - 1, -1, -1):
            c = rem[k + db] * inv
            quo[k] = c
            if c:
                for j, y in enumerate(o.coeffs):
                    rem[k + j] = rem[k + j] - c * y
        return KtPoly._raw(quo, self.field), KtPoly._raw(rem[:db] if db >= 0 else [], self.field)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "KtPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def monic(self) -> "KtPoly":
        if self.is_zero():
            return self
        inv = self.field.one / self.lc
        return KtPoly._raw([c * inv for c in self.coeffs], self.field)

    def shift_down(self, k: int = 1) -> "KtPoly":
        """Divide by t**k; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError("polynomial not divisible by t^%d" % k)
        return KtPoly._raw(list(self.coeffs[k:]), self.field)

    def derivative(self) -> "KtPoly":
        return KtPoly._raw([c * i for i, c in enumerate(self.coeffs)][1:], self.field)

    def __eq__(self, other):
        if isinstance(other, KtPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == KtPoly([other], self.field)
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.field))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(reversed(terms))

    def to_json(self) -> list:
        return [self.field.to_json(c) for c in self.coeffs]


def poly_gcd(a: KtPoly, b: KtPoly) -> KtPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: KtPoly, b: KtPoly):
    """(g, s, u) with s*a + u*b = g, g monic (or zero)."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = KtPoly.constant(1, F), KtPoly._raw([], F)
    u0, u1 = KtPoly._raw([], F), KtPoly.constant(1, F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0.is_zero():
        return r0, s0, u0
    inv = F.one / r0.lc
    return r0 * inv, s0 * inv, u0 * inv


def poly_det(m: Sequence[Sequence[KtPoly]], field: Field) -> KtPoly:
    """Determinant by cofactor-free fraction elimination over k(t) (Bareiss)."""
    n = len(m)
    if n == 0:
        return KtPoly.constant(1, field)
    a = [list(r) for r in m]
    sign = 1
    prev = KtPoly.constant(1, field)
    for k in range(n - 1):
        if a[k][k].is_zero():
            sw = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if sw is None:
                return KtPoly._raw([], field)
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d
