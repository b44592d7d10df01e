"""Binary forms in (x, y) and homogeneous polynomials in n variables.

A binary form of degree D is stored as ``coeffs[i]`` = coefficient of
``x**(D-i) * y**i``.  The zero form has ``degree is None`` and no
coefficients; it is compatible with any degree slot in a graded map.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .fields import QQ, Field, field_of
from .ktpoly import KtPoly, poly_gcd


class BinaryForm:
    __slots__ = ("degree", "coeffs", "field")

    def __init__(self, coeffs: Sequence, field: Field | None = None, degree: int | None = None):
        F = field_of(coeffs, field)
        cs = tuple(F(c) for c in coeffs)
        if degree is not None and len(cs) != degree + 1:
            raise ValueError(f"degree {degree} form needs {degree + 1} coefficients")
        if not any(cs):
            self.degree = None
            self.coeffs = ()
        else:
            self.degree = len(cs) - 1
            self.coeffs = cs
        self.field = F

    @classmethod
    def zero(cls, field: Field = QQ) -> "BinaryForm":
        return cls((), field)

    @classmethod
    def monomial(cls, a: int, b: int, field: Field = QQ, c=1) -> "BinaryForm":
        """c * x**a * y**b"""
        cs = [0] * (a + b + 1)
        cs[b] = c
        return cls(cs, field)

    def is_zero(self) -> bool:
        return self.degree is None

    def __bool__(self):
        return self.degree is not None

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self):
        return hash((self.coeffs, self.field))

    def __repr__(self):
        if self.is_zero():
            return "0"
        D = self.degree
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            parts = []
            if D - i:
                parts.append("x" if D - i == 1 else f"x^{D - i}")
            if i:
                parts.append("y" if i == 1 else f"y^{i}")
            mono = "*".join(parts)
            terms.append(mono if (mono and c == 1) else (f"{c}*{mono}" if mono else str(c)))
        return " + ".join(terms)

    def _check(self, other: "BinaryForm"):
        if self.field != other.field:
            raise ValueError("forms over different fields")

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("adding forms of different degrees")
        return BinaryForm([a + b for a, b in zip(self.coeffs, other.coeffs)], self.field)

    def __neg__(self):
        return BinaryForm([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BinaryForm":
        return BinaryForm([c * a for a in self.coeffs], self.field)

    def __mul__(self, other):
        if not isinstance(other, BinaryForm):
            return self.scale(other)
        return multiply(self, other)

    def evaluate(self, x0, y0):
        return evaluate(self, (x0, y0))

    def dehomogenize(self) -> KtPoly:
        """f(t, 1) as a polynomial in t (lowest power first)."""
        return KtPoly(list(reversed(self.coeffs)), self.field)

    def y_order(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def to_json(self) -> list:
        return [self.field.to_json(c) for c in self.coeffs]


def multiply(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    a._check(b)
    if a.is_zero() or b.is_zero():
        return BinaryForm.zero(a.field)
    out = [a.field.zero] * (a.degree + b.degree + 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                if y:
                    out[i + j] = out[i + j] + x * y
    return BinaryForm(out, a.field)


def evaluate(a: BinaryForm, point) -> object:
    x0, y0 = point
    F = a.field
    x0, y0 = F(x0), F(y0)
    if a.is_zero():
        return F.zero
    D = a.degree
    return sum((c * x0 ** (D - i) * y0 ** i for i, c in enumerate(a.coeffs) if c), F.zero)


def _rehomogenize(p: KtPoly, degree: int) -> BinaryForm:
    cs = [p.field.zero] * (degree + 1)
    for k, c in enumerate(p.coeffs):
        cs[degree - k] = c
    return BinaryForm(cs, p.field)


def form_gcd(a: BinaryForm, b: BinaryForm) -> BinaryForm:
    """Greatest common divisor, normalised so the first nonzero coefficient is 1.

    For forms not divisible by y this means monic in x.  The y-power is split
    off first and the remaining parts go through Euclid on f(t, 1).
    """
    a._check(b)
    if a.is_zero() and b.is_zero():
        return BinaryForm.zero(a.field)
    if a.is_zero():
        a, b = b, a
    if b.is_zero():
        k = a.y_order()
        g = a.dehomogenize()
        return multiply(BinaryForm.monomial(0, k, a.field), _rehomogenize(g.monic(), g.degree))
    k = min(a.y_order(), b.y_order())
    g = poly_gcd(a.dehomogenize(), b.dehomogenize())
    return multiply(BinaryForm.monomial(0, k, a.field), _rehomogenize(g, g.degree))


class HomPoly:
    """Polynomial in variables x_1..x_n as a map exponent-tuple -> coefficient."""

    __slots__ = ("nvars", "terms", "field")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | Sequence, field: Field | None = None):
        items = list(terms.items()) if isinstance(terms, Mapping) else [(tuple(e), c) for e, c in terms]
        F = field_of([c for _, c in items], field)
        acc: dict[tuple, object] = {}
        for e, c in items:
            e = tuple(int(k) for k in e)
            if len(e) != nvars or any(k < 0 for k in e):
                raise ValueError(f"bad exponent vector {e}")
            acc[e] = acc.get(e, F.zero) + F(c)
        self.terms = {e: c for e, c in sorted(acc.items()) if c}
        self.nvars = nvars
        self.field = F

    @classmethod
    def fermat(cls, nvars: int, degree: int, field: Field = QQ) -> "HomPoly":
        """x_1**degree + ... + x_n**degree"""
        return cls(nvars, {tuple(degree if j == i else 0 for j in range(nvars)): 1 for i in range(nvars)}, field)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError("inhomogeneous polynomial has no single degree")
        return ds.pop()

    def __eq__(self, other):
        if not isinstance(other, HomPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __mul__(self, other: "HomPoly") -> "HomPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        acc: dict[tuple, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, self.field.zero) + c1 * c2
        return HomPoly(self.nvars, acc, self.field)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"nvars": self.nvars,
                "terms": [[list(e), self.field.to_json(c)] for e, c in self.terms.items()]}


def partial(P: HomPoly, i: int) -> HomPoly:
    """d P / d x_i with 1-based variable index ``i``."""
    if not 1 <= i <= P.nvars:
        raise ValueError(f"variable index {i} out of range")
    k = i - 1
    out = {}
    for e, c in P.terms.items():
        if e[k]:
            f = list(e)
            f[k] -= 1
            out[tuple(f)] = c * e[k]
    return HomPoly(P.nvars, out, P.field)


def substitute(Q: HomPoly, g: Sequence[BinaryForm]) -> BinaryForm:
    """Q(g_1, ..., g_n) for binary forms g_i of one common degree d.

    The result is homogeneous of degree d * deg(Q) (or zero).
    """
    if len(g) != Q.nvars:
        raise ValueError(f"need {Q.nvars} forms, got {len(g)}")
    if not Q.is_homogeneous():
        raise ValueError("substitute needs a homogeneous polynomial")
    F = Q.field
    for gi in g:
        if gi.field != F:
            raise ValueError("form and polynomial over different fields")
    degs = {gi.degree for gi in g if not gi.is_zero()}
    if len(degs) > 1:
        raise ValueError(f"forms of unequal degree {sorted(degs)}")
    if Q.is_zero():
        return BinaryForm.zero(F)
    result = BinaryForm.zero(F)
    powers: dict[tuple[int, int], BinaryForm] = {}

    def power(i: int, k: int) -> BinaryForm:
        if (i, k) not in powers:
            f = BinaryForm([1], F)
            for _ in range(k):
                f = multiply(f, g[i])
            powers[(i, k)] = f
        return powers[(i, k)]

    for e, c in Q.terms.items():
        term = BinaryForm([c], F)
        for i, k in enumerate(e):
            if k:
                term = multiply(term, power(i, k))
        result = result + term
    return result
