"""Exact scalar fields: the rationals and prime fields of odd characteristic.

Rationals are plain :class:`fractions.Fraction` values.  Prime-field
elements are :class:`Fp` instances; mixing the two, or two different primes,
raises :class:`FieldMismatch`.
"""

from __future__ import annotations

from fractions import Fraction


class FieldMismatch(TypeError):
    """Raised when values from different fields meet in one computation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Fp:
    """Element of the prime field F_p, stored as its representative in [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldMismatch(f"F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            raise FieldMismatch(f"F_{self.p} vs rationals")
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(v - self.value, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(self.value * v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        if v % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.value * pow(v, -1, self.p), self.p)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Fp(v, self.p) / self

    def __neg__(self):
        return Fp(-self.value, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return Fp(pow(self.value, -1, self.p), self.p) ** (-e)
        return Fp(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """A concrete exact field.  Use :data:`QQ` or :func:`GF`."""

    def __init__(self, p: int | None = None):
        if p is not None:
            if p == 2 or not is_prime(p):
                raise ValueError(f"prime field needs an odd prime, got {p}")
            if p >= 2**31:
                raise ValueError("prime must be below 2**31")
        self.p = p

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def __call__(self, x):
        """Coerce an int, Fraction, string "a/b" or matching element into the field."""
        if self.p is None:
            if isinstance(x, Fp):
                raise FieldMismatch("prime-field element given to the rationals")
            return Fraction(x)
        if isinstance(x, Fp):
            if x.p != self.p:
                raise FieldMismatch(f"F_{x.p} element given to F_{self.p}")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return Fp(x.numerator, self.p) / x.denominator
        return Fp(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        if self.p is None:
            return isinstance(x, (Fraction, int)) and not isinstance(x, bool)
        return isinstance(x, Fp) and x.p == self.p

    def to_json(self, x):
        """int for integral rationals and prime-field values, "a/b" otherwise."""
        if self.p is not None:
            return x.value
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Field()

_gf_cache: dict[int, Field] = {}


def GF(p: int) -> Field:
    if p not in _gf_cache:
        _gf_cache[p] = Field(p)
    return _gf_cache[p]


def field_of(values, default: Field | None = None) -> Field:
    """The common field of ``values``; raises FieldMismatch on mixtures.

    Plain ints are accepted anywhere.  With no typed element present the
    result is ``default`` (or QQ).
    """
    found: Field | None = None
    for v in values:
        if isinstance(v, Fp):
            f = GF(v.p)
        elif isinstance(v, Fraction):
            f = QQ
        elif isinstance(v, int) and not isinstance(v, bool):
            continue
        else:
            raise TypeError(f"not an exact scalar: {v!r}")
        if found is None:
            found = f
        elif found != f:
            raise FieldMismatch(f"mixed fields {found!r} and {f!r}")
    if found is None:
        return default if default is not None else QQ
    if default is not None and default != found:
        raise FieldMismatch(f"expected {default!r}, found {found!r}")
    return found
