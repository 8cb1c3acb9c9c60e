"""Truncated arithmetic in Z_p and Q_p with certified valuations.

A nonzero value is stored as ``p**valuation * unit`` where ``unit`` is an
integer prime to ``p`` known modulo ``p**precision``.  The valuation is
therefore always exact; only the unit carries truncation.  A value whose
representable digits all cancel becomes :class:`ZeroAtPrecision`, which
remembers the lower bound on its valuation instead of pretending to be 0.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DivisionByZero, PrimeMismatch

INF = math.inf


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


def int_valuation(k: int, p: int) -> int:
    """Exponent of the largest power of ``p`` dividing the nonzero integer ``k``."""
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


class LowerBound(int):
    """An integer that is only a lower bound for a valuation (not certified)."""

    certified = False

    def __repr__(self):
        return f"LowerBound({int(self)})"


class PAdicScalar:
    """Element of Q_p known to a fixed number of significant digits.

    ``valuation`` is ``math.inf`` only for an exact zero, whose unit is 0.
    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("prime", "valuation", "unit", "precision")

    def __init__(self, prime: int, valuation, unit: int, precision: int):
        if precision < 1:
            raise ValueError("precision must be at least 1")
        if valuation == INF:
            if unit != 0:
                raise ValueError("an exact zero has unit 0")
        else:
            if unit % prime == 0:
                raise ValueError("unit must be prime to p")
            unit %= prime**precision
        self.prime = prime
        self.valuation = valuation
        self.unit = unit
        self.precision = precision

    @classmethod
    def _raw(cls, prime, valuation, unit, precision):
        obj = object.__new__(cls)
        obj.prime = prime
        obj.valuation = valuation
        obj.unit = unit
        obj.precision = precision
        return obj

    @classmethod
    def zero(cls, prime: int, precision: int = 1) -> "PAdicScalar":
        return cls._raw(prime, INF, 0, precision)

    @property
    def digits(self) -> tuple[int, ...]:
        """Little-endian base-p digits of the unit (empty for exact zero)."""
        if self.valuation == INF:
            return ()
        p, u = self.prime, self.unit
        out = []
        for _ in range(self.precision):
            u, d = divmod(u, p)
            out.append(d)
        return tuple(out)

    @property
    def absprec(self):
        """Power of p modulo which the value is known."""
        return self.valuation + self.precision

    def is_zero(self) -> bool:
        return self.valuation == INF

    def is_integral(self) -> bool:
        return self.valuation >= 0

    def residue(self, cap: int) -> int:
        """The value modulo ``p**cap`` as an integer in [0, p**cap).

        Requires a p-adic integer known to at least ``cap`` digits.
        """
        if self.valuation == INF or self.valuation >= cap:
            return 0
        if self.valuation < 0:
            raise ValueError("not a p-adic integer")
        if self.absprec < cap:
            raise ValueError(f"value only known modulo p^{self.absprec}")
        p = self.prime
        return (self.unit * p**self.valuation) % p**cap

    def to_fraction(self) -> Fraction:
        """The stored representative ``p**v * unit`` as a rational."""
        if self.valuation == INF:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    def __eq__(self, other):
        if not isinstance(other, PAdicScalar):
            return NotImplemented
        return (self.prime, self.valuation, self.unit, self.precision) == (
            other.prime, other.valuation, other.unit, other.precision)

    def __hash__(self):
        return hash((self.prime, self.valuation, self.unit, self.precision))

    def __repr__(self):
        v = "inf" if self.valuation == INF else self.valuation
        return f"PAdicScalar(p={self.prime}, val={v}, unit={self.unit}, prec={self.precision})"

    def __add__(self, other):
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(other, self)))

    def __rsub__(self, other):
        return add(_coerce(other, self), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other, self))

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __truediv__(self, other):
        return mul(self, inv(_coerce(other, self)))

    def to_json(self) -> dict:
        return scalar_to_json(self)


class ZeroAtPrecision:
    """A value indistinguishable from 0: all we know is ``val >= certified_min_valuation``."""

    __slots__ = ("prime", "certified_min_valuation")

    def __init__(self, prime: int, certified_min_valuation: int):
        self.prime = prime
        self.certified_min_valuation = certified_min_valuation

    @property
    def absprec(self):
        return self.certified_min_valuation

    def is_zero(self) -> bool:
        # never an *exact* zero
        return False

    def __eq__(self, other):
        if not isinstance(other, ZeroAtPrecision):
            return NotImplemented
        return (self.prime, self.certified_min_valuation) == (
            other.prime, other.certified_min_valuation)

    def __hash__(self):
        return hash(("zap", self.prime, self.certified_min_valuation))

    def __repr__(self):
        return f"ZeroAtPrecision(p={self.prime}, certified_min_valuation={self.certified_min_valuation})"

    def __add__(self, other):
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_coerce(other, self)))

    def __rsub__(self, other):
        return add(_coerce(other, self), self)

    def __mul__(self, other):
        return mul(self, _coerce(other, self))

    __rmul__ = __mul__

    def __neg__(self):
        return self

    def __truediv__(self, other):
        return mul(self, inv(_coerce(other, self)))

    def to_json(self) -> dict:
        return scalar_to_json(self)


def _coerce(x, like):
    if isinstance(x, (PAdicScalar, ZeroAtPrecision)):
        return x
    prec = like.precision if isinstance(like, PAdicScalar) else max(like.certified_min_valuation, 1)
    if isinstance(x, int):
        return from_integer(x, like.prime, prec)
    if isinstance(x, Fraction):
        return from_rational(x, like.prime, prec)
    return NotImplemented


def from_integer(k: int, p: int, n: int) -> PAdicScalar:
    """Canonical representation of the integer ``k`` with ``n`` significant digits."""
    if n < 1:
        raise ValueError("precision must be at least 1")
    if k == 0:
        return PAdicScalar._raw(p, INF, 0, n)
    v = int_valuation(k, p)
    return PAdicScalar._raw(p, v, (k // p**v) % p**n, n)


def from_rational(x: Fraction, p: int, n: int) -> PAdicScalar:
    x = Fraction(x)
    if x == 0:
        return PAdicScalar._raw(p, INF, 0, n)
    num, den = x.numerator, x.denominator
    vn = int_valuation(num, p)
    vd = int_valuation(den, p)
    mod = p**n
    unit = (num // p**vn) * pow(den // p**vd, -1, mod) % mod
    return PAdicScalar._raw(p, vn - vd, unit, n)


def _truncate(x: PAdicScalar, cap):
    """``x`` known only modulo ``p**cap``."""
    p = x.prime
    v = x.valuation
    if v >= cap:
        return ZeroAtPrecision(p, cap)
    if x.absprec <= cap:
        return x
    n = cap - v
    return PAdicScalar._raw(p, v, x.unit % p**n, n)


def add(a, b):
    """Sum of two scalars, tracking the absolute precision of the result."""
    p = a.prime
    if b.prime != p:
        raise PrimeMismatch(f"p={p} vs p={b.prime}")
    if a.__class__ is ZeroAtPrecision:
        if b.__class__ is ZeroAtPrecision:
            return ZeroAtPrecision(p, min(a.certified_min_valuation, b.certified_min_valuation))
        return _truncate(b, a.certified_min_valuation)
    if b.__class__ is ZeroAtPrecision:
        return _truncate(a, b.certified_min_valuation)
    va, vb = a.valuation, b.valuation
    if va == INF:
        return b
    if vb == INF:
        return a
    cap = min(va + a.precision, vb + b.precision)
    if va <= vb:
        v = va
        shift = vb - va
        r = a.unit + b.unit * p**shift if shift < cap - v else a.unit
    else:
        v = vb
        shift = va - vb
        r = b.unit + a.unit * p**shift if shift < cap - v else b.unit
    n = cap - v
    r %= p**n
    if r == 0:
        return ZeroAtPrecision(p, cap)
    if r % p:
        return PAdicScalar._raw(p, v, r, n)
    k = int_valuation(r, p)
    return PAdicScalar._raw(p, v + k, r // p**k, n - k)


def sub(a, b):
    return add(a, neg(b))


def neg(a):
    if a.__class__ is ZeroAtPrecision or a.valuation == INF:
        return a
    return PAdicScalar._raw(a.prime, a.valuation, (-a.unit) % a.prime**a.precision, a.precision)


def mul(a, b):
    """Product; valuations add and units multiply modulo the smaller precision."""
    p = a.prime
    if b.prime != p:
        raise PrimeMismatch(f"p={p} vs p={b.prime}")
    za = a.__class__ is ZeroAtPrecision
    zb = b.__class__ is ZeroAtPrecision
    if za or zb:
        if za and zb:
            return ZeroAtPrecision(p, a.certified_min_valuation + b.certified_min_valuation)
        z, x = (a, b) if za else (b, a)
        if x.valuation == INF:
            return x
        return ZeroAtPrecision(p, z.certified_min_valuation + x.valuation)
    if a.valuation == INF:
        return a
    if b.valuation == INF:
        return b
    n = a.precision if a.precision <= b.precision else b.precision
    return PAdicScalar._raw(p, a.valuation + b.valuation, a.unit * b.unit % p**n, n)


def inv(a) -> PAdicScalar:
    if a.__class__ is ZeroAtPrecision or a.valuation == INF:
        raise DivisionByZero(f"cannot invert {a!r}")
    mod = a.prime**a.precision
    return PAdicScalar._raw(a.prime, -a.valuation, pow(a.unit, -1, mod), a.precision)


def div(a, b):
    return mul(a, inv(b))


def valuation_of(a):
    """Certified valuation, or a :class:`LowerBound` for ZeroAtPrecision."""
    if a.__class__ is ZeroAtPrecision:
        return LowerBound(a.certified_min_valuation)
    return a.valuation


def scalar_to_json(a) -> dict:
    if isinstance(a, ZeroAtPrecision):
        return {"p": a.prime, "zero_at": a.certified_min_valuation}
    val = "inf" if a.valuation == INF else a.valuation
    return {"p": a.prime, "val": val, "digits": list(a.digits), "prec": a.precision}


def scalar_from_json(d: dict):
    p = int(d["p"])
    if "zero_at" in d:
        return ZeroAtPrecision(p, int(d["zero_at"]))
    prec = int(d["prec"])
    if d["val"] == "inf":
        if d.get("digits"):
            raise ValueError("exact zero must have no digits")
        return PAdicScalar.zero(p, prec)
    digits = d["digits"]
    if len(digits) != prec or any(not 0 <= x < p for x in digits):
        raise ValueError("digits must be prec base-p digits")
    if digits[0] == 0:
        raise ValueError("leading digit of a unit must be nonzero")
    unit = 0
    for x in reversed(digits):
        unit = unit * p + x
    return PAdicScalar(p, int(d["val"]), unit, prec)
