"""Exact scalar rings: rationals and truncated hbar-polynomial extensions.

Every linear computation in this package happens over one of two rings:
arbitrary-precision rationals (fractions.Fraction) or the ring of
polynomials in a formal parameter hbar truncated at a fixed degree K.
Truncated series multiply by dropping all terms of degree > K; a series is
a unit exactly when its constant coefficient is nonzero.  Values from
different rings never mix silently: matrix-level operations compare ring
tags and raise RingMismatch instead of coercing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class RingMismatch(TypeError):
    """Operands live in different scalar rings."""


def as_fraction(x) -> Fraction:
    """Coerce int / str ("p/q") / Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class HSeries:
    """c0 + c1*hbar + ... + cK*hbar^K with exact rational coefficients.

    Immutable; coeffs always has length order + 1.
    """

    order: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient count must be order + 1")

    @classmethod
    def from_rational(cls, x, order):
        c = [Fraction(0)] * (order + 1)
        c[0] = as_fraction(x)
        return cls(order, tuple(c))

    @classmethod
    def from_coeffs(cls, coeffs, order):
        c = [as_fraction(x) for x in coeffs]
        if len(c) > order + 1:
            raise ValueError("too many coefficients for declared order")
        c += [Fraction(0)] * (order + 1 - len(c))
        return cls(order, tuple(c))

    @classmethod
    def hbar(cls, order):
        if order < 1:
            raise ValueError("hbar needs order >= 1")
        c = [Fraction(0)] * (order + 1)
        c[1] = Fraction(1)
        return cls(order, tuple(c))

    def _check(self, other):
        if not isinstance(other, HSeries) or other.order != self.order:
            raise RingMismatch("truncated series of different orders")

    def __add__(self, other):
        self._check(other)
        return HSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return HSeries(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return HSeries(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = as_fraction(other)
            return HSeries(self.order, tuple(a * f for a in self.coeffs))
        self._check(other)
        n = self.order + 1
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * n
        for i in range(n):
            ai = a[i]
            if not ai:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return HSeries(self.order, tuple(out))

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def is_unit(self):
        return self.coeffs[0] != 0

    def constant_term(self) -> Fraction:
        return self.coeffs[0]

    def inverse(self):
        """Multiplicative inverse in the truncated ring; needs a unit."""
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("constant term vanishes; no inverse in the truncated ring")
        n = self.order + 1
        inv0 = 1 / a[0]
        out = [Fraction(0)] * n
        out[0] = inv0
        for k in range(1, n):
            acc = Fraction(0)
            for i in range(1, k + 1):
                if a[i]:
                    acc += a[i] * out[k - i]
            out[k] = -acc * inv0
        return HSeries(self.order, tuple(out))

    def __repr__(self):
        return "HSeries(%s)" % ", ".join(str(c) for c in self.coeffs)


@dataclass(frozen=True)
class Ring:
    """Tag describing which scalar ring a matrix lives over."""

    kind: str  # "rational" | "hseries"
    order: int = 0

    def zero(self):
        if self.kind == "rational":
            return Fraction(0)
        return HSeries.from_rational(0, self.order)

    def one(self):
        if self.kind == "rational":
            return Fraction(1)
        return HSeries.from_rational(1, self.order)

    def coerce(self, x):
        """Build a ring element from JSON-ish input.

        Rational: int / "p/q" / Fraction.  Series: additionally a list of
        coefficient strings, degree-ascending.
        """
        if self.kind == "rational":
            if isinstance(x, HSeries):
                raise RingMismatch("series value in a rational context")
            return as_fraction(x)
        if isinstance(x, HSeries):
            if x.order != self.order:
                raise RingMismatch("series order mismatch")
            return x
        if isinstance(x, (list, tuple)):
            return HSeries.from_coeffs(x, self.order)
        return HSeries.from_rational(as_fraction(x), self.order)

    def is_zero(self, v):
        if self.kind == "rational":
            return v == 0
        return v.is_zero()

    def is_unit(self, v):
        if self.kind == "rational":
            return v != 0
        return v.is_unit()

    def inv(self, v):
        if self.kind == "rational":
            if v == 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 / v
        return v.inverse()

    def to_json(self, v):
        if self.kind == "rational":
            return str(v)
        return [str(c) for c in v.coeffs]

    def from_json(self, x):
        return self.coerce(x)


RATIONAL = Ring("rational")


def hseries_ring(order: int) -> Ring:
    if order < 0:
        raise ValueError("truncation order must be >= 0")
    return Ring("hseries", order)


def lift_scalar(v, ring: Ring):
    """Embed a rational scalar into the given ring (identity on rationals)."""
    if ring.kind == "rational":
        return as_fraction(v)
    return HSeries.from_rational(as_fraction(v), ring.order)
