"""Closed intervals with dyadic endpoints and outward rounding.

Endpoints are mpmath raw floating values (sign, mantissa, exponent, bits),
so every endpoint is an exact dyadic rational.  Each operation rounds the
lower endpoint toward -inf and the upper endpoint toward +inf at the working
precision, which keeps the true result inside the interval.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath.libmp import (
    MPZ,
    fzero,
    from_int,
    from_rational,
    mpf_add,
    mpf_cmp,
    mpf_div,
    mpf_mul,
    mpf_neg,
    mpf_pos,
    mpf_sqrt,
    mpf_sub,
    round_ceiling,
    round_floor,
    to_str,
)

from .errors import DomainError

FLOOR = round_floor
CEIL = round_ceiling


def raw_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    if not man:
        return Fraction(0)
    man = int(man)
    val = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -val if sign else val


def raw_from(x, prec: int, rnd):
    """Round an int or Fraction to a raw float in direction rnd."""
    if isinstance(x, tuple):
        return x
    if isinstance(x, int):
        if x.bit_length() <= prec:
            return from_int(x)
        return from_int(x, prec, rnd)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return raw_from(x.numerator, prec, rnd)
        return from_rational(x.numerator, x.denominator, prec, rnd)
    raise TypeError(f"cannot convert {type(x).__name__} to an interval endpoint")


def int_str(n: int) -> str:
    """Decimal string of a possibly huge integer without the CPython digit cap."""
    return str(MPZ(n))


class Interval:
    """A closed interval [lo, hi] with dyadic endpoints.

    ``precision`` is the mantissa size in bits used for rounding results of
    arithmetic on this interval.
    """

    __slots__ = ("_lo", "_hi", "precision")

    def __init__(self, lo, hi=None, precision: int = 64):
        if hi is None:
            hi = lo
        self._lo = raw_from(lo, precision, FLOOR)
        self._hi = raw_from(hi, precision, CEIL)
        self.precision = precision
        if mpf_cmp(self._lo, self._hi) > 0:
            raise ValueError("interval with lo > hi")

    @classmethod
    def _raw(cls, lo, hi, precision: int) -> "Interval":
        obj = cls.__new__(cls)
        obj._lo = lo
        obj._hi = hi
        obj.precision = precision
        return obj

    # -- views -----------------------------------------------------------
    @property
    def lo(self) -> Fraction:
        return raw_to_fraction(self._lo)

    @property
    def hi(self) -> Fraction:
        return raw_to_fraction(self._hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"Interval({to_str(self._lo, 20)}, {to_str(self._hi, 20)}, prec={self.precision})"

    # -- predicates ------------------------------------------------------
    def is_positive(self) -> bool:
        return self._lo[1] != 0 and not self._lo[0]

    def is_negative(self) -> bool:
        return self._hi[1] != 0 and self._hi[0] == 1

    def sign(self) -> int:
        """+1 or -1 when certified, 0 when the interval straddles or touches 0."""
        if self.is_positive():
            return 1
        if self.is_negative():
            return -1
        return 0

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return mpf_cmp(self._lo, x._lo) <= 0 and mpf_cmp(x._hi, self._hi) <= 0
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return mpf_cmp(self._lo, other._hi) <= 0 and mpf_cmp(other._lo, self._hi) <= 0

    def certainly_lt(self, other) -> bool:
        other = _coerce(other, self.precision)
        return mpf_cmp(self._hi, other._lo) < 0

    def certainly_gt(self, other) -> bool:
        other = _coerce(other, self.precision)
        return mpf_cmp(self._lo, other._hi) > 0

    def certainly_le(self, other) -> bool:
        other = _coerce(other, self.precision)
        return mpf_cmp(self._hi, other._lo) <= 0

    def certainly_ge(self, other) -> bool:
        other = _coerce(other, self.precision)
        return mpf_cmp(self._lo, other._hi) >= 0

    def intersect(self, other: "Interval") -> "Interval":
        lo = self._lo if mpf_cmp(self._lo, other._lo) >= 0 else other._lo
        hi = self._hi if mpf_cmp(self._hi, other._hi) <= 0 else other._hi
        if mpf_cmp(lo, hi) > 0:
            raise ValueError("disjoint enclosures of the same quantity")
        return Interval._raw(lo, hi, max(self.precision, other.precision))

    def hull(self, other: "Interval") -> "Interval":
        lo = self._lo if mpf_cmp(self._lo, other._lo) <= 0 else other._lo
        hi = self._hi if mpf_cmp(self._hi, other._hi) >= 0 else other._hi
        return Interval._raw(lo, hi, min(self.precision, other.precision))

    def coarse_hi(self, bits: int = 64) -> Fraction:
        """A short rational upper bound for the interval, rounded to ``bits``."""
        return raw_to_fraction(mpf_pos(self._hi, bits, CEIL))

    def coarse_lo(self, bits: int = 64) -> Fraction:
        """A short rational lower bound for the interval, rounded to ``bits``."""
        return raw_to_fraction(mpf_pos(self._lo, bits, FLOOR))

    def with_precision(self, precision: int) -> "Interval":
        return Interval._raw(self._lo, self._hi, precision)

    def rounded(self, precision: int) -> "Interval":
        """Endpoints rounded outward to ``precision`` bits."""
        return Interval._raw(mpf_pos(self._lo, precision, FLOOR), mpf_pos(self._hi, precision, CEIL), precision)

    # -- arithmetic ------------------------------------------------------
    def __neg__(self) -> "Interval":
        return Interval._raw(mpf_neg(self._hi), mpf_neg(self._lo), self.precision)

    def __abs__(self) -> "Interval":
        if not self._lo[0] or self._lo[1] == 0:
            return self
        if self._hi[0] == 1 or self._hi[1] == 0:
            return -self
        hi = self._hi if mpf_cmp(self._hi, mpf_neg(self._lo)) >= 0 else mpf_neg(self._lo)
        return Interval._raw(fzero, hi, self.precision)

    def __add__(self, other) -> "Interval":
        other = _coerce(other, self.precision)
        p = min(self.precision, other.precision)
        return Interval._raw(
            mpf_add(self._lo, other._lo, p, FLOOR), mpf_add(self._hi, other._hi, p, CEIL), p
        )

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = _coerce(other, self.precision)
        p = min(self.precision, other.precision)
        return Interval._raw(
            mpf_sub(self._lo, other._hi, p, FLOOR), mpf_sub(self._hi, other._lo, p, CEIL), p
        )

    def __rsub__(self, other) -> "Interval":
        return _coerce(other, self.precision) - self

    def __mul__(self, other) -> "Interval":
        other = _coerce(other, self.precision)
        p = min(self.precision, other.precision)
        pairs = (
            (self._lo, other._lo),
            (self._lo, other._hi),
            (self._hi, other._lo),
            (self._hi, other._hi),
        )
        los = [mpf_mul(a, b, p, FLOOR) for a, b in pairs]
        his = [mpf_mul(a, b, p, CEIL) for a, b in pairs]
        return Interval._raw(_min(los), _max(his), p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = _coerce(other, self.precision)
        if other.sign() == 0:
            raise ZeroDivisionError("divisor interval contains zero")
        p = min(self.precision, other.precision)
        pairs = (
            (self._lo, other._lo),
            (self._lo, other._hi),
            (self._hi, other._lo),
            (self._hi, other._hi),
        )
        los = [mpf_div(a, b, p, FLOOR) for a, b in pairs]
        his = [mpf_div(a, b, p, CEIL) for a, b in pairs]
        return Interval._raw(_min(los), _max(his), p)

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other, self.precision) / self

    def square(self) -> "Interval":
        a = abs(self)
        p = self.precision
        return Interval._raw(mpf_mul(a._lo, a._lo, p, FLOOR), mpf_mul(a._hi, a._hi, p, CEIL), p)

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        if k == 0:
            return Interval(1, 1, self.precision)
        if k % 2 == 0:
            return self.square() ** (k // 2) if k > 2 else self.square()
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def sqrt(self) -> "Interval":
        """Outward-rounded square root; the interval must be positive."""
        if not self.is_positive():
            raise DomainError("square root of a nonpositive interval")
        p = self.precision
        return Interval._raw(mpf_sqrt(self._lo, p, FLOOR), mpf_sqrt(self._hi, p, CEIL), p)


def _coerce(x, precision: int) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, Fraction)):
        return Interval(x, x, precision)
    raise TypeError(f"unsupported operand {type(x).__name__}")


def _min(values):
    best = values[0]
    for v in values[1:]:
        if mpf_cmp(v, best) < 0:
            best = v
    return best


def _max(values):
    best = values[0]
    for v in values[1:]:
        if mpf_cmp(v, best) > 0:
            best = v
    return best


def sqrt(x: Interval) -> Interval:
    return x.sqrt()


def decimal_bound(x: Fraction, digits: int = 20, upward: bool = False) -> str:
    """Render x to ``digits`` significant digits, rounded down or up.

    The rounding direction is exact, so a pair (lo rounded down, hi rounded
    up) is still a valid bracket.
    """
    if x == 0:
        return "0"
    neg = x < 0
    a = -x if neg else x
    # exponent e with 10^e <= a < 10^(e+1)
    e = len(int_str(a.numerator)) - len(int_str(a.denominator))
    if Fraction(10) ** e > a:
        e -= 1
    scale = Fraction(10) ** (digits - 1 - e)
    scaled = a * scale
    away = upward != neg  # round magnitude away from zero
    m = -((-scaled.numerator) // scaled.denominator) if away else scaled.numerator // scaled.denominator
    mant = int_str(m)
    exp = e
    if len(mant) > digits:  # rounding carried into a new digit
        mant = mant[:digits]
        exp += 1
    text = f"{mant[0]}.{mant[1:]}e{exp}" if len(mant) > 1 else f"{mant}e{exp}"
    return ("-" if neg else "") + text
