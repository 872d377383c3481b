"""Certified real numbers.

A real is described by a ``RealSpec`` that can produce an enclosing
``Interval`` at any requested precision.  Quadratic surds also support exact
field arithmetic and exact sign decisions, which the rest of the package uses
whenever the data allows it.
"""

from __future__ import annotations

import enum
import math
import os
import re
import threading
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from mpmath.libmp import (
    MPZ,
    fone,
    from_int,
    from_man_exp,
    mpf_add,
    mpf_div,
    mpf_e,
    mpf_pi,
    mpf_sqrt,
)

from ._numth import iroot, is_square, square_free_split
from .errors import DomainError, OracleContradiction, PrecisionExhausted, SpecSyntaxError
from .intervals import CEIL, FLOOR, Interval, int_str

Number = Union[int, Fraction]

DEFAULT_BUDGET = 1 << 20
MIN_PRECISION = 16


def precision_budget(override: int | None = None) -> int:
    """Largest working precision in bits; env OPPENHEIM_PRECISION_BUDGET overrides the default."""
    if override is not None:
        return int(override)
    env = os.environ.get("OPPENHEIM_PRECISION_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise SpecSyntaxError(f"bad OPPENHEIM_PRECISION_BUDGET {env!r}") from exc
    return DEFAULT_BUDGET


class RealSpec:
    """Base class of real-number descriptions."""

    label = "real"

    def _enclose(self, precision: int) -> Interval:
        raise NotImplementedError

    @property
    def is_rational(self) -> bool:
        return False

    def enclose(self, precision: int) -> Interval:
        return evaluate(self, precision)

    def __float__(self) -> float:
        return float(evaluate(self, 64))


# ---------------------------------------------------------------------------
# quadratic surds


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


@dataclass(frozen=True)
class QuadraticSurd(RealSpec):
    """The number p/q + (r/s)*sqrt(d), kept in lowest terms with d squarefree.

    Rational values are allowed (r == 0); they are stored with d = 2 so that
    equal numbers compare equal field by field.
    """

    p: int
    q: int
    r: int
    s: int
    d: int

    def __post_init__(self):
        if self.q == 0 or self.s == 0:
            raise DomainError("zero denominator in surd")
        if self.d <= 0:
            raise DomainError("surd radicand must be positive")
        k, d0 = square_free_split(self.d)
        a = Fraction(self.p, self.q)
        b = Fraction(self.r, self.s) * k
        if d0 == 1:
            if b != 0:
                raise DomainError(f"radicand {self.d} is a perfect square")
            d0 = 2
        if b == 0:
            d0 = 2
        object.__setattr__(self, "p", a.numerator)
        object.__setattr__(self, "q", a.denominator)
        object.__setattr__(self, "r", b.numerator)
        object.__setattr__(self, "s", b.denominator)
        object.__setattr__(self, "d", d0)

    @classmethod
    def of(cls, a: Number, b: Number, d: int) -> "QuadraticSurd":
        a, b = _frac(a), _frac(b)
        return cls(a.numerator, a.denominator, b.numerator, b.denominator, d)

    @classmethod
    def rational(cls, a: Number) -> "QuadraticSurd":
        return cls.of(a, 0, 2)

    @property
    def a(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def b(self) -> Fraction:
        return Fraction(self.r, self.s)

    @property
    def is_rational(self) -> bool:
        return self.r == 0

    @property
    def label(self) -> str:
        if self.r == 0:
            return str(self.a)
        rad = f"sqrt({self.d})" if self.b == 1 else f"{self.b}*sqrt({self.d})"
        if self.b == -1:
            rad = f"-sqrt({self.d})"
        if self.p == 0:
            return rad
        return f"{self.a}+{rad}" if self.r > 0 else f"{self.a}{rad}"

    def __str__(self) -> str:
        return self.label

    # -- field operations ------------------------------------------------
    def _lift(self, other) -> tuple[Fraction, Fraction, int]:
        if isinstance(other, QuadraticSurd):
            if other.r == 0:
                return other.a, Fraction(0), self.d
            if self.r == 0:
                return other.a, other.b, other.d
            if other.d != self.d:
                raise DomainError(f"surds over sqrt({self.d}) and sqrt({other.d}) do not mix")
            return other.a, other.b, self.d
        if isinstance(other, (int, Fraction)):
            return _frac(other), Fraction(0), self.d
        return NotImplemented  # type: ignore[return-value]

    def _field(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return None
        a2, b2, d = lifted
        if self.r == 0 and b2 == 0:
            d = 2
        return a2, b2, d

    def __add__(self, other):
        f = self._field(other)
        if f is None:
            return NotImplemented
        a2, b2, d = f
        return QuadraticSurd.of(self.a + a2, self.b + b2, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd.of(-self.a, -self.b, self.d)

    def __sub__(self, other):
        f = self._field(other)
        if f is None:
            return NotImplemented
        a2, b2, d = f
        return QuadraticSurd.of(self.a - a2, self.b - b2, d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        f = self._field(other)
        if f is None:
            return NotImplemented
        a2, b2, d = f
        a1, b1 = self.a, self.b
        return QuadraticSurd.of(a1 * a2 + b1 * b2 * d, a1 * b2 + a2 * b1, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd.of(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        f = self._field(other)
        if f is None:
            return NotImplemented
        a2, b2, d = f
        den = a2 * a2 - b2 * b2 * d
        if den == 0:
            raise ZeroDivisionError("division by zero surd")
        other_conj = QuadraticSurd.of(a2, -b2, d)
        return _scale(self * other_conj, 1 / den)

    def __rtruediv__(self, other):
        return QuadraticSurd.rational(_frac(other)) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = QuadraticSurd.rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order -----------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs = a * a
        rhs = b * b * self.d
        return sa if lhs > rhs else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def as_rational(self) -> Fraction | None:
        return self.a if self.r == 0 else None

    # -- square roots ----------------------------------------------------
    def sqrt_exact(self) -> "QuadraticSurd | None":
        """The positive square root inside the same field, when it exists."""
        if self.sign() < 0:
            raise DomainError("square root of a negative surd")
        if self.r == 0:
            a = self.a
            n, m = a.numerator, a.denominator
            if is_square(n) and is_square(m):
                return QuadraticSurd.rational(Fraction(math.isqrt(n), math.isqrt(m)))
            return QuadraticSurd.of(0, Fraction(1, m), n * m) if n else QuadraticSurd.rational(0)
        # (x + y sqrt d)^2 = x^2 + d y^2 + 2xy sqrt d
        disc = self.norm()
        if disc < 0 or not (is_square(disc.numerator) and is_square(disc.denominator)):
            return None
        root = Fraction(math.isqrt(disc.numerator), math.isqrt(disc.denominator))
        for x2 in ((self.a + root) / 2, (self.a - root) / 2):
            if x2 > 0 and is_square(x2.numerator) and is_square(x2.denominator):
                x = Fraction(math.isqrt(x2.numerator), math.isqrt(x2.denominator))
                y = self.b / (2 * x)
                cand = QuadraticSurd.of(x, y, self.d)
                if cand.sign() < 0:
                    cand = -cand
                if cand * cand == self:
                    return cand
        return None

    def _enclose(self, precision: int) -> Interval:
        wp = precision + 12
        a, b = self.a, self.b
        if b == 0:
            return Interval(a, a, precision)
        root = from_int(self.d)
        s = Interval._raw(mpf_sqrt(root, wp, FLOOR), mpf_sqrt(root, wp, CEIL), wp)
        if (a > 0) != (b > 0) and a != 0:
            # cancellation: evaluate norm / (a - b sqrt d) instead
            den = Interval(a, a, wp) - s * b
            out = Interval(self.norm(), self.norm(), wp) / den
        else:
            out = Interval(a, a, wp) + s * b
        return out.with_precision(precision)


def _scale(x: QuadraticSurd, c: Fraction) -> QuadraticSurd:
    return QuadraticSurd.of(x.a * c, x.b * c, x.d)


# ---------------------------------------------------------------------------
# oracles and constants


@dataclass(frozen=True, eq=False)
class DecimalOracle(RealSpec):
    """A real given by a digit-string oracle.

    ``digits(k)`` must return a decimal string with at least ``k`` digits
    after the point, accurate to within one unit of the last digit.  Answers
    at growing precision are checked against each other; a disagreement
    raises ``OracleContradiction``.  Rationality is the caller's concern.
    """

    digits: Callable[[int], str]
    label: str = "decimal"
    _history: list = field(default_factory=list, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def _parse(self, text: str) -> tuple[Fraction, int, str]:
        m = re.fullmatch(r"\s*([+-]?)(\d*)(?:\.(\d*))?\s*", text)
        if not m or not (m.group(2) or m.group(3)):
            raise SpecSyntaxError(f"oracle returned a non-decimal string {text!r}")
        frac = m.group(3) or ""
        body = (m.group(2) or "0") + frac
        val = Fraction(int(body), 10 ** len(frac))
        if m.group(1) == "-":
            val = -val
        return val, len(frac), m.group(1) + body

    def _enclose(self, precision: int) -> Interval:
        want = int(precision * 0.30103) + 3
        text = self.digits(want)
        val, ndig, body = self._parse(text)
        unit = Fraction(1, 10 ** ndig)
        with self._lock:
            for old_val, old_nd, old_body in self._history:
                old_unit = Fraction(1, 10 ** old_nd)
                if val + unit < old_val - old_unit or val - unit > old_val + old_unit:
                    raise OracleContradiction(f"{self.label}: digits {text!r} contradict earlier output")
                common = min(len(body), len(old_body)) - 1
                if len(body) - ndig == len(old_body) - old_nd and body[:common] != old_body[:common]:
                    raise OracleContradiction(f"{self.label}: digits {text!r} change earlier digits")
            self._history.append((val, ndig, body))
            del self._history[:-4]
        if ndig < want:
            raise PrecisionExhausted(
                f"{self.label}: oracle supplied {ndig} digits, {want} needed", reached=ndig
            )
        return Interval(val - unit, val + unit, precision)


def decimal_literal(text: str) -> DecimalOracle:
    """Oracle backed by a fixed digit string (precision limited by its length)."""
    text = text.strip()
    DecimalOracle(lambda k: text)._parse(text)
    return DecimalOracle(lambda k: text, label=f"decimal:{text}")


def nth_root_oracle(a: int, n: int) -> DecimalOracle:
    """Digits of a**(1/n) computed with exact integer roots."""
    if a <= 0 or n < 1:
        raise DomainError("nth_root_oracle needs a > 0 and n >= 1")

    def digits(k: int) -> str:
        v = iroot(a * 10 ** (n * k), n)
        s = int_str(v).rjust(k + 1, "0")
        return f"{s[:-k]}.{s[-k:]}" if k else s

    return DecimalOracle(digits, label=f"root({a},{n})")


_LOG2_10_LOW = Fraction(332192809, 100000000)  # slightly below log2(10)


def _liouville_enclosure(precision: int) -> Interval:
    wp = precision + 16
    need = int(wp * 0.30103) + 4
    # exact partial sum num / 10^top over the terms that matter at this precision
    k = 1
    while math.factorial(k + 1) <= need:
        k += 1
    top = math.factorial(k)
    num = sum(MPZ(10) ** (top - math.factorial(j)) for j in range(1, k + 1))
    den = from_int(MPZ(10) ** top)
    lo = mpf_div(from_int(num), den, wp, FLOOR)
    hi = mpf_div(from_int(num), den, wp, CEIL)
    # tail < 2 * 10^-(k+1)! <= 2^(1 - floor((k+1)! * log2 10))
    e = math.floor(math.factorial(k + 1) * _LOG2_10_LOW)
    hi = mpf_add(hi, from_man_exp(1, 1 - e), wp, CEIL)
    return Interval._raw(lo, hi, wp).with_precision(precision)


@dataclass(frozen=True)
class NamedConstant(RealSpec):
    """One of the built-in constants ``e``, ``pi`` or ``liouville`` (sum of 10^-k!)."""

    tag: str

    def __post_init__(self):
        if self.tag not in ("e", "pi", "liouville"):
            raise DomainError(f"unknown constant {self.tag!r}")

    @property
    def label(self) -> str:
        return self.tag

    def _enclose(self, precision: int) -> Interval:
        wp = precision + 8
        if self.tag == "e":
            return Interval._raw(mpf_e(wp, FLOOR), mpf_e(wp, CEIL), wp).with_precision(precision)
        if self.tag == "pi":
            return Interval._raw(mpf_pi(wp, FLOOR), mpf_pi(wp, CEIL), wp).with_precision(precision)
        return _liouville_enclosure(precision)


LIOUVILLE = NamedConstant("liouville")


@dataclass(frozen=True)
class SqrtOf(RealSpec):
    """Positive square root of a positive real."""

    inner: RealSpec

    @property
    def label(self) -> str:
        return f"sqrt({_label(self.inner)})"

    def _enclose(self, precision: int) -> Interval:
        wp = precision + 8
        x = evaluate(self.inner, wp)
        while not x.is_positive():
            wp *= 2
            if wp > 4 * precision_budget() + 64:
                raise PrecisionExhausted("cannot certify a positive radicand", reached=wp)
            x = evaluate(self.inner, wp)
        return x.with_precision(precision + 8).sqrt().with_precision(precision)


@dataclass(frozen=True)
class SquareOf(RealSpec):
    """Square of a real."""

    inner: RealSpec

    @property
    def label(self) -> str:
        return f"({_label(self.inner)})^2"

    def _enclose(self, precision: int) -> Interval:
        return evaluate(self.inner, precision + 8).square().with_precision(precision)


@dataclass(frozen=True)
class ScaledReal(RealSpec):
    """A nonzero rational multiple of a real."""

    inner: RealSpec
    factor: Fraction

    @property
    def label(self) -> str:
        return f"({self.factor})*({_label(self.inner)})"

    def _enclose(self, precision: int) -> Interval:
        k = Fraction(self.factor)
        return (evaluate(self.inner, precision + 8) * Interval(k, k, precision + 8)).with_precision(precision)


def scale_real(x, k):
    """k * x, exact for rationals and surds."""
    k = Fraction(k)
    if k == 1:
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x) * k
    if isinstance(x, QuadraticSurd):
        return x * k
    if k == 0:
        return Fraction(0)
    return ScaledReal(x, k)


def _label(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(x)
    return x.label


def describe(x) -> str:
    """Short textual description of a real spec, used in certificates."""
    return _label(x)


# ---------------------------------------------------------------------------
# evaluation with monotone refinement

_CACHE: "weakref.WeakKeyDictionary[RealSpec, dict[int, Interval]]" = weakref.WeakKeyDictionary()
_CACHE_LOCK = threading.Lock()


def evaluate(x, precision: int) -> Interval:
    """Enclose x at ``precision`` bits.

    Results for one spec are nested: a request at higher precision never
    returns an interval sticking out of an earlier, coarser one.
    """
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits")
    if isinstance(x, (int, Fraction)):
        return Interval(x, x, precision)
    if not isinstance(x, RealSpec):
        raise TypeError(f"cannot evaluate {type(x).__name__}")
    with _CACHE_LOCK:
        entries = _CACHE.setdefault(x, {})
        finer = [p for p in entries if p >= precision]
        if finer:
            # a much finer cached enclosure is rounded so callers never pay for its size
            return entries[min(finer)].rounded(precision + 32)
        coarser = [p for p in entries if p < precision]
    fresh = x._enclose(precision)
    with _CACHE_LOCK:
        for p in coarser:
            fresh = fresh.intersect(entries[p])
        fresh = fresh.with_precision(precision)
        entries[precision] = fresh
        if len(entries) > 12:
            for p in sorted(entries)[:-12]:
                del entries[p]
    return fresh


class Ordering(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    UNDECIDED = "undecided"


def _producer(x):
    if callable(x) and not isinstance(x, RealSpec):
        return x
    return lambda prec: evaluate(x, prec)


def certified_compare(x, y, max_precision: int | None = None, start: int = 64) -> Ordering:
    """Compare two reals by refining enclosures until they separate.

    x and y may be ints, Fractions, RealSpecs, or callables mapping a
    precision to an Interval.  Equal inputs always come back UNDECIDED.
    """
    budget = precision_budget(max_precision)
    fx, fy = _producer(x), _producer(y)
    prec = max(MIN_PRECISION, start)
    while prec <= budget:
        ix, iy = fx(prec), fy(prec)
        if ix.certainly_lt(iy):
            return Ordering.LESS
        if ix.certainly_gt(iy):
            return Ordering.GREATER
        prec *= 2
    return Ordering.UNDECIDED


def certified_sign(x, max_precision: int | None = None, start: int = 64) -> int:
    """+1/-1 when certified, 0 when undecided within the budget."""
    if isinstance(x, QuadraticSurd):
        return x.sign()
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    order = certified_compare(x, 0, max_precision, start)
    return {Ordering.GREATER: 1, Ordering.LESS: -1}.get(order, 0)


def is_rational(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return True
    return bool(getattr(x, "is_rational", False))


def as_surd(x) -> QuadraticSurd | None:
    if isinstance(x, QuadraticSurd):
        return x
    if isinstance(x, (int, Fraction)):
        return QuadraticSurd.rational(x)
    return None


def sqrt_real(x):
    """Positive square root, exact whenever x is a rational or a surd with a surd root."""
    if isinstance(x, (int, Fraction)):
        x = QuadraticSurd.rational(x)
    if isinstance(x, QuadraticSurd):
        if x.sign() <= 0:
            raise DomainError("square root of a nonpositive number")
        root = x.sqrt_exact()
        if root is not None:
            return root
        return SqrtOf(x)
    if isinstance(x, SquareOf):
        return x.inner
    if certified_sign(x) <= 0:
        raise DomainError(f"cannot certify {describe(x)} > 0")
    return SqrtOf(x)


def square_real(x):
    if isinstance(x, (int, Fraction)):
        return QuadraticSurd.rational(Fraction(x) ** 2)
    if isinstance(x, QuadraticSurd):
        return x * x
    if isinstance(x, SqrtOf):
        return x.inner
    return SquareOf(x)


def as_rational(x, what: str = "value") -> Fraction:
    """Parse an exact rational: int, Fraction, 'p/q' or a terminating decimal string.

    Floats are accepted through their shortest repr, so 0.001 means 1/1000.
    """
    if isinstance(x, bool):
        raise SpecSyntaxError(f"{what}: booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise SpecSyntaxError(f"{what}: not finite")
        return Fraction(repr(x))
    if isinstance(x, str):
        text = x.strip()
        if not re.fullmatch(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?", text):
            raise SpecSyntaxError(f"{what}: {x!r} is not a rational literal")
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(num) / Fraction(den)
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecSyntaxError(f"{what}: {x!r} is not a rational literal") from exc
    raise SpecSyntaxError(f"{what}: unsupported type {type(x).__name__}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_]+)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                raise SpecSyntaxError(f"unexpected character at {pos} in {text!r}")
            if m.group(1):
                self.tokens.append(("num", m.group(1)))
            elif m.group(2):
                self.tokens.append(("name", m.group(2)))
            else:
                op = m.group(3)
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise SpecSyntaxError(f"unexpected token {tok[1]!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        val = self.expr()
        if self.i != len(self.tokens):
            raise SpecSyntaxError(f"trailing input in {self.text!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = _arith(val, rhs, op)
        return val

    def term(self):
        val = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            val = _arith(val, rhs, op)
        return val

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return _arith(0, self.factor(), "-")
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            tok = self.take("num")
            if not tok[1].isdigit():
                raise SpecSyntaxError("exponents must be non-negative integers")
            k = int(tok[1])
            if isinstance(base, Fraction):
                base = base ** k
            elif isinstance(base, QuadraticSurd):
                base = base ** k
            elif k == 2:
                base = square_real(base)
            else:
                raise SpecSyntaxError("only squares of non-surd reals are supported")
            if neg:
                base = _arith(1, base, "/")
        return base

    def atom(self):
        kind, value = self.peek()
        if kind == "num":
            self.take()
            return Fraction(value)
        if kind == "name":
            self.take()
            if value == "sqrt":
                self.take("op", "(")
                inner = self.expr()
                self.take("op", ")")
                return _simplify(sqrt_real(inner))
            if value in ("e", "pi", "liouville"):
                return NamedConstant(value)
            raise SpecSyntaxError(f"unknown name {value!r}")
        if (kind, value) == ("op", "("):
            self.take()
            val = self.expr()
            self.take("op", ")")
            return val
        raise SpecSyntaxError(f"unexpected token {value!r} in {self.text!r}")


def _simplify(x):
    if isinstance(x, QuadraticSurd) and x.r == 0:
        return x.a
    return x


def _arith(x, y, op):
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(y, int):
        y = Fraction(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        if op == "/" and y == 0:
            raise DomainError("division by zero")
        if op == "+":
            return x + y
        if op == "-":
            return x - y
        return x * y if op == "*" else x / y
    if isinstance(x, (Fraction, QuadraticSurd)) and isinstance(y, (Fraction, QuadraticSurd)):
        sx = x if isinstance(x, QuadraticSurd) else QuadraticSurd.rational(x)
        try:
            out = {"+": sx.__add__, "-": sx.__sub__, "*": sx.__mul__, "/": sx.__truediv__}[op](y)
        except ZeroDivisionError as exc:
            raise DomainError("division by zero") from exc
        return _simplify(out)
    raise SpecSyntaxError("arithmetic is supported only on rationals and quadratic surds")


def parse_real(text: str):
    """Parse a real literal.

    Accepted: rationals, ``sqrt(...)`` (nestable), surd arithmetic such as
    ``(1+sqrt(5))/2``, the names ``e``, ``pi`` and ``liouville``, and
    ``decimal:<digits>`` for a fixed digit string.  Returns a Fraction for
    rational input and a RealSpec otherwise.
    """
    if not isinstance(text, str) or not text.strip():
        raise SpecSyntaxError("empty real literal")
    text = text.strip()
    if text.startswith("decimal:"):
        return decimal_literal(text[len("decimal:"):])
    return _Parser(text).parse()
