"""Certified continued-fraction expansions and convergents."""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt

from .errors import DomainError, PrecisionExhausted
from .intervals import Interval, decimal_bound
from .reals import QuadraticSurd, evaluate, precision_budget


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients b_0, b_1, ... certified for ``source``.

    ``period`` is (preperiod length, period) when the source is a quadratic
    surd, else None.
    """

    source: object
    quotients: tuple[int, ...]
    period: tuple[int, tuple[int, ...]] | None = None

    @property
    def certified_to(self) -> int:
        return len(self.quotients) - 1

    @cached_property
    def _pq(self) -> tuple[list[int], list[int]]:
        ps, qs = [], []
        p0, q0, p1, q1 = 1, 0, 0, 1  # p_{-1}, q_{-1}, p_{-2}, q_{-2}
        for b in self.quotients:
            p, q = b * p0 + p1, b * q0 + q1
            ps.append(p)
            qs.append(q)
            p0, q0, p1, q1 = p, q, p0, q0
        return ps, qs

    def p(self, n: int) -> int:
        if n == -1:
            return 1
        self._check(n)
        return self._pq[0][n]

    def q(self, n: int) -> int:
        if n == -1:
            return 0
        self._check(n)
        return self._pq[1][n]

    def _check(self, n: int) -> None:
        if n < 0 or n > self.certified_to:
            raise IndexError(f"convergent {n} is beyond certified index {self.certified_to}")


def _interval_quotients(lo: Fraction, hi: Fraction, count: int) -> list[int]:
    """Quotients shared by every real in [lo, hi], assuming the target is irrational."""
    out: list[int] = []
    n1, d1 = lo.numerator, lo.denominator
    n2, d2 = hi.numerator, hi.denominator
    while len(out) < count:
        b = n1 // d1
        if n2 // d2 != b:
            break
        out.append(b)
        r1, r2 = n1 - b * d1, n2 - b * d2
        if r1 == 0:
            break  # next complete quotient is unbounded above
        # x -> 1/(x - b) reverses the order of the endpoints
        n1, d1, n2, d2 = d2, r2, d1, r1
    return out


_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
_LOCK = threading.Lock()


def expand(beta, upto: int, budget: int | None = None) -> ContinuedFraction:
    """Certified quotients b_0 .. b_upto of beta.

    Quotients come from interval enclosures at doubling precision; a
    quotient is emitted only when both ends of the enclosure agree on it.
    For surd inputs the result is cross-checked against the exact
    expansion and the period is recorded.
    """
    if upto < 0:
        raise ValueError("upto must be non-negative")
    with _LOCK:
        cached = _CACHE.get(beta)
    if cached is not None and cached.certified_to >= upto:
        return ContinuedFraction(beta, cached.quotients[: upto + 1], cached.period)
    limit = precision_budget(budget)
    prec = 64
    if cached is not None:
        prec = max(prec, _bits_for(cached))
    qs: list[int] = []
    while True:
        enc = evaluate(beta, prec)
        qs = _interval_quotients(enc.lo, enc.hi, upto + 1)
        if len(qs) >= upto + 1:
            break
        if prec >= limit:
            partial = ContinuedFraction(beta, tuple(qs))
            raise PrecisionExhausted(
                f"only {len(qs)} quotients certified within {limit} bits",
                reached=len(qs) - 1,
                partial=partial,
            )
        prec = min(prec * 2, limit)
    period = None
    if isinstance(beta, QuadraticSurd):
        exact, period = _exact_surd_quotients(beta, upto + 1)
        if exact != qs:
            raise AssertionError("interval and exact surd expansions disagree")
    cf = ContinuedFraction(beta, tuple(qs), period)
    with _LOCK:
        old = _CACHE.get(beta)
        if old is None or old.certified_to < cf.certified_to:
            _CACHE[beta] = cf
    return cf


def _bits_for(cf: ContinuedFraction) -> int:
    return 2 * cf.q(cf.certified_to).bit_length() + 64


def _exact_surd_quotients(x: QuadraticSurd, count: int):
    """Exact quotients of a surd via the (P + sqrt D)/Q recursion, with its period."""
    a, b, d = x.a, x.b, x.d
    Q = a.denominator * b.denominator
    P = a.numerator * b.denominator
    M = b.numerator * a.denominator
    D = M * M * d
    if M < 0:
        P, Q = -P, -Q
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    r = isqrt(D)
    seen: dict[tuple[int, int], int] = {}
    out: list[int] = []
    period = None
    while True:
        if period is None:
            if (P, Q) in seen:
                start = seen[(P, Q)]
                period = (start, tuple(out[start:]))
            else:
                seen[(P, Q)] = len(out)
        if len(out) >= count and period is not None:
            break
        # sqrt(D) lies strictly between r and r + 1
        bq = (P + r) // Q if Q > 0 else (-P - r - 1) // (-Q)
        out.append(bq)
        P = bq * Q - P
        Q = (D - P * P) // Q
    return out[:count], period


@dataclass(frozen=True)
class Convergent:
    """p_n/q_n with a certified enclosure of e_n = beta - p_n/q_n."""

    n: int
    b: int
    p: int
    q: int
    error: Interval

    @property
    def e_lo(self) -> Fraction:
        return self.error.lo

    @property
    def e_hi(self) -> Fraction:
        return self.error.hi

    def to_json(self) -> dict:
        from .intervals import int_str

        return {
            "n": self.n,
            "b": self.b,
            "p": int_str(self.p),
            "q": int_str(self.q),
            "e_lo": decimal_bound(self.e_lo, 20, upward=False),
            "e_hi": decimal_bound(self.e_hi, 20, upward=True),
        }


def error_enclosure(beta, p: int, q: int, budget: int | None = None, rel_bits: int = 32) -> Interval:
    """Enclosure of beta - p/q with certified sign and about rel_bits of relative accuracy."""
    limit = precision_budget(budget)
    prec = max(64, 4 * q.bit_length() + rel_bits + 32)
    target = Fraction(p, q)
    while True:
        e = evaluate(beta, prec) - Interval(target, target, prec)
        s = e.sign()
        if s != 0 and abs(e.width) * (1 << rel_bits) <= abs(e.lo if s > 0 else e.hi):
            return e
        if prec >= limit:
            raise PrecisionExhausted("cannot certify convergent error", reached=prec)
        prec = min(prec * 2, limit)


def convergent(cf: ContinuedFraction, n: int, budget: int | None = None) -> Convergent:
    """Convergent n of cf together with its certified error bracket."""
    p, q = cf.p(n), cf.q(n)
    return Convergent(n, cf.quotients[n], p, q, error_enclosure(cf.source, p, q, budget))


def error_bracket_holds(cf: ContinuedFraction, n: int, budget: int | None = None) -> bool:
    """Certify 1/(2 q_{n+1}^2) <= |e_n| <= 1/(q_n q_{n+1})."""
    q, q1 = cf.q(n), cf.q(n + 1)
    e = abs(convergent(cf, n, budget).error)
    return e.certainly_ge(Fraction(1, 2 * q1 * q1)) and e.certainly_le(Fraction(1, q * q1))


def lambda_ratio(cf: ContinuedFraction, n: int) -> Fraction:
    """The exact ratio q_{n+1} / q_n."""
    return Fraction(cf.q(n + 1), cf.q(n))


def expand_until_q(beta, bound: int, budget: int | None = None) -> ContinuedFraction:
    """Expand far enough that the last certified denominator exceeds ``bound``."""
    upto = 8
    while True:
        cf = expand(beta, upto, budget)
        if cf.q(cf.certified_to) > bound:
            return cf
        upto *= 2


def dirichlet_point(beta, N: int, budget: int | None = None) -> tuple[int, int]:
    """(p, q) for the convergent with the largest q <= N.

    Since the next denominator exceeds N, |p - beta q| < 1/N.
    """
    if N < 1:
        raise DomainError("N must be positive")
    cf = expand_until_q(beta, N, budget)
    k = 0
    while k + 1 <= cf.certified_to and cf.q(k + 1) <= N:
        k += 1
    return cf.p(k), cf.q(k)
