"""Small exact integer helpers."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt


def iroot(n: int, k: int) -> int:
    """Return floor(n ** (1/k)) for n >= 0."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = 1 << -(-n.bit_length() // k)  # upper bound
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    r = isqrt(n)
    return r if r * r == n else r + 1


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def square_free_split(n: int) -> tuple[int, int]:
    """Write n > 0 as k*k*d with d squarefree and return (k, d)."""
    if n <= 0:
        raise ValueError("need a positive integer")
    k, d = 1, 1
    m = n
    f = 2
    while f * f <= m:
        e = 0
        while m % f == 0:
            m //= f
            e += 1
        k *= f ** (e // 2)
        if e % 2:
            d *= f
        f += 1 if f == 2 else 2
    return k, d * m


def two_squares(m: int) -> tuple[int, int] | None:
    """Return (x, y) with x >= y >= 0 and x*x + y*y == m, largest x first."""
    if m < 0:
        return None
    x = isqrt(m)
    while 2 * x * x >= m:
        r = m - x * x
        y = isqrt(r)
        if y * y == r:
            return x, y
        x -= 1
    return None


def rational_two_squares(a: Fraction) -> tuple[Fraction, Fraction] | None:
    """Rational (u, v) with u^2 + v^2 == a, or None when impossible."""
    if a < 0:
        return None
    n, d = a.numerator, a.denominator
    rep = two_squares(n * d)
    if rep is None:
        return None
    return Fraction(rep[0], d), Fraction(rep[1], d)


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
