"""Reductions of rationally equivalent forms to x^2 + y^2 - alpha z^2.

A form Q(x) = Q_alpha(gamma x) with gamma in SL(3, Q) is solved by clearing
the denominators of gamma^-1: with a the lcm of those denominators, a
solution w of |Q_alpha(w)| <= eps / a^2 gives the integral vector
v = a gamma^-1 w with Q(v) = a^2 Q_alpha(w).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from ._numth import is_square, lcm, rational_two_squares
from .core import Solution, TernaryForm, _json_int, solve
from .errors import DomainError, NotReducible, NotUnimodular
from .intervals import Interval
from .profile import DiophantineProfile
from .reals import (
    QuadraticSurd,
    as_rational,
    describe,
    evaluate,
    is_rational,
    precision_budget,
    scale_real,
    square_real,
)

Matrix = tuple[tuple[Fraction, ...], ...]


def _matrix(rows, size: int) -> Matrix:
    if len(rows) != size or any(len(r) != size for r in rows):
        raise DomainError(f"expected a {size}x{size} matrix")
    return tuple(tuple(as_rational(x, "matrix entry") for x in r) for r in rows)


def _mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def _det3(m: Matrix) -> Fraction:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


@dataclass(frozen=True)
class RationalMatrix3:
    """A 3x3 matrix of exact rationals."""

    entries: Matrix

    def __post_init__(self):
        object.__setattr__(self, "entries", _matrix(self.entries, 3))
        if self.det == 0:
            raise DomainError("matrix is singular")

    @classmethod
    def identity(cls) -> "RationalMatrix3":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def from_json(cls, text: str) -> "RationalMatrix3":
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"matrix is not valid JSON: {exc}") from None
        return cls(rows)

    @property
    def det(self) -> Fraction:
        return _det3(self.entries)

    def inverse(self) -> "RationalMatrix3":
        m, d = self.entries, self.det
        cof = [[Fraction(0)] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [k for k in range(3) if k != i]
                c = [k for k in range(3) if k != j]
                minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                cof[i][j] = (-1) ** (i + j) * minor
        # inverse is the transposed cofactor matrix over det
        return RationalMatrix3(tuple(tuple(cof[j][i] / d for j in range(3)) for i in range(3)))

    def __matmul__(self, other: "RationalMatrix3") -> "RationalMatrix3":
        return RationalMatrix3(_mul(self.entries, other.entries))

    def apply(self, v) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(sum(self.entries[i][j] * v[j] for j in range(3)) for i in range(3))

    def denominator_lcm(self) -> int:
        out = 1
        for row in self.entries:
            for x in row:
                out = lcm(out, x.denominator)
        return out

    def to_json(self) -> list:
        return [[str(x) for x in row] for row in self.entries]


@dataclass(frozen=True)
class HMatrix:
    """h = [[A, 0], [0, h33]] with A a 2x2 rational block and h33 irrational."""

    A: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    h33: object

    def __post_init__(self):
        object.__setattr__(self, "A", _matrix(self.A, 2))
        if is_rational(self.h33):
            raise DomainError(f"h33 = {describe(self.h33)} is rational")

    @property
    def det_A(self) -> Fraction:
        (a, b), (c, d) = self.A
        return a * d - b * c


@dataclass(frozen=True)
class GramForm:
    """Q(x) = x^T G0 x - alpha x^T G1 x with symmetric rational G0 and G1."""

    G0: Matrix
    G1: Matrix
    alpha: object

    @classmethod
    def from_gamma(cls, gamma: RationalMatrix3, alpha) -> "GramForm":
        """Gram data of Q_alpha(gamma x)."""
        g = gamma.entries
        gt = _transpose(g)
        d0 = ((1, 0, 0), (0, 1, 0), (0, 0, 0))
        d1 = ((0, 0, 0), (0, 0, 0), (0, 0, 1))
        return cls(_mul(_mul(gt, d0), g), _mul(_mul(gt, d1), g), alpha)

    @classmethod
    def from_h(cls, h: HMatrix) -> "GramForm":
        """Gram data of x^2 + y^2 - z^2 evaluated at h x."""
        A = h.A
        AtA = _mul(_transpose(A), A)
        G0 = (
            (AtA[0][0], AtA[0][1], Fraction(0)),
            (AtA[1][0], AtA[1][1], Fraction(0)),
            (Fraction(0), Fraction(0), Fraction(0)),
        )
        G1 = ((0, 0, 0), (0, 0, 0), (0, 0, 1))
        return cls(G0, _matrix(G1, 3), square_real(h.h33))

    @classmethod
    def binary(cls, a, b, c, alpha) -> "GramForm":
        """a x^2 + b x y + c y^2 - alpha z^2."""
        a, b, c = (as_rational(t, "coefficient") for t in (a, b, c))
        G0 = ((a, b / 2, Fraction(0)), (b / 2, c, Fraction(0)), (Fraction(0),) * 3)
        return cls(G0, _matrix(((0, 0, 0), (0, 0, 0), (0, 0, 1)), 3), alpha)

    def parts(self, v) -> tuple[Fraction, Fraction]:
        """(v^T G0 v, v^T G1 v) as exact rationals."""

        def quad(G):
            return sum(G[i][j] * v[i] * v[j] for i in range(3) for j in range(3))

        return quad(self.G0), quad(self.G1)

    def exact_value(self, v) -> QuadraticSurd | None:
        if not isinstance(self.alpha, QuadraticSurd):
            return None
        r0, r1 = self.parts(v)
        return self.alpha * (-r1) + r0

    def enclose(self, v, precision: int) -> Interval:
        r0, r1 = self.parts(v)
        return Interval(r0, r0, precision) - evaluate(self.alpha, precision) * Interval(r1, r1, precision)

    def coefficients(self) -> dict:
        """Monomial coefficients as (rational part, coefficient of alpha)."""
        names = ("x", "y", "z")
        out = {}
        for i in range(3):
            for j in range(i, 3):
                k = 1 if i == j else 2
                key = names[i] + names[j]
                out[key] = (k * self.G0[i][j], -k * self.G1[i][j])
        return out

    def same_as(self, other: "GramForm") -> bool:
        """Coefficient-level identity, with alpha compared exactly when possible."""
        if self.G0 != other.G0 or self.G1 != other.G1:
            return False
        if all(x == 0 for row in self.G1 for x in row):
            return True
        a, b = self.alpha, other.alpha
        if a is b or a == b:
            return True
        if isinstance(a, QuadraticSurd) and isinstance(b, QuadraticSurd):
            return False
        # distinct descriptions of possibly equal reals: only a numerical check is possible
        return evaluate(a, 256).overlaps(evaluate(b, 256))


def factor_h(h: HMatrix) -> tuple[object, RationalMatrix3]:
    """Split h into alpha = h33^2 and gamma = [[A, 0], [0, 1]]."""
    if h.det_A != 1:
        raise NotUnimodular(f"det(A) = {h.det_A}, expected 1")
    (a, b), (c, d) = h.A
    gamma = RationalMatrix3(((a, b, 0), (c, d, 0), (0, 0, 1)))
    alpha = square_real(h.h33)
    lhs = GramForm.from_h(h)
    rhs = GramForm.from_gamma(gamma, alpha)
    if not lhs.same_as(rhs):
        raise AssertionError("factorization does not reproduce the form")
    return alpha, gamma


def _basis_with_first_column(m: int, k: int) -> Matrix:
    """An integer matrix of determinant 1 whose first column is (m, k), gcd(m, k) = 1."""
    # extended Euclid: m s - k r = 1
    old_r, r = m, k
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    g = old_r
    if g < 0:
        old_s, old_t, g = -old_s, -old_t, -g
    if g != 1:
        raise ValueError("first column must be primitive")
    # m old_s + k old_t = 1
    return ((Fraction(m), Fraction(-old_t)), (Fraction(k), Fraction(old_s)))


def _sqrt_rational(x: Fraction) -> Fraction | None:
    if x < 0 or not is_square(x.numerator) or not is_square(x.denominator):
        return None
    return Fraction(isqrt(x.numerator), isqrt(x.denominator))


def binary_witness(a, b, c, search: int = 12):
    """Rational A with |A (x, y)|^2 = a x^2 + b x y + c y^2, or raise NotReducible.

    Such A exists exactly when the binary form is rationally equivalent to
    x^2 + y^2, which needs det = ac - b^2/4 to be a rational square.  The
    first column is found from a small primitive vector e with f(e) a sum
    of two rational squares.
    """
    a, b, c = (as_rational(t, "coefficient") for t in (a, b, c))
    det = a * c - b * b / 4
    if a <= 0 or det <= 0:
        raise NotReducible("the binary part must be positive definite")
    root = _sqrt_rational(det)
    if root is None:
        raise NotReducible(
            f"det = {det} is not a rational square, so the binary part is not rationally equivalent to x^2 + y^2"
        )
    F = ((a, b / 2), (b / 2, c))
    candidates = sorted(
        ((m, k) for m in range(-search, search + 1) for k in range(0, search + 1) if gcd(m, k) == 1 and (k > 0 or m > 0)),
        key=lambda e: (max(abs(e[0]), abs(e[1])), e),
    )
    for m, k in candidates:
        P = _basis_with_first_column(m, k)
        Fp = _mul(_mul(_transpose(P), F), P)
        rep = rational_two_squares(Fp[0][0])
        if rep is None:
            continue
        u1, u2 = rep
        a1, b1 = Fp[0][0], Fp[0][1]
        t = root / a1
        w1, w2 = b1 / a1 * u1 - t * u2, b1 / a1 * u2 + t * u1
        Ap = ((u1, w1), (u2, w2))
        # undo the change of basis: A = A' P^-1
        (p, q), (r, s) = P
        Pinv = ((s, -q), (-r, p))
        A = _mul(Ap, Pinv)
        if _mul(_transpose(A), A) != F:
            raise AssertionError("binary witness does not reproduce the form")
        return A
    raise NotReducible(f"no vector with |coordinates| <= {search} represents a sum of two rational squares")


def reduce_binary(a, b, c, beta):
    """Write a x^2 + b x y + c y^2 - beta^2 z^2 as Q_alpha'(gamma x) with gamma in SL(3, Q).

    Returns (alpha', gamma) with alpha' = beta^2 det(A)^2.
    """
    alpha = square_real(beta)
    if is_rational(alpha):
        raise DomainError(f"beta^2 = {describe(alpha)} is rational")
    A = binary_witness(a, b, c)
    d = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    gamma = RationalMatrix3(((A[0][0], A[0][1], 0), (A[1][0], A[1][1], 0), (0, 0, 1 / d)))
    alpha2 = scale_real(alpha, d * d)
    lhs = GramForm.binary(a, b, c, alpha)
    rhs = GramForm.from_gamma(gamma, alpha2)
    # rational parts agree exactly; the alpha parts agree after rescaling
    if lhs.G0 != rhs.G0 or _scale_matrix(rhs.G1, d * d) != lhs.G1:
        raise AssertionError("binary reduction does not reproduce the form")
    return alpha2, gamma


def _scale_matrix(G: Matrix, k: Fraction) -> Matrix:
    return tuple(tuple(x * k for x in row) for row in G)


def reduce_sl3q(
    gamma: RationalMatrix3,
    alpha,
    epsilon,
    *,
    profile: DiophantineProfile | None = None,
    budget: int | None = None,
    **solve_options,
) -> Solution:
    """Solve |Q(v)| <= eps for Q(x) = Q_alpha(gamma x) with gamma in SL(3, Q)."""
    if gamma.det != 1:
        raise NotUnimodular(f"det(gamma) = {gamma.det}, expected 1")
    eps = as_rational(epsilon, "epsilon")
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    form = TernaryForm(alpha)
    inv = gamma.inverse()
    scale = inv.denominator_lcm()
    inner_eps = eps / (scale * scale)
    inner = solve(form, profile, inner_eps, budget=budget, **solve_options)
    w = inner.v
    v1f = tuple(scale * x for x in inv.apply(w))
    if any(x.denominator != 1 for x in v1f):
        raise AssertionError("a gamma^-1 w is not integral")
    v1 = tuple(int(x) for x in v1f)
    gram = GramForm.from_gamma(gamma, form.alpha)
    value, exact = _certify_gram(gram, v1, eps, budget)
    # round trip: Q(v1) = scale^2 Q_alpha(w)
    if exact is not None and inner.exact is not None:
        round_trip = exact == inner.exact * (scale * scale)
    else:
        round_trip = value.overlaps(inner.value * (scale * scale))
    if not round_trip:
        raise AssertionError("reduced value does not match the scaled inner value")
    sol = Solution(v1, value, eps, "reduced", "reduced", inner.n, inner.a, inner.profile, exact)
    sol.extra.update(
        {
            "scale": scale,
            "inner_epsilon": str(inner_eps),
            "gamma": gamma.to_json(),
            "inner": inner.certificate(),
            "round_trip": round_trip,
            "w": [_json_int(c) for c in w],
        }
    )
    return sol


def _certify_gram(gram: GramForm, v, eps: Fraction, budget):
    exact = gram.exact_value(v)
    if exact is not None:
        if not ((eps - exact).sign() >= 0 and (eps + exact).sign() >= 0):
            raise AssertionError("reduced vector is not a solution")
        bits = max(abs(x).bit_length() for x in v)
        return exact._enclose(128 + 2 * bits), exact
    limit = precision_budget(budget)
    prec = 128 + 2 * max(abs(x).bit_length() for x in v) + eps.denominator.bit_length()
    while True:
        val = gram.enclose(v, prec)
        if val.certainly_ge(-eps) and val.certainly_le(eps):
            return val, None
        if val.certainly_gt(eps) or val.certainly_lt(-eps) or prec >= limit:
            raise AssertionError("reduced vector could not be certified")
        prec = min(2 * prec, limit)


def reduce_h(h: HMatrix, epsilon, **options) -> Solution:
    """Solve |Q_0(h v)| <= eps for h = [[A, 0], [0, h33]]."""
    alpha, gamma = factor_h(h)
    sol = reduce_sl3q(gamma, alpha, epsilon, **options)
    sol.extra["h33"] = describe(h.h33)
    return sol
