"""Special constructions: silver-mean forms, Liouville numbers, and the Dirichlet gap."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath.libmp import MPZ, from_int

from .cf import dirichlet_point
from .core import Solution, TernaryForm, _json_int
from .errors import BadGenerator, DomainError
from .intervals import Interval, decimal_bound
from .cf import expand
from .profile import DiophantineProfile, pow_upper
from .reals import (
    LIOUVILLE,
    QuadraticSurd,
    as_rational,
    evaluate,
    precision_budget,
)

# ---------------------------------------------------------------------------
# silver means


def silver_mean(a: int) -> QuadraticSurd:
    """alpha = [a; a, a, ...] = (a + sqrt(a^2 + 4)) / 2."""
    if a < 1:
        raise DomainError("a must be a positive integer")
    return QuadraticSurd.of(Fraction(a, 2), Fraction(1, 2), a * a + 4)


def silver_convergents(a: int, count: int) -> tuple[list[int], list[int]]:
    """p_0..p_{count-1} and q_0..q_{count-1} for [a; a, a, ...]."""
    ps, qs = [a], [1]
    p_prev, q_prev = 1, 0
    while len(ps) < count:
        p, q = a * ps[-1] + p_prev, a * qs[-1] + q_prev
        p_prev, q_prev = ps[-1], qs[-1]
        ps.append(p)
        qs.append(q)
    return ps, qs


@dataclass(frozen=True)
class WatsonResult:
    a: int
    n: int
    v: tuple[int, int, int]
    value: QuadraticSurd  # W(v), exact
    bound: QuadraticSurd  # (alpha + conj) / (q_n q_{n-1} B_n B_{n-1}), exact

    @property
    def holds(self) -> bool:
        return (self.bound - abs(self.value)).sign() >= 0

    def bound_interval(self, precision: int = 128) -> Interval:
        return self.bound._enclose(precision)

    def value_interval(self, precision: int = 128) -> Interval:
        return self.value._enclose(precision)

    def to_json(self) -> dict:
        val = self.value_interval()
        bnd = self.bound_interval()
        return {
            "a": self.a,
            "n": self.n,
            "v": list(self.v),
            "path": "watson",
            "value_exact": self.value.label,
            "value_lo": decimal_bound(val.coarse_lo(96), 20, upward=False),
            "value_hi": decimal_bound(val.coarse_hi(96), 20, upward=True),
            "bound_exact": self.bound.label,
            "bound_lo": decimal_bound(bnd.coarse_lo(96), 20, upward=False),
            "bound_hi": decimal_bound(bnd.coarse_hi(96), 20, upward=True),
            "holds": self.holds,
        }


def watson_form_value(a: int, v) -> QuadraticSurd:
    """W(v) = x^2 - a alpha y^2 - alpha^2 z^2, exactly."""
    alpha = silver_mean(a)
    x, y, z = v
    return alpha * (-a * y * y) - alpha * alpha * (z * z) + x * x


def watson_solve(a: int, n: int) -> WatsonResult:
    """v_n = (q_{n+1}, q_n, q_{n-1}) with |W(v_n)| and its bound, both exact."""
    if n < 1:
        raise IndexError("watson_solve needs n >= 1 (q_{-1} is not used)")
    alpha = silver_mean(a)
    conj = alpha.conjugate()
    ps, qs = silver_convergents(a, n + 2)
    v = (qs[n + 1], qs[n], qs[n - 1])
    value = watson_form_value(a, v)
    B_n = abs(conj - Fraction(ps[n], qs[n]))
    B_m = abs(conj - Fraction(ps[n - 1], qs[n - 1]))
    bound = (alpha + conj) / (B_n * B_m * (qs[n] * qs[n - 1]))
    return WatsonResult(a, n, v, value, bound)


# ---------------------------------------------------------------------------
# Liouville numbers


def liouville_generator(N: int) -> tuple[int, int]:
    """Truncation of sum 10^-k! with enough terms that |q beta - p| < q^-(N+2).

    Truncating after K terms gives q = 10^K! and an error below
    2 * 10^-(K+1)!, so K = N + 3 satisfies the contract.
    """
    K = max(N + 3, 1)
    top = math.factorial(K)
    q = MPZ(10) ** top
    p = sum(MPZ(10) ** (top - math.factorial(k)) for k in range(1, K + 1))
    return int(p), int(q)


def _liouville_n(beta_upper: Fraction, eps: Fraction) -> int:
    n = 0
    while beta_upper / (1 << n) + Fraction(1, 1 << (2 * (n + 2))) > eps:
        n += 1
    return n


def liouville_solve(beta_approx, epsilon, beta=LIOUVILLE, *, budget: int | None = None) -> Solution:
    """Solve |Q(v)| <= eps for a Liouville beta from a super-approximation generator.

    Picks the least n with 2^-n beta + 2^-2(n+2) <= eps, asks the generator
    for (p, q) with |q beta - p| < q^-(n+2), checks that contract, and
    certifies |p^2 - beta^2 q^2| = |p - beta q| (p + beta q) <= eps.
    """
    eps = as_rational(epsilon, "epsilon")
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    beta_hi = evaluate(beta, 64).coarse_hi()
    n = _liouville_n(beta_hi, eps)
    p, q = beta_approx(n)
    if q < 2:
        raise BadGenerator(f"generator returned q = {q} < 2")
    # enclose r = q beta - p absolutely to well below q^-(n+2)
    qbits = q.bit_length()
    need = (n + 3) * qbits + 64
    limit = max(precision_budget(budget), need)
    prec = need
    bound_exp = n + 2  # contract: |r| q^(n+2) < 1
    # q^(n+2) held exactly; products round at the working precision
    qpow = from_int(MPZ(q) ** bound_exp)
    scale = Interval._raw(qpow, qpow, limit)
    while True:
        r = evaluate(beta, prec) * q - p
        scaled = abs(r) * scale
        if scaled.certainly_lt(1):
            break
        if scaled.certainly_ge(1):
            raise BadGenerator(f"|q beta - p| >= q^-{bound_exp} for the generator output at N={n}")
        if prec >= limit:
            raise BadGenerator("generator contract could not be certified within budget")
        prec = min(2 * prec, limit)
    # Q(p, 0, q) = p^2 - beta^2 q^2 = -r (2p + r)
    value = -(r * (r + 2 * p))
    if not (value.certainly_ge(-eps) and value.certainly_le(eps)):
        raise BadGenerator("generator output does not certify the requested epsilon")
    sufficient = beta_hi / (1 << n) + Fraction(1, 1 << (2 * (n + 2)))
    sol = Solution((p, 0, q), value, eps, "liouville", "liouville", n, None, None, None)
    sol.extra["sufficient_condition"] = {
        "n": n,
        "lhs_upper": decimal_bound(sufficient, 20, upward=True),
        "holds": sufficient <= eps,
    }
    sol.extra["contract_precision"] = prec
    return sol


# ---------------------------------------------------------------------------
# Dirichlet gap


@dataclass
class DirichletGapReport:
    N: int
    u0: tuple[int, int, int]
    delta: Interval  # p0 - beta q0
    value: Interval  # Q(u0)
    upper: Interval  # 2 beta + 1/N^2
    below_upper: bool  # |Q(u0)| < 2 beta + 1/N^2 certified
    positive: bool  # Q(u0) > 0 certified
    epsilon: Fraction | None
    above_epsilon: bool | None  # Q(u0) > eps certified (signed)
    abs_above_epsilon: bool | None  # |Q(u0)| > eps certified
    lower: Interval | None  # lower bracket from C_lower when available

    def to_json(self) -> dict:
        out = {
            "N": self.N,
            "u0": [_json_int(c) for c in self.u0],
            "delta_lo": decimal_bound(self.delta.coarse_lo(96), 20, upward=False),
            "delta_hi": decimal_bound(self.delta.coarse_hi(96), 20, upward=True),
            "value_lo": decimal_bound(self.value.coarse_lo(96), 20, upward=False),
            "value_hi": decimal_bound(self.value.coarse_hi(96), 20, upward=True),
            "upper_hi": decimal_bound(self.upper.coarse_hi(96), 20, upward=True),
            "below_upper": self.below_upper,
            "positive": self.positive,
            "epsilon": None if self.epsilon is None else str(self.epsilon),
            "above_epsilon": self.above_epsilon,
            "abs_above_epsilon": self.abs_above_epsilon,
        }
        if self.lower is not None:
            out["lower_lo"] = decimal_bound(self.lower.coarse_lo(96), 20, upward=False)
        return out


def dirichlet_gap(
    form: TernaryForm,
    N: int,
    epsilon=None,
    profile: DiophantineProfile | None = None,
    precision: int = 256,
) -> DirichletGapReport:
    """Certified bracket for Q(u0) at the Dirichlet point of scale N.

    Since |p0 - beta q0| <= 1/N and q0 <= N, |Q(u0)| <= (1/N)(2 beta N + 1/N).
    The sign of Q(u0) is the sign of p0 - beta q0, which alternates with the
    convergent index; it is reported as found.
    """
    if N < 2:
        raise DomainError("N must be at least 2")
    p0, q0 = dirichlet_point(form.beta, N)
    u0 = (p0, 0, q0)
    prec = max(precision, 4 * q0.bit_length() + 128)
    beta = evaluate(form.beta, prec)
    delta = Interval(p0, p0, prec) - beta * q0
    exact = form.exact_value(u0)
    value = exact._enclose(prec) if exact is not None else form.enclose(u0, prec)
    upper = beta * 2 + Fraction(1, N * N)
    below_upper = abs(value).certainly_lt(upper)
    positive = value.is_positive()
    eps = None if epsilon is None else as_rational(epsilon, "epsilon")
    above = None if eps is None else value.certainly_gt(eps)
    abs_above = None if eps is None else abs(value).certainly_gt(eps)
    lower = None
    if profile is not None and profile.C_lower is not None and profile.C_horizon is not None:
        cf = expand(form.beta, profile.C_horizon + 1)
        if q0 < cf.q(profile.C_horizon + 1):
            # |delta| > C / q0^theta, and |Q| = |delta| (2 beta q0 + delta)
            small = Interval(profile.C_lower, profile.C_lower, prec) / Interval(
                pow_upper(q0, profile.theta), pow_upper(q0, profile.theta), prec
            )
            lower = small * (beta * (2 * q0) - small)
    return DirichletGapReport(N, u0, delta, value, upper, below_upper, positive, eps, above, abs_above, lower)
