"""Diophantine profiles: exponents, schedules and index horizons."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from ._numth import iroot
from .cf import ContinuedFraction, error_enclosure, expand
from .errors import InvalidProfile, PrecisionExhausted
from .intervals import raw_to_fraction
from .reals import QuadraticSurd, SqrtOf, as_rational

USER = "UserSupplied"
QUADRATIC = "DefaultQuadratic"
ALGEBRAIC = "DefaultAlgebraic"
EMPIRICAL = "Empirical"

# exact integer powers are used while the intermediate stays below this size
_EXACT_BITS = 1 << 22


@dataclass(frozen=True)
class DiophantineProfile:
    """Irrationality data for beta together with the derived exponents.

    theta = mu - 1 + sigma and eta = (theta - 1) / (theta + 1) are kept as
    exact rationals.  ``C_lower`` is a certified lower bound for
    q^theta * ||q beta|| over q < q_{C_horizon + 1}; it is informative
    only and never used to certify a solution.
    """

    mu: Fraction
    sigma: Fraction
    provenance: str
    C_lower: Fraction | None = None
    C_horizon: int | None = None

    def __post_init__(self):
        if self.mu < 2:
            raise InvalidProfile(f"mu must be at least 2, got {self.mu}")
        if self.sigma <= 0:
            raise InvalidProfile(f"sigma must be positive, got {self.sigma}")

    @property
    def theta(self) -> Fraction:
        return self.mu - 1 + self.sigma

    @property
    def eta(self) -> Fraction:
        t = self.theta
        return (t - 1) / (t + 1)

    def to_json(self) -> dict:
        return {
            "mu": str(self.mu),
            "sigma": str(self.sigma),
            "theta": str(self.theta),
            "eta": str(self.eta),
            "C_horizon": self.C_horizon,
            "C_lower": None if self.C_lower is None else str(self.C_lower),
            "provenance": self.provenance,
        }


def _is_algebraic(beta) -> bool:
    if isinstance(beta, QuadraticSurd):
        return True
    if isinstance(beta, SqrtOf):
        return _is_algebraic(beta.inner)
    return False


def empirical_mu(cf: ContinuedFraction) -> Fraction:
    """1 + max ln q_{n+1} / ln q_n over the certified range, rounded up to 1/1000."""
    best = 1.0
    for n in range(1, cf.certified_to):
        q, q1 = cf.q(n), cf.q(n + 1)
        if q >= 2:
            best = max(best, float(mpmath.log(q1) / mpmath.log(q)))
    mu = Fraction(math.ceil((1 + best) * 1000), 1000)
    return max(mu, Fraction(2))


def profile_for(
    beta,
    sigma=Fraction(1, 2),
    mu=None,
    *,
    horizon: int = 24,
    with_C: bool = True,
    budget: int | None = None,
) -> DiophantineProfile:
    """Choose mu for beta and build the profile.

    A user value wins.  Quadratic surds get mu = 2 by Lagrange's theorem and
    square roots of surds get mu = 2 by Roth's theorem.  Anything else falls
    back to an empirical estimate from the first ``horizon`` convergents.
    """
    sigma = as_rational(sigma, "sigma")
    if sigma <= 0:
        raise InvalidProfile(f"sigma must be positive, got {sigma}")
    cf = None
    if mu is not None:
        mu_val, prov = as_rational(mu, "mu"), USER
    elif isinstance(beta, QuadraticSurd):
        mu_val, prov = Fraction(2), QUADRATIC
    elif _is_algebraic(beta):
        mu_val, prov = Fraction(2), ALGEBRAIC
    else:
        cf = expand(beta, horizon + 1, budget)
        mu_val, prov = empirical_mu(cf), EMPIRICAL
    if mu_val < 2:
        raise InvalidProfile(f"mu must be at least 2, got {mu_val}")
    c_lower = None
    if with_C:
        try:
            c_lower = estimate_C(beta, mu_val - 1 + sigma, horizon, cf, budget)
        except PrecisionExhausted:
            c_lower = None
    return DiophantineProfile(mu_val, sigma, prov, c_lower, horizon if c_lower is not None else None)


def pow_lower(q: int, e: Fraction, frac_bits: int = 64) -> Fraction:
    """A rational lower bound for q**e, within 2**-frac_bits relatively."""
    a, b = e.numerator, e.denominator
    if a * q.bit_length() + b * frac_bits <= _EXACT_BITS and b <= 4096:
        return Fraction(iroot(q ** a << (b * frac_bits), b), 1 << frac_bits)
    with mpmath.workprec(q.bit_length() + 2 * frac_bits):
        y = mpmath.power(q, mpmath.mpf(a) / b) * (1 - mpmath.mpf(2) ** (-frac_bits))
        return raw_to_fraction(y._mpf_)


def pow_upper(q: int, e: Fraction, frac_bits: int = 64) -> Fraction:
    """A rational upper bound for q**e, within 2**-frac_bits relatively."""
    a, b = e.numerator, e.denominator
    if a * q.bit_length() + b * frac_bits <= _EXACT_BITS and b <= 4096:
        return Fraction(iroot(q ** a << (b * frac_bits), b) + 1, 1 << frac_bits)
    with mpmath.workprec(q.bit_length() + 2 * frac_bits):
        y = mpmath.power(q, mpmath.mpf(a) / b) * (1 + mpmath.mpf(2) ** (-frac_bits))
        return raw_to_fraction(y._mpf_)


def estimate_C(beta, theta, horizon: int = 24, cf: ContinuedFraction | None = None, budget=None) -> Fraction:
    """Certified lower bound for inf q^theta * ||q beta|| over q < q_{horizon+1}.

    By the best-approximation property of convergents the infimum over that
    range is attained at a convergent denominator, so the minimum over
    q_0 .. q_horizon bounds it from below.
    """
    theta = as_rational(theta, "theta")
    if cf is None or cf.certified_to < horizon + 1:
        cf = expand(beta, horizon + 1, budget)
    best = None
    for n in range(0, horizon + 1):
        p, q = cf.p(n), cf.q(n)
        if n + 1 <= cf.certified_to and cf.q(n + 1) == q:
            continue
        err = abs(error_enclosure(beta, p, q, budget, rel_bits=24))
        val = pow_lower(q, theta) * err.lo * q
        best = val if best is None or val < best else best
    return best


def ceil_pow(q: int, e: Fraction) -> int:
    """Exact ceil(q ** e) for q >= 1 and rational e >= 0."""
    if q < 1:
        raise ValueError("q must be positive")
    a, b = e.numerator, e.denominator
    if a < 0:
        raise ValueError("exponent must be non-negative")
    exact = a * q.bit_length() <= _EXACT_BITS
    if exact and b <= 4096:
        t = q ** a
        r = iroot(t, b)
        return r if r ** b == t else r + 1
    with mpmath.workprec(int(q.bit_length() * e) + 96):
        y = mpmath.power(q, mpmath.mpf(a) / b)
        n = int(mpmath.ceil(y))
    if exact:
        t = q ** a
        while n ** b < t:
            n += 1
        while n > 1 and (n - 1) ** b >= t:
            n -= 1
        return n
    if abs(y - mpmath.nint(y)) < mpmath.mpf(2) ** -32:
        raise PrecisionExhausted("schedule value too close to an integer to round safely")
    return n


def schedule_N(profile: DiophantineProfile, q: int) -> int:
    """N_n = ceil(q^(1 - eta)) for the even denominator q = q_{2n}."""
    return ceil_pow(q, 1 - profile.eta)


def n1_of(profile: DiophantineProfile, epsilon) -> int:
    """n_1(eps) = 2 + floor(|ln eps| / (eta ln 2)), computed exactly."""
    eps = as_rational(epsilon, "epsilon")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    eta = profile.eta
    if eta <= 0:
        raise InvalidProfile("eta must be positive")
    ratio = eps if eps >= 1 else 1 / eps
    u, v = ratio.denominator, ratio.numerator  # ratio = v / u >= 1
    a, b = eta.numerator, eta.denominator
    # largest k with 2^(k a) u^b <= v^b
    k = max(0, int((math.log2(v) - math.log2(u)) * b / a))
    ub, vb = u ** b, v ** b
    while k > 0 and (ub << (k * a)) > vb:
        k -= 1
    while (ub << ((k + 1) * a)) <= vb:
        k += 1
    return 2 + k
