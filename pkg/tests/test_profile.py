from __future__ import annotations

import random
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import n1_direct, random_surd, surd_decimal
from oppenheim.cf import expand
from oppenheim.errors import InvalidProfile
from oppenheim.profile import (
    ALGEBRAIC,
    EMPIRICAL,
    QUADRATIC,
    USER,
    DiophantineProfile,
    ceil_pow,
    empirical_mu,
    estimate_C,
    n1_of,
    profile_for,
    schedule_N,
)
from oppenheim.reals import DecimalOracle, QuadraticSurd, SqrtOf

PHI = QuadraticSurd.of(Fraction(1, 2), Fraction(1, 2), 5)
SQRT2 = QuadraticSurd.of(0, 1, 2)


def eta_profile(eta: Fraction) -> DiophantineProfile:
    # theta = (1 + eta) / (1 - eta), realised with mu = 2
    theta = (1 + eta) / (1 - eta)
    return DiophantineProfile(Fraction(2), theta - 1, USER)


def test_default_profiles():
    p = profile_for(SQRT2, with_C=False)
    assert (p.mu, p.theta, p.eta, p.provenance) == (2, Fraction(3, 2), Fraction(1, 5), QUADRATIC)
    p = profile_for(SqrtOf(SQRT2), with_C=False)
    assert (p.theta, p.eta, p.provenance) == (Fraction(3, 2), Fraction(1, 5), ALGEBRAIC)
    p = profile_for(PHI, sigma=1, mu=2, with_C=False)
    assert (p.theta, p.eta, p.provenance) == (2, Fraction(1, 3), USER)


def test_mu_below_two_is_rejected():
    with pytest.raises(InvalidProfile):
        profile_for(SQRT2, mu=Fraction(3, 2))
    with pytest.raises(InvalidProfile):
        profile_for(SQRT2, sigma=0)


def test_empirical_mu_from_large_quotient():
    # [1; 2, 1000000, 1, 1, ...]: q_2 = 2000001 after q_1 = 2
    x = Fraction(1) + 1 / (Fraction(2) + 1 / (Fraction(1000000) + 1 / (Fraction(1) + 1 / PHI._enclose(200).mid)))

    def digits(k):
        with localcontext() as ctx:
            ctx.prec = k + 20
            return str(Decimal(x.numerator) / Decimal(x.denominator))[: k + 2]

    beta = DecimalOracle(digits, label="big-quotient")
    p = profile_for(beta, horizon=6, with_C=False)
    assert p.provenance == EMPIRICAL
    cf = expand(beta, 7)
    assert cf.quotients[:3] == (1, 2, 1000000)
    import math

    direct = 1 + math.log(cf.q(2)) / math.log(cf.q(1))
    assert p.mu == empirical_mu(cf)
    assert 0 <= p.mu - Fraction(direct) < Fraction(1, 1000)


@pytest.mark.parametrize(
    "eta,q,expected",
    [(Fraction(1, 5), 32, 16), (Fraction(1, 3), 8, 4), (Fraction(1, 5), 1501, 348)],
)
def test_schedule_examples(eta, q, expected):
    assert schedule_N(eta_profile(eta), q) == expected


@given(st.integers(min_value=1, max_value=10**12), st.fractions(min_value=0, max_value=3, max_denominator=50))
def test_ceil_pow_brackets(q, e):
    n = ceil_pow(q, e)
    a, b = e.numerator, e.denominator
    assert n ** b >= q ** a
    assert n == 1 or (n - 1) ** b < q ** a


@given(st.integers(min_value=1, max_value=10**9), st.integers(min_value=1, max_value=10**9))
def test_schedule_is_monotone(q1, q2):
    p = eta_profile(Fraction(1, 5))
    lo, hi = sorted((q1, q2))
    assert 1 <= schedule_N(p, lo) <= schedule_N(p, hi)


@pytest.mark.parametrize(
    "eta,eps,expected",
    [(Fraction(1), Fraction(1, 2), 3), (Fraction(1, 5), Fraction(1, 100), 35), (Fraction(1, 3), Fraction(1, 10), 11)],
)
def test_n1_examples(eta, eps, expected):
    # eta = 1 is outside profiles built from mu and sigma, so use a stand-in
    prof = eta_profile(eta) if eta < 1 else type("P", (), {"eta": Fraction(1)})()
    assert n1_of(prof, eps) == expected


@given(st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=60))
def test_theta_eta_identity(eta):
    p = eta_profile(eta)
    assert p.theta > 1 and 0 < p.eta < 1
    assert (1 - p.eta) * p.theta - 1 == p.eta
    assert 1 - p.eta == 2 / (p.theta + 1)


@given(
    st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=30),
    st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=30),
    st.integers(min_value=1, max_value=10**8),
    st.integers(min_value=1, max_value=10**8),
)
def test_n1_monotonicity(e1, e2, k1, k2):
    lo_eta, hi_eta = sorted((e1, e2))
    eps = Fraction(1, k1 + 1)
    assert n1_of(eta_profile(lo_eta), eps) >= n1_of(eta_profile(hi_eta), eps)
    small, big = sorted((Fraction(1, k1 + 1), Fraction(1, k2 + 1)))
    assert n1_of(eta_profile(lo_eta), small) >= n1_of(eta_profile(lo_eta), big)


def test_n1_matches_direct_evaluation_on_grid():
    etas = [Fraction(k, 21) for k in range(1, 21)]
    epss = [Fraction(1, 10**k) for k in range(1, 11)] + [Fraction(1, 2**k) for k in range(1, 11)]
    for eta in etas:
        for eps in epss:
            assert n1_of(eta_profile(eta), eps) == n1_direct(eta, eps)


def _scan_min(s: QuadraticSurd, theta: Fraction, qmax: int) -> Decimal:
    beta = surd_decimal(s, 80)
    best = None
    with localcontext() as ctx:
        ctx.prec = 80
        th = Decimal(theta.numerator) / Decimal(theta.denominator)
        for q in range(1, qmax + 1):
            t = beta * q
            dist = abs(t - t.to_integral_value())
            val = (Decimal(q).ln() * th).exp() * dist
            best = val if best is None or val < best else best
    return best


@pytest.mark.parametrize("seed", range(4))
def test_estimate_C_is_a_lower_bound(seed):
    s = random_surd(random.Random(seed))
    theta = Fraction(3, 2)
    cf = expand(s, 40)
    horizon = max(n for n in range(1, 40) if cf.q(n + 1) <= 10**4)
    c = estimate_C(s, theta, horizon, cf)
    assert Decimal(c.numerator) / Decimal(c.denominator) <= _scan_min(s, theta, 10**4)


def test_estimate_C_golden_ratio_includes_q_one():
    c = estimate_C(PHI, 2, 12)
    assert abs(float(c) - (3 - 5**0.5) / 2) < 1e-6


def test_estimate_C_horizon_one():
    c = estimate_C(SQRT2, 2, 1)
    # min over q_0 = 1 and q_1 = 2
    assert abs(float(c) - min(2**0.5 - 1, 4 * (3 - 2 * 2**0.5))) < 1e-6
