from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from oracles import surd_decimal
from oppenheim.core import TernaryForm
from oppenheim.errors import BadGenerator, DomainError
from oppenheim.profile import profile_for
from oppenheim.reals import QuadraticSurd
from oppenheim.special import (
    dirichlet_gap,
    liouville_generator,
    liouville_solve,
    silver_convergents,
    silver_mean,
    watson_form_value,
    watson_solve,
)

PHI = QuadraticSurd.of(Fraction(1, 2), Fraction(1, 2), 5)
SQRT2 = QuadraticSurd.of(0, 1, 2)


def liouville_decimal(digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits + 10
        total = Decimal(0)
        k = 1
        while math.factorial(k) <= digits + 5:
            total += Decimal(10) ** -math.factorial(k)
            k += 1
        return total


def test_silver_means():
    assert silver_mean(1) == PHI
    assert silver_mean(2) == QuadraticSurd.of(1, 1, 2)
    ps, qs = silver_convergents(1, 6)
    assert qs == [1, 1, 2, 3, 5, 8] and ps == [1, 2, 3, 5, 8, 13]


@pytest.mark.parametrize(
    "a,n,v,value",
    [
        (1, 1, (2, 1, 1), QuadraticSurd.of(3, 0, 5) - PHI * 2),
        (1, 3, (5, 3, 2), QuadraticSurd.of(21, 0, 5) - PHI * 13),
    ],
)
def test_watson_examples(a, n, v, value):
    res = watson_solve(a, n)
    assert res.v == v and res.value == value and res.holds


def test_watson_silver_ratio():
    res = watson_solve(2, 2)
    assert res.v == (12, 5, 2)
    assert abs(res.value) < Fraction(1, 10)
    assert res.holds


def test_watson_value_matches_decimal():
    alpha = surd_decimal(PHI)
    for n in range(1, 20):
        res = watson_solve(1, n)
        x, y, z = res.v
        with localcontext() as ctx:
            ctx.prec = 200
            ref = x * x - alpha * y * y - alpha * alpha * z * z
        assert abs(Decimal(float(res.value)) - ref) < Decimal("1e-12")


def test_watson_decay_stays_bounded():
    for a in (1, 2, 3):
        ps, qs = silver_convergents(a, 28)
        for n in range(1, 26):
            res = watson_solve(a, n)
            assert res.holds
            assert (abs(res.value) * (qs[n] * qs[n - 1]) - 1).sign() < 0


def test_watson_rejects_n_zero():
    with pytest.raises(IndexError):
        watson_solve(1, 0)


def test_watson_form_is_the_named_polynomial():
    alpha = silver_mean(3)
    assert watson_form_value(3, (1, 1, 1)) == QuadraticSurd.of(1, 0, 13) - alpha * 3 - alpha * alpha


def test_liouville_generator_contract():
    L = liouville_decimal(800)
    for N in range(0, 3):
        p, q = liouville_generator(N)
        with localcontext() as ctx:
            ctx.prec = 900
            err = abs(q * L - p)
            assert err * Decimal(q) ** (N + 2) < 1


@pytest.mark.parametrize("eps", [Fraction(1, 10), Fraction(1, 100)])
def test_liouville_solve_small(eps):
    sol = liouville_solve(liouville_generator, eps)
    p, y, q = sol.v
    assert y == 0 and q >= 2
    assert sol.extra["sufficient_condition"]["holds"]
    if q.bit_length() < 200:
        L = liouville_decimal(1000)
        with localcontext() as ctx:
            ctx.prec = 1100
            assert abs(p * p - L * L * q * q) <= Decimal(eps.numerator) / eps.denominator


def test_liouville_large_epsilon_uses_n_zero():
    sol = liouville_solve(lambda n: (3, 2), 10, SQRT2)
    assert sol.n == 0 and sol.v == (3, 0, 2)


def test_liouville_rejects_bad_generator():
    from oppenheim.cf import expand

    cf = expand(SQRT2, 60)

    def convergents(n):
        k = 10 + 2 * n
        return cf.p(k), cf.q(k)

    with pytest.raises(BadGenerator):
        liouville_solve(convergents, Fraction(1, 1000), SQRT2)


def test_liouville_rejects_q_one():
    with pytest.raises(BadGenerator):
        liouville_solve(lambda n: (0, 1), Fraction(1, 10))


@pytest.mark.parametrize("N", [2, 10, 100])
def test_dirichlet_gap_upper_bracket(N):
    form = TernaryForm(SQRT2)
    rep = dirichlet_gap(form, N, Fraction(1, 1000), profile_for(form.beta))
    assert rep.below_upper
    assert rep.abs_above_epsilon
    beta = surd_decimal(SQRT2).sqrt()
    p, _, q = rep.u0
    with localcontext() as ctx:
        ctx.prec = 200
        val = p * p - beta * beta * q * q
        assert (val > 0) == rep.positive
        assert abs(val) < 2 * beta + Decimal(1) / (N * N)
    if rep.lower is not None:
        assert rep.lower.hi <= abs(rep.value).lo


def test_dirichlet_gap_golden_square():
    form = TernaryForm.from_beta(PHI)
    rep = dirichlet_gap(form, 5)
    p, _, q = rep.u0
    assert (p, q) == (8, 5)
    assert rep.below_upper
    exact = form.exact_value(rep.u0)
    assert exact == QuadraticSurd.of(p * p, 0, 5) - PHI * PHI * (q * q)


def test_dirichlet_gap_needs_N_two():
    with pytest.raises(DomainError):
        dirichlet_gap(TernaryForm(SQRT2), 1)
