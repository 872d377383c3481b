from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import random_unimodular
from oppenheim.equivalence import (
    GramForm,
    HMatrix,
    RationalMatrix3,
    binary_witness,
    factor_h,
    reduce_binary,
    reduce_h,
    reduce_sl3q,
)
from oppenheim.errors import DomainError, NotReducible, NotUnimodular
from oppenheim.reals import QuadraticSurd

SQRT2 = QuadraticSurd.of(0, 1, 2)
small = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def test_matrix_inverse_and_det():
    g = RationalMatrix3(((1, Fraction(1, 2), 0), (0, 1, Fraction(1, 3)), (0, 0, 1)))
    assert g.det == 1
    assert (g @ g.inverse()).entries == RationalMatrix3.identity().entries
    assert g.inverse().denominator_lcm() == 6


def test_singular_matrix_is_rejected():
    with pytest.raises(DomainError):
        RationalMatrix3(((1, 2, 3), (2, 4, 6), (0, 0, 1))).inverse()


def test_json_round_trip():
    g = RationalMatrix3(((1, Fraction(1, 2), 0), (0, 1, 0), (0, 0, 1)))
    import json

    assert RationalMatrix3.from_json(json.dumps(g.to_json())).entries == g.entries


@given(st.integers(min_value=0, max_value=10**6))
def test_gram_form_matches_direct_evaluation(seed):
    rng = random.Random(seed)
    g = RationalMatrix3(random_unimodular(rng))
    gram = GramForm.from_gamma(g, SQRT2)
    v = tuple(rng.randint(-20, 20) for _ in range(3))
    x, y, z = g.apply(v)
    assert gram.exact_value(v) == QuadraticSurd.of(x * x + y * y, 0, 2) - SQRT2 * (z * z)


def test_shear_example():
    g = RationalMatrix3(((1, Fraction(1, 2), 0), (0, 1, 0), (0, 0, 1)))
    sol = reduce_sl3q(g, SQRT2, Fraction(1, 20))
    assert sol.extra["scale"] == 2
    assert sol.extra["inner_epsilon"] == "1/80"
    assert sol.extra["round_trip"]


@pytest.mark.parametrize("seed", range(5))
def test_reduced_vectors_are_integral_and_small(seed):
    rng = random.Random(seed)
    g = RationalMatrix3(random_unimodular(rng))
    eps = Fraction(1, 50)
    sol = reduce_sl3q(g, SQRT2, eps)
    scale = sol.extra["scale"]
    assert all(x.denominator == 1 for row in g.inverse().entries for x in (scale * y for y in row))
    assert Fraction(sol.extra["inner_epsilon"]) == eps / scale**2
    w = g.apply(sol.v)
    x, y, z = w
    val = QuadraticSurd.of(x * x + y * y, 0, 2) - SQRT2 * (z * z)
    assert val == sol.exact and abs(val) <= eps


def test_non_unimodular_gamma_is_rejected():
    g = RationalMatrix3(((2, 0, 0), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(NotUnimodular):
        reduce_sl3q(g, SQRT2, Fraction(1, 10))


def test_h_factorization():
    h = HMatrix(((Fraction(3, 5), Fraction(-4, 5)), (Fraction(4, 5), Fraction(3, 5))), QuadraticSurd.of(1, 1, 2))
    alpha, gamma = factor_h(h)
    assert alpha == QuadraticSurd.of(3, 2, 2)
    sol = reduce_h(h, Fraction(1, 10))
    assert abs(sol.exact) <= Fraction(1, 10)


def test_h_with_rational_corner_is_rejected():
    with pytest.raises(DomainError):
        HMatrix(((1, 0), (0, 1)), Fraction(2))


def test_h_with_det_minus_one_is_rejected():
    h = HMatrix(((0, 1), (1, 0)), SQRT2)
    with pytest.raises(NotUnimodular):
        factor_h(h)


@pytest.mark.parametrize("abc", [(1, 0, 1), (2, 2, 1), (5, 4, 1), (2, 0, 2), (Fraction(1, 2), 0, 2)])
def test_binary_witness_reproduces_form(abc):
    a, b, c = map(Fraction, abc)
    A = binary_witness(a, b, c)
    for x, y in [(1, 0), (0, 1), (2, -3), (7, 5)]:
        u = A[0][0] * x + A[0][1] * y
        w = A[1][0] * x + A[1][1] * y
        assert u * u + w * w == a * x * x + b * x * y + c * y * y


def test_binary_with_nonsquare_determinant_is_not_reducible():
    with pytest.raises(NotReducible, match="3/4"):
        binary_witness(1, 1, 1)


def test_reduce_binary_gives_sl3q():
    alpha2, gamma = reduce_binary(2, 2, 1, QuadraticSurd.of(1, 1, 2))
    assert gamma.det == 1
    assert alpha2 is not None
    with pytest.raises(DomainError):
        reduce_binary(1, 0, 1, QuadraticSurd.of(0, 1, 2))
