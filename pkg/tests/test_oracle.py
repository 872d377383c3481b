from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import naive_triple_min, random_surd
from oppenheim.core import TernaryForm
from oppenheim.errors import DomainError
from oppenheim.oracle import (
    brute_force_min,
    canonical,
    f_table,
    naive_min,
    solver_vs_oracle,
    watson_scaling,
)
from oppenheim.reals import QuadraticSurd, nth_root_oracle

SQRT2 = QuadraticSurd.of(0, 1, 2)
FORM = TernaryForm(SQRT2)


def test_small_box_by_hand():
    # N = 2: the candidates are 1, 2, sqrt2, |1 - sqrt2| and 2 - sqrt2
    res = brute_force_min(FORM, 2)
    assert res.exact == QuadraticSurd.of(1, -1, 2)
    assert res.best_v == (1, 0, 1)


@pytest.mark.parametrize("N", [2, 5, 10, 25])
def test_agrees_with_numpy_scan(N):
    res = brute_force_min(FORM, N)
    v, val = naive_min(FORM, N)
    assert res.best_v == v and abs(res.exact) == val


@pytest.mark.parametrize("seed", range(8))
def test_agrees_with_triple_loop_on_random_forms(seed):
    rng = random.Random(100 + seed)
    alpha = random_surd(rng)
    N = rng.randint(2, 18)
    res = brute_force_min(TernaryForm(alpha), N)
    assert abs(res.exact) == naive_triple_min(alpha, N)


@given(st.integers(min_value=2, max_value=60), st.integers(min_value=2, max_value=4))
def test_partition_does_not_change_result(N, workers):
    from oppenheim.oracle import _scan_slice, _slices, _fixed_point

    from oppenheim.oracle import _resolve

    whole = brute_force_min(FORM, N)
    lo, hi, K = _fixed_point(SQRT2, N)
    pieces = [_scan_slice((lo, hi, K, N, a, b)) for a, b in _slices(N, workers * 4)]
    found = [c for part, _ in pieces for c in part]
    top = min(c[1] for c in found)
    best, exact, _ = _resolve(FORM, [c[2] for c in found if c[0] <= top], None)
    assert (best, exact) == (whole.best_v, whole.exact)


def test_worker_processes_give_identical_result():
    a = brute_force_min(FORM, 120, workers=1)
    b = brute_force_min(FORM, 120, workers=2)
    assert (a.best_v, a.exact) == (b.best_v, b.exact)


def test_non_surd_alpha():
    f = TernaryForm(nth_root_oracle(3, 2))
    res = brute_force_min(f, 30)
    ref = brute_force_min(TernaryForm(QuadraticSurd.of(0, 1, 3)), 30)
    assert res.best_v == ref.best_v
    assert res.best_value.overlaps(ref.best_value)


def test_monotone_table():
    rows = f_table(FORM, [2, 3, 5, 8, 13, 21, 34, 55, 89])
    vals = [r.exact for r in rows]
    assert all((abs(b) - abs(a)).sign() <= 0 for a, b in zip(vals, vals[1:]))


def test_canonical_form():
    assert canonical((-3, 5, -2)) == (5, 3, 2)


def test_cap_and_small_N_are_domain_errors():
    with pytest.raises(DomainError):
        brute_force_min(FORM, 1)
    with pytest.raises(DomainError):
        brute_force_min(FORM, 50, cap=40)


def test_solver_never_beats_oracle():
    rows = solver_vs_oracle(FORM, [Fraction(1, 10), Fraction(1, 100)])
    for row in rows:
        if not row["partial"]:
            assert row["never_beats_oracle"]


def test_watson_scaling_table():
    table = watson_scaling(1, 20)
    assert table["values_nonincreasing"]
    assert all(r["holds"] for r in table["rows"])
    assert float(table["sup"]) <= 10
    with pytest.raises(DomainError):
        watson_scaling(1, 31)
