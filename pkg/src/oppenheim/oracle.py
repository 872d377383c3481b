"""Brute-force ground truth for F(N) and scaling benchmarks.

F(N) is the minimum of |x^2 + y^2 - alpha z^2| over nonzero integer
vectors with max(|x|, |y|, |z|) < N.  The value is invariant under sign
changes of each coordinate and under swapping x and y, so the search runs
over x >= y >= 0, z >= 0 only.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import isqrt

from ._numth import ceil_sqrt
from .core import Solution, TernaryForm, _json_int, solve
from .errors import DomainError, UndecidedTie
from .intervals import Interval, decimal_bound
from .profile import DiophantineProfile
from .reals import QuadraticSurd, evaluate, precision_budget
from .special import watson_solve

DEFAULT_CAP = 2000

Vector = tuple[int, int, int]


@dataclass
class OracleResult:
    """Certified minimum of |Q| over the punctured box of radius N."""

    N: int
    best_v: Vector
    best_value: Interval  # encloses Q(best_v), not its absolute value
    enumerated: int
    exact: QuadraticSurd | None = None
    ties: list = field(default_factory=list)

    @property
    def abs_value(self) -> Interval:
        return abs(self.best_value)

    def to_json(self) -> dict:
        val = self.best_value
        return {
            "N": self.N,
            "best_v": list(self.best_v),
            "value_exact": None if self.exact is None else self.exact.label,
            "value_lo": decimal_bound(val.coarse_lo(96), 20, upward=False),
            "value_hi": decimal_bound(val.coarse_hi(96), 20, upward=True),
            "enumerated": self.enumerated,
        }


def canonical(v) -> Vector:
    """Representative with x >= y >= 0 and z >= 0 of the symmetry class of v."""
    x, y, z = (abs(c) for c in v)
    return (max(x, y), min(x, y), z)


# ---------------------------------------------------------------------------
# z-slice enumeration on fixed-point enclosures


def _fixed_point(alpha, N: int) -> tuple[int, int, int]:
    """(lo, hi, K) with lo / 2^K <= alpha <= hi / 2^K."""
    K = 64 + 2 * N.bit_length()
    enc = evaluate(alpha, K + 16)
    lo = math.floor(enc.lo * (1 << K))
    hi = math.ceil(enc.hi * (1 << K))
    return lo, hi, K


def _scan_slice(args) -> tuple[list[tuple[int, int, Vector]], int]:
    """Candidates (lower, upper, v) in z-range [z0, z1) that may reach the slice minimum.

    lower and upper bound |Q(v)| * 2^K.
    """
    a_lo, a_hi, K, N, z0, z1 = args
    one = 1 << K
    best_hi = one  # |Q(1, 0, 0)| = 1
    found: list[tuple[int, int, Vector]] = []
    count = 0
    if z0 == 0:
        # z = 0: Q = x^2 + y^2 >= 1, attained at (1, 0, 0)
        found.append((one, one, (1, 0, 0)))
        count += 1
        z0 = 1
    for z in range(z0, z1):
        z2 = z * z
        # x^2 + y^2 must lie in [alpha z^2 - best, alpha z^2 + best]
        t_lo = max(0, (a_lo * z2 - best_hi) >> K)
        t_hi = -((-(a_hi * z2 + best_hi)) >> K)
        x_start = ceil_sqrt((t_lo + 1) // 2)
        x_stop = min(isqrt(t_hi), N - 1)
        for x in range(x_start, x_stop + 1):
            x2 = x * x
            r_lo = t_lo - x2
            r_hi = t_hi - x2
            if r_hi < 0:
                continue
            y_start = ceil_sqrt(r_lo) if r_lo > 0 else 0
            y_stop = min(isqrt(r_hi), x)
            for y in range(y_start, y_stop + 1):
                count += 1
                s = (x2 + y * y) << K
                d_lo = s - a_hi * z2
                d_hi = s - a_lo * z2
                if d_lo > 0:
                    lower, upper = d_lo, d_hi
                elif d_hi < 0:
                    lower, upper = -d_hi, -d_lo
                else:
                    lower, upper = 0, max(-d_lo, d_hi)
                if lower <= best_hi:
                    found.append((lower, upper, (x, y, z)))
                    if upper < best_hi:
                        best_hi = upper
                        found = [c for c in found if c[0] <= best_hi]
    return [c for c in found if c[0] <= best_hi], count


def _slices(N: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, N))
    # equal work per slice: the window at height z has size ~ z, so split z^2 evenly
    bounds = [0] + [isqrt((N * N * k) // parts) for k in range(1, parts)] + [N]
    out = []
    for a, b in zip(bounds, bounds[1:]):
        if b > a:
            out.append((a, b))
    return out


def _exact_abs(form: TernaryForm, v: Vector) -> QuadraticSurd:
    return abs(form.exact_value(v))


def _resolve(form: TernaryForm, cands: list[Vector], budget: int | None):
    """Pick the minimum of |Q| among cands, ties broken lexicographically."""
    cands = sorted(set(cands))
    if form.surd is not None:
        vals = {v: _exact_abs(form, v) for v in cands}

        def cmp(u, w):
            s = (vals[u] - vals[w]).sign()
            return s if s else (u > w) - (u < w)

        best = min(cands, key=cmp_to_key(cmp))
        return best, form.exact_value(best), []
    # equal (x^2 + y^2, z^2) means equal Q; for irrational alpha nothing else ties
    by_key = {}
    for v in cands:
        by_key.setdefault((v[0] ** 2 + v[1] ** 2, v[2] ** 2), v)
    cands = sorted(by_key.values())
    limit = precision_budget(budget)
    prec = 128
    while True:
        encs = {v: abs(form.enclose(v, prec)) for v in cands}
        lead = min(cands, key=lambda v: (encs[v].lo, v))
        rivals = [v for v in cands if v != lead and not encs[v].certainly_gt(encs[lead])]
        if not rivals:
            return lead, None, []
        if prec >= limit:
            raise UndecidedTie(
                f"|Q| at {lead} and {rivals} not separated within {limit} bits",
                candidates=[lead] + rivals,
            )
        prec = min(2 * prec, limit)


def brute_force_min(
    form: TernaryForm,
    N: int,
    *,
    workers: int | None = 1,
    cap: int = DEFAULT_CAP,
    budget: int | None = None,
) -> OracleResult:
    """F(N) with its minimizing vector, certified.

    Ties in |Q| are broken by the lexicographically smallest canonical
    vector.  The z-range may be split across worker processes; the merge
    is an exact minimum, so the result does not depend on the split.
    """
    if N < 2:
        raise DomainError("N must be at least 2")
    if N > cap:
        raise DomainError(f"N = {N} exceeds the oracle cap {cap}")
    a_lo, a_hi, K = _fixed_point(form.alpha, N)
    workers = (os.cpu_count() or 1) if workers is None else max(1, workers)
    parts = 1 if workers == 1 else 4 * workers
    jobs = [(a_lo, a_hi, K, N, lo, hi) for lo, hi in _slices(N, parts)]
    if workers == 1 or len(jobs) == 1:
        results = [_scan_slice(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_slice, jobs))
    found = [c for part, _ in results for c in part]
    enumerated = sum(n for _, n in results)
    top = min(c[1] for c in found)
    cands = [c[2] for c in found if c[0] <= top]
    best, exact, ties = _resolve(form, cands, budget)
    value = exact._enclose(128) if exact is not None else form.enclose(best, 128)
    return OracleResult(N, best, value, enumerated, exact, ties)


def naive_min(form: TernaryForm, N: int) -> tuple[Vector, QuadraticSurd]:
    """Independent check of F(N) for surd forms: scan the whole box with numpy.

    Double-precision values select near-minimal vectors, which are then
    compared exactly.  Only intended for small N.
    """
    import numpy as np

    surd = form.surd
    if surd is None:
        raise DomainError("naive_min needs a quadratic surd alpha")
    r = np.arange(-(N - 1), N, dtype=np.int64)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    q = (x * x + y * y).astype(np.float64) - float(surd) * (z * z).astype(np.float64)
    a = np.abs(q)
    a[(x == 0) & (y == 0) & (z == 0)] = np.inf
    m = a.min()
    near = np.nonzero(a <= m + 1e-7 * max(1.0, float(N * N)))
    best_v, best_val = None, None
    for i, j, k in zip(*near):
        v = (int(x[i, j, k]), int(y[i, j, k]), int(z[i, j, k]))
        val = abs(form.exact_value(v))
        if best_val is None or (val - best_val).sign() < 0:
            best_v, best_val = v, val
        elif (val - best_val).sign() == 0 and canonical(v) < canonical(best_v):
            best_v = v
    return canonical(best_v), best_val


def f_table(form: TernaryForm, Ns, **options) -> list[OracleResult]:
    """F(N) for increasing N; asserts that F is nonincreasing."""
    out = [brute_force_min(form, N, **options) for N in sorted(Ns)]
    for prev, cur in zip(out, out[1:]):
        if cur.abs_value.certainly_gt(prev.abs_value):
            raise AssertionError(f"F({cur.N}) > F({prev.N})")
    return out


# ---------------------------------------------------------------------------
# benchmarks


def watson_scaling(a: int, n_max: int) -> dict:
    """Rows (n, N = q_{n+1}, |W(v_n)|, |W(v_n)| N^2) and the sup of the last column."""
    if a < 1:
        raise DomainError("a must be positive")
    if n_max > 30:
        raise DomainError("n_max is limited to 30")
    rows = []
    sup = None
    for n in range(1, n_max + 1):
        res = watson_solve(a, n)
        N = res.v[0]
        absval = abs(res.value)
        product = absval * (N * N)
        enc = product._enclose(128)
        rows.append(
            {
                "n": n,
                "N": N,
                "value_exact": absval.label,
                "value": decimal_bound(absval._enclose(128).coarse_hi(96), 12, upward=True),
                "product_exact": product.label,
                "product": decimal_bound(enc.coarse_hi(96), 12, upward=True),
                "holds": res.holds,
            }
        )
        if sup is None or (product - sup).sign() > 0:
            sup = product
    values = [abs(watson_solve(a, n).value) for n in range(1, n_max + 1)]
    monotone = all((w - u).sign() <= 0 for u, w in zip(values, values[1:]))
    return {
        "a": a,
        "rows": rows,
        "sup_exact": sup.label,
        "sup": decimal_bound(sup._enclose(128).coarse_hi(96), 12, upward=True),
        "sup_value": sup,
        "values_nonincreasing": monotone,
    }


def solver_vs_oracle(
    form: TernaryForm,
    epsilons,
    profile: DiophantineProfile | None = None,
    *,
    cap: int = DEFAULT_CAP,
    workers: int | None = 1,
    budget: int | None = None,
    **solve_options,
) -> list[dict]:
    """Run the solver and compare |Q(v)| with F(||v|| + 1) for each epsilon."""
    report = []
    for eps in epsilons:
        eps = Fraction(eps)
        if not 0 < eps < 1:
            raise DomainError("epsilon must lie in (0, 1)")
        sol: Solution = solve(form, profile, eps, budget=budget, **solve_options)
        N = sol.norm + 1
        row = {
            "epsilon": str(eps),
            "v": [_json_int(c) for c in sol.v],
            "path": sol.path,
            "method": sol.method,
            "n": sol.n,
            "norm": _json_int(sol.norm),
            "oracle_N": N,
            "partial": N > cap,
        }
        theta = sol.profile.theta if sol.profile is not None else None
        if theta is not None:
            row["norm_exponent_bound"] = str(2 / (theta + 1))
        row["norm_exponent"] = sol.extra.get("norm_exponent")
        if N <= cap:
            orc = brute_force_min(form, N, workers=workers, cap=cap, budget=budget)
            row["oracle_v"] = list(orc.best_v)
            row["oracle_value_hi"] = decimal_bound(orc.abs_value.coarse_hi(96), 20, upward=True)
            val = abs(sol.value)
            if sol.exact is not None and orc.exact is not None:
                never_beats = (abs(sol.exact) - abs(orc.exact)).sign() >= 0
                gap = abs(sol.exact) / abs(orc.exact)
                gap_enc = gap._enclose(96)
            else:
                never_beats = not val.certainly_lt(orc.abs_value)
                gap_enc = val / orc.abs_value
            row["never_beats_oracle"] = never_beats
            row["gap_lo"] = decimal_bound(gap_enc.coarse_lo(96), 12, upward=False)
            row["gap_hi"] = decimal_bound(gap_enc.coarse_hi(96), 12, upward=True)
        report.append(row)
    return report

