"""Certified search for small values of Q_alpha(x, y, z) = x^2 + y^2 - alpha z^2.

The search walks the even convergents p_{2n}/q_{2n} of beta = sqrt(alpha).
For each index it takes the Dirichlet point u_n = (x_n, 0, z_n) at scale
N_n, follows the integer line u_n - a d_n with d_n = (p_{2n}, 1, q_{2n}),
and looks for a lattice point where |Q| <= epsilon.  When that single line
misses, the other lattice lines parallel to d_n are tried, ordered by how
slowly Q varies along them.  A direct row search is the last resort.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from ._numth import two_squares
from .cf import ContinuedFraction, dirichlet_point, expand
from .errors import (
    DiscriminantUndecided,
    DomainError,
    NoSolutionWithinHorizon,
    PrecisionExhausted,
)
from .intervals import Interval, decimal_bound, int_str
from .profile import DiophantineProfile, n1_of, profile_for, schedule_N
from .reals import (
    QuadraticSurd,
    as_rational,
    certified_sign,
    describe,
    evaluate,
    is_rational,
    precision_budget,
    sqrt_real,
    square_real,
)

Vector = tuple[int, int, int]


@dataclass(frozen=True)
class TernaryForm:
    """The form x^2 + y^2 - alpha z^2 with alpha > 0 irrational."""

    alpha: object
    beta: object = None

    def __post_init__(self):
        if is_rational(self.alpha):
            raise DomainError(f"alpha = {describe(self.alpha)} is rational")
        if certified_sign(self.alpha) <= 0:
            raise DomainError(f"alpha = {describe(self.alpha)} is not certified positive")
        if self.beta is None:
            object.__setattr__(self, "beta", sqrt_real(self.alpha))

    @classmethod
    def from_beta(cls, beta) -> "TernaryForm":
        return cls(square_real(beta), beta)

    @property
    def surd(self) -> QuadraticSurd | None:
        return self.alpha if isinstance(self.alpha, QuadraticSurd) else None

    def exact_value(self, v: Vector) -> QuadraticSurd | None:
        """Q(v) as an exact surd when alpha is a quadratic surd."""
        s = self.surd
        if s is None:
            return None
        x, y, z = v
        z2 = z * z
        return QuadraticSurd.of(x * x + y * y - s.a * z2, -s.b * z2, s.d)

    def enclose(self, v: Vector, precision: int) -> Interval:
        x, y, z = v
        return Interval(x * x + y * y, x * x + y * y, precision) - evaluate(self.alpha, precision) * (z * z)

    def label(self) -> str:
        return f"x^2+y^2-({describe(self.alpha)})z^2"


def evaluate_form(
    form: TernaryForm,
    v: Vector,
    target_width=Fraction(1, 1 << 64),
    *,
    precision: int | None = None,
    budget: int | None = None,
) -> Interval:
    """Enclosure of Q(v) of width at most target_width.

    With an explicit ``precision`` a single evaluation at that precision is
    returned instead.  This path never uses exact surd arithmetic, so it
    can serve as an independent re-check.
    """
    if precision is not None:
        return form.enclose(v, precision)
    target_width = Fraction(target_width)
    limit = precision_budget(budget)
    z = abs(v[2])
    prec = max(64, 2 * z.bit_length() + max(0, -math.floor(math.log2(target_width))) + 16)
    while True:
        val = form.enclose(v, prec)
        if val.width <= target_width:
            return val
        if prec >= limit:
            raise PrecisionExhausted("form value not resolved within budget", reached=prec)
        prec = min(2 * prec, limit)


def certify_small(form: TernaryForm, v: Vector, epsilon: Fraction, budget: int | None = None):
    """Decide |Q(v)| <= epsilon.

    Returns (verdict, enclosure, exact).  The verdict is False both when the
    value is certified larger and when the budget runs out.
    """
    exact = form.exact_value(v)
    if exact is not None:
        ok = (epsilon - exact).sign() >= 0 and (epsilon + exact).sign() >= 0
        return ok, exact._enclose(128 + 2 * abs(v[2]).bit_length()), exact
    limit = precision_budget(budget)
    prec = max(64, 2 * abs(v[2]).bit_length() + epsilon.denominator.bit_length() + 32)
    while True:
        val = form.enclose(v, prec)
        if val.certainly_ge(-epsilon) and val.certainly_le(epsilon):
            return True, val, None
        if val.certainly_gt(epsilon) or val.certainly_lt(-epsilon):
            return False, val, None
        if prec >= limit:
            return False, val, None
        prec = min(2 * prec, limit)


# ---------------------------------------------------------------------------
# line probes


@dataclass
class LineProbe:
    """Everything certified about the approximation line at index n.

    Coefficients refer to f(t) = A t^2 + B t + C = Q(u - (t/q) d) with
    d = (p, 1, q); lattice points sit at t = a q.
    """

    n: int
    p: int
    q: int
    N: int
    u: Vector
    A: Interval
    B: Interval
    C: Interval
    C_plus: Interval
    C_minus: Interval
    disc_plus: Interval
    disc_minus: Interval
    delta: Interval
    early_exit: bool
    epsilon: Fraction
    roots: tuple = ()
    in_set: tuple = ()
    pattern: tuple | None = None
    outer: str | None = None
    M: int = 0
    precision: int = 0

    @property
    def c(self) -> Fraction:
        return Fraction(self.p, self.q)

    def point(self, a: int) -> Vector:
        x, _, z = self.u
        return (x - a * self.p, -a, z - a * self.q)


@dataclass(frozen=True)
class HittingIntervals:
    """I1 = [t1, t2] and I2 = [t3, t4] where |f| <= epsilon."""

    t: tuple  # four Interval endpoints, sorted
    pattern: tuple
    outer: str  # which equation gives t1, t4: "+" for f = -eps, "-" for f = +eps

    @property
    def I1(self) -> tuple:
        return self.t[0], self.t[1]

    @property
    def I2(self) -> tuple:
        return self.t[2], self.t[3]


def _roots(A: Interval, B: Interval, disc: Interval) -> tuple[Interval, Interval]:
    r = disc.sqrt()
    two_a = A * 2
    return (-B - r) / two_a, (-B + r) / two_a


def _sorted_certified(items):
    """Sort (Interval, tag) pairs; None when two enclosures overlap."""
    items = sorted(items, key=lambda it: it[0].mid)
    for (x, _), (y, _) in zip(items, items[1:]):
        if not x.certainly_lt(y):
            return None
    return items


def _label_at(form: TernaryForm, probe_u: Vector, p: int, q: int, t: Fraction, eps: Fraction, prec: int):
    """Label f(t) as below (-eps), in, or above (+eps); None when undecided."""
    x, _, z = probe_u
    c = Fraction(p, q)
    X, Y, Z = x - t * c, -t / q, z - t
    s = form.surd
    if s is not None:
        val = QuadraticSurd.of(X * X + Y * Y - s.a * Z * Z, -s.b * Z * Z, s.d)
        if (val + eps).sign() < 0:
            return "below"
        if (val - eps).sign() > 0:
            return "above"
        return "in"
    val = Interval(X * X + Y * Y, X * X + Y * Y, prec) - evaluate(form.alpha, prec) * (Z * Z)
    if val.certainly_lt(-eps):
        return "below"
    if val.certainly_gt(eps):
        return "above"
    if val.certainly_ge(-eps) and val.certainly_le(eps):
        return "in"
    return None


def probe(
    form: TernaryForm,
    profile: DiophantineProfile,
    n: int,
    epsilon,
    *,
    cf: ContinuedFraction | None = None,
    budget: int | None = None,
) -> LineProbe:
    """Certified coefficients, discriminants, roots and region pattern at index n."""
    eps = as_rational(epsilon, "epsilon")
    if n < 1:
        raise ValueError("index n must be at least 1")
    beta = form.beta
    if cf is None or cf.certified_to < 2 * n + 1:
        cf = expand(beta, 2 * n + 1, budget)
    p, q = cf.p(2 * n), cf.q(2 * n)
    N = schedule_N(profile, q)
    x, z = dirichlet_point(beta, N, budget)
    u = (x, 0, z)
    limit = precision_budget(budget)
    prec = 4 * q.bit_length() + 2 * eps.denominator.bit_length() + 128
    while True:
        res = _probe_at(form, n, p, q, N, u, eps, prec)
        if res is not None:
            return res
        if prec >= limit:
            raise DiscriminantUndecided(
                f"probe at n={n} undecided within {limit} bits", reached=prec
            )
        prec = min(2 * prec, limit)


def _probe_at(form, n, p, q, N, u, eps, prec) -> LineProbe | None:
    x, _, z = u
    alpha = evaluate(form.alpha, prec)
    beta = evaluate(form.beta, prec)
    c = Interval(Fraction(p, q), Fraction(p, q), prec)
    inv_q2 = Interval(Fraction(1, q * q), Fraction(1, q * q), prec)
    A = (Interval(p * p + 1, p * p + 1, prec) - alpha * (q * q)) * inv_q2
    B = (Interval(p * x, p * x, prec) - alpha * (z * q)) * Fraction(-2, q)
    exact_c = form.exact_value(u)
    C = Interval(x * x, x * x, prec) - alpha * (z * z)
    if exact_c is not None:
        C = C.intersect(exact_c._enclose(prec))
    C_plus, C_minus = C + eps, C - eps
    disc_plus = B.square() - A * C_plus * 4
    disc_minus = B.square() - A * C_minus * 4
    delta = Interval(x, x, prec) - beta * z
    if A.sign() == 0:
        return None
    if exact_c is not None:
        early = (eps - exact_c).sign() >= 0 and (eps + exact_c).sign() >= 0
    else:
        if C.certainly_ge(-eps) and C.certainly_le(eps):
            early = True
        elif C.certainly_gt(eps) or C.certainly_lt(-eps):
            early = False
        else:
            return None
    out = LineProbe(
        n, p, q, N, u, A, B, C, C_plus, C_minus, disc_plus, disc_minus, delta, early, eps,
        precision=prec,
    )
    sp, sm = disc_plus.sign(), disc_minus.sign()
    if sp == 0 or sm == 0:
        return None
    roots = []
    if sp > 0:
        roots += [(r, "+") for r in _roots(A, B, disc_plus)]
    if sm > 0:
        roots += [(r, "-") for r in _roots(A, B, disc_minus)]
    ordered = _sorted_certified(roots)
    if ordered is None:
        return None
    out.roots = tuple(r for r, _ in ordered)
    # the set {|f| <= eps} between consecutive roots, read off from the labels
    cuts = [r for r, _ in ordered]
    samples = _region_samples(cuts)
    labels = []
    for t in samples:
        lab = _label_at(form, u, p, q, t, eps, prec)
        if lab is None:
            return None
        labels.append(lab)
    in_set = []
    for i, lab in enumerate(labels):
        if lab == "in":
            if i == 0 or i == len(labels) - 1:
                raise AssertionError("unbounded region inside the band; A must be zero")
            in_set.append((cuts[i - 1], cuts[i]))
    out.in_set = tuple(in_set)
    if len(cuts) == 4:
        out.pattern = tuple(labels)
        out.outer = ordered[0][1]
    if in_set:
        lo, hi = in_set[0]
        out.M = _count_multiples(lo, hi, q)
    return out


def _region_samples(cuts: list[Interval]) -> list[Fraction]:
    if not cuts:
        return [Fraction(0)]
    out = [cuts[0].lo - 1]
    for a, b in zip(cuts, cuts[1:]):
        out.append((a.hi + b.lo) / 2)
    out.append(cuts[-1].hi + 1)
    return out


def _count_multiples(lo: Interval, hi: Interval, q: int) -> int:
    """Number of multiples of q certified inside [lo, hi]."""
    return max(0, math.floor(hi.lo / q) - math.ceil(lo.hi / q) + 1)


def hitting_intervals(pr: LineProbe) -> HittingIntervals | None:
    """I1 and I2 when both discriminants are certified positive, else None."""
    if pr.pattern is None or len(pr.roots) != 4:
        return None
    return HittingIntervals(pr.roots, pr.pattern, pr.outer)


def expected_pattern(A_sign: int) -> tuple:
    """Region labels across t1 < t2 < t3 < t4 for a line with both discriminants positive."""
    if A_sign < 0:
        return ("below", "in", "above", "in", "below")
    return ("above", "in", "below", "in", "above")


def vieta_holds(pr: LineProbe) -> bool:
    """Check t1 + t4, t1 t4, t2 + t3, t2 t3 against the coefficients."""
    if len(pr.roots) != 4:
        return False
    t1, t2, t3, t4 = pr.roots
    outer_c = pr.C_plus if pr.outer == "+" else pr.C_minus
    inner_c = pr.C_minus if pr.outer == "+" else pr.C_plus
    s = -pr.B / pr.A
    return (
        (t1 + t4).overlaps(s)
        and (t2 + t3).overlaps(s)
        and (t1 * t4).overlaps(outer_c / pr.A)
        and (t2 * t3).overlaps(inner_c / pr.A)
    )


def find_multiple(I, q: int, outer=None) -> tuple[int | None, int]:
    """A multiple a*q inside the certified interval I.

    I is an Interval or a (lo, hi) pair of rationals.  The choice prefers the
    smallest |a|, then nonzero a, then positive a.  Returns (a or None, M)
    with M = floor(length(I) / q).  When nothing is certified inside I but
    the looser ``outer`` interval could contain a multiple, the decision is
    beyond the current precision and PrecisionExhausted is raised.
    """
    lo, hi = _bounds(I)
    M = max(0, math.floor((hi - lo) / q)) if hi >= lo else 0
    amin = math.ceil(lo / q)
    amax = math.floor(hi / q)
    if amin > amax:
        if outer is not None:
            olo, ohi = _bounds(outer)
            if math.ceil(olo / q) <= math.floor(ohi / q):
                raise PrecisionExhausted("interval too imprecise to certify containment")
        return None, M
    if amin > 0:
        return amin, M
    if amax < 0:
        return amax, M
    if amax >= 1:
        return 1, M
    if amin <= -1:
        return -1, M
    return 0, M


def _bounds(I):
    if isinstance(I, Interval):
        return I.lo, I.hi
    lo, hi = I
    return Fraction(lo), Fraction(hi)


# ---------------------------------------------------------------------------
# solutions


@dataclass
class Solution:
    """A certified v with |Q(v)| <= epsilon and how it was found."""

    v: Vector
    value: Interval
    epsilon: Fraction
    path: str
    method: str
    n: int | None = None
    a: int | None = None
    profile: DiophantineProfile | None = None
    exact: QuadraticSurd | None = None
    extra: dict = field(default_factory=dict)

    @property
    def norm(self) -> int:
        return max(abs(c) for c in self.v)

    def certificate(self) -> dict:
        out = {
            "v": [_json_int(c) for c in self.v],
            "value_lo": decimal_bound(self.value.coarse_lo(96), 20, upward=False),
            "value_hi": decimal_bound(self.value.coarse_hi(96), 20, upward=True),
            "epsilon": str(self.epsilon),
            "path": self.path,
            "method": self.method,
            "n": self.n,
            "a": None if self.a is None else _json_int(self.a),
            "profile": None if self.profile is None else self.profile.to_json(),
            "norm": _json_int(self.norm),
        }
        if self.exact is not None:
            out["value_exact"] = self.exact.label
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.certificate(), sort_keys=True)


def _json_int(n: int):
    return n if abs(n) < (1 << 63) else int_str(n)


def _solution(form, v, eps, path, method, n=None, a=None, profile=None, budget=None, **extra):
    ok, val, exact = certify_small(form, v, eps, budget)
    if not ok:
        return None
    return Solution(tuple(v), val, eps, path, method, n, a, profile, exact, dict(extra))


def _probe_solution(form, pr: LineProbe, profile, eps, budget):
    if pr.early_exit:
        return _solution(form, pr.u, eps, "generic", "probe", pr.n, 0, profile, budget)
    for lo, hi in pr.in_set:
        a, _ = find_multiple((lo.hi, hi.lo), pr.q, outer=(lo.lo, hi.hi))
        if a is not None:
            sol = _solution(form, pr.point(a), eps, "generic", "probe", pr.n, a, profile, budget)
            if sol is not None:
                return sol
    return None


def pencil_lines(form: TernaryForm, cf: ContinuedFraction, n: int, radius: int, count: int):
    """Lattice lines parallel to d = (p_{2n}, 1, q_{2n}) ranked by |G|.

    A line through w is labelled by (r, m) with w = r*w1 + m*w0, where
    w0 = (p_{2n}, 0, q_{2n}) and w1 is the previous convergent scaled so
    that {d, w0, w1} is a lattice basis.  Along the line Q(w - a d) is a
    quadratic in a whose discriminant is -4 G with G = Q(w) - alpha r^2, so
    only lines with G < 0 cross zero, and small |G| means a slow crossing.
    """
    p, q = cf.p(2 * n), cf.q(2 * n)
    p1, q1 = cf.p(2 * n - 1), cf.q(2 * n - 1)
    s = q1 * p - p1 * q
    wp = 2 * q.bit_length() + 80
    with mpmath.workprec(wp):
        al = _mp(form.alpha, wp)
        X1, Z1 = s * p1, s * q1
        h11 = float(X1 * X1 - al * Z1 * Z1 - al)
        h12 = float(X1 * p - al * Z1 * q)
        h22 = float(p * p - al * q * q)
    ranked = []
    for r in range(0, radius + 1):
        for m in range(-radius, radius + 1):
            if r == 0 and m <= 0:
                continue
            g = r * r * h11 + 2 * r * m * h12 + m * m * h22
            if g < 0:
                ranked.append((-g, r, m))
    ranked.sort()
    return [(r * X1 + m * p, r * Z1 + m * q, r, m) for _, r, m in ranked[:count]]


def _mp(x, prec: int):
    enc = evaluate(x, prec + 8)
    return mpmath.mp.make_mpf(enc._lo)


def _pencil_solution(form, cf, n, profile, eps, radius, count, budget):
    p, q = cf.p(2 * n), cf.q(2 * n)
    lines = pencil_lines(form, cf, n, radius, count)
    for X, Z, r, m in lines:
        size = max(abs(X), abs(Z), q).bit_length()
        wp = 4 * size + 64
        with mpmath.workprec(wp):
            al = _mp(form.alpha, wp)
            D = p * p + 1 - al * q * q
            b = X * p - al * Z * q
            C = X * X - al * Z * Z
            G = D * C - b * b
            if G >= 0:
                continue
            root = mpmath.sqrt(-G)
            cands = set()
            for a_star in ((b - root) / D, (b + root) / D):
                fl = int(mpmath.floor(a_star))
                cands.update((fl, fl + 1))
            scored = []
            gate = 2 * mpmath.mpf(eps.numerator) / eps.denominator
            for a in sorted(cands):
                g = D * a * a - 2 * b * a + C
                if abs(g) <= gate:
                    scored.append((float(abs(g)), a))
        for _, a in sorted(scored):
            v = (X - a * p, -a, Z - a * q)
            if v == (0, 0, 0):
                continue
            sol = _solution(
                form, v, eps, "generic", "pencil", n, a, profile, budget, line={"r": r, "m": m}
            )
            if sol is not None:
                return sol
    return None


def row_search(form: TernaryForm, epsilon, limit: int | None = None, budget: int | None = None):
    """Scan z = 1, 2, ... for alpha z^2 within epsilon of a sum of two squares.

    Screening uses a fixed-point enclosure of alpha; every hit is certified
    again with the exact or interval evaluator.  Returns a Solution or None.
    """
    eps = as_rational(epsilon, "epsilon")
    if limit is None:
        limit = int(400 / eps) + 1000
    K = 2 * limit.bit_length() + eps.denominator.bit_length() + 48
    enc = evaluate(form.alpha, K + 16)
    lo = math.floor(enc.lo * (1 << K))
    hi = math.ceil(enc.hi * (1 << K))
    tol = math.floor(eps * (1 << K))
    half = 1 << (K - 1)
    for z in range(1, limit + 1):
        z2 = z * z
        lz = lo * z2
        m = (lz + half) >> K
        mk = m << K
        if mk - lz > tol or hi * z2 - mk > tol or m < 1:
            continue
        rep = two_squares(m)
        if rep is None:
            continue
        sol = _solution(form, (rep[0], rep[1], z), eps, "row", "row", budget=budget, z=z)
        if sol is not None:
            return sol
    return None


def default_horizon(profile: DiophantineProfile, epsilon) -> int:
    return n1_of(profile, epsilon) + 8


def solve(
    form: TernaryForm,
    profile: DiophantineProfile | None,
    epsilon,
    n_max: int | None = None,
    *,
    strategy: str = "auto",
    pencil_count: int = 128,
    pencil_radius: int = 16,
    row_limit: int | None = None,
    budget: int | None = None,
) -> Solution:
    """Find a certified nonzero integer v with |Q(v)| <= epsilon.

    strategy "probe" uses only the approximation line at each index,
    "pencil" adds the parallel lattice lines, and "auto" additionally falls
    back to a row search once the index horizon n_max (default n_1 + 8) is
    exhausted.
    """
    if strategy not in ("probe", "pencil", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    eps = as_rational(epsilon, "epsilon")
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    if profile is None:
        profile = profile_for(form.beta, with_C=False, budget=budget)
    n1 = n1_of(profile, eps)
    if n_max is None:
        n_max = n1 + 8
    info = {"n1": n1, "horizon": n_max}
    cf = None
    for n in range(1, n_max + 1):
        if cf is None or cf.certified_to < 2 * n + 1:
            cf = expand(form.beta, max(2 * n + 1, 2 * (cf.certified_to if cf else 0)), budget)
        pr = probe(form, profile, n, eps, cf=cf, budget=budget)
        sol = _probe_solution(form, pr, profile, eps, budget)
        if sol is None and strategy != "probe":
            sol = _pencil_solution(form, cf, n, profile, eps, pencil_radius, pencil_count, budget)
        if sol is not None:
            sol.extra.update(info)
            sol.extra["dirichlet"] = {"N": _json_int(pr.N), "p": _json_int(pr.u[0]), "q": _json_int(pr.u[2])}
            sol.extra["within_n1"] = n <= n1
            sol.extra["norm_exponent"] = round(math.log(max(sol.norm, 2)) / math.log(pr.q), 6) if pr.q > 1 else None
            return sol
    if strategy == "auto":
        sol = row_search(form, eps, row_limit, budget)
        if sol is not None:
            sol.profile = profile
            sol.extra.update(info)
            return sol
    raise NoSolutionWithinHorizon(f"no certified solution up to n = {n_max}", last_index=n_max)
