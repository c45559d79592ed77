"""The explicit bound on n and numeric certificates for the inequalities behind it.

A :class:`Certificate` only records that sampled numeric hypotheses hold
with positive margin; it never asserts a field-generation statement.
Margins are relative (``1 - lhs/rhs`` for an upper bound) and already
account for the propagated error of the evaluated quantity.
"""

from __future__ import annotations

import enum
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from .classfield import m_N, normconstant_ratio, ray_class_degree
from .cmfield import FieldInvariants, field_invariants, inert_modulus_check, is_fundamental
from .errors import DomainError, UnsupportedFieldError
from .ideals import IdealHNF, TorsionPoint, least_positive_integer, unit_residue_count
from .modfun import (
    C_value,
    SiegelIndex,
    curve_coefficients,
    ffgg_sides,
    q_abs,
    siegel_value,
    weber_x,
    y_squared,
)
from .numerics import EvalContext, context
from .quadforms import enumerate_reduced, tau_of_form

DEFAULT_SEED = 20240229
J_RATIO_CONSTANT = 877383
G_UPPER = 2.29
G_LOWER = 0.76
SQRT3_HALF = math.sqrt(3) / 2
BOUND_DIGITS = 40


class Theorem(enum.Enum):
    INERT_CASE = "InertCase"
    CONDITIONAL = "ConditionalBound"
    HILBERT_ONLY = "HilbertOnly"


@dataclass
class BoundReport:
    d: int
    Nm: int
    theorem: Theorem
    n_min: int
    raw_bound: str | None = None
    numerator: str | None = None
    denominator: str | None = None
    ln_terms: dict = field(default_factory=dict)
    ray_class_degree: int | None = None
    containment_verified: bool = True
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["theorem"] = self.theorem.value
        return out


@dataclass
class Certificate:
    claim: str
    description: str
    seed: int | None
    worst_margin: float
    samples_checked: int
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.worst_margin > 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pass"] = self.passed
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# -- n_min -----------------------------------------------------------------------


def _bound_mp():
    mp = mpmath.MPContext()
    mp.dps = BOUND_DIGITS
    return mp


def n_min_bound(F: FieldInvariants, Nm: int) -> BoundReport:
    """Evaluate ``(13/24 pi sqrt|d| + 6 ln(229/76 Nm)) / (5/2 pi sqrt|d| - ln 877383) - 1/6``."""
    if Nm < 2:
        raise DomainError(f"N_m must be >= 2, got {Nm}")
    mp = _bound_mp()
    root = mp.pi * mp.sqrt(-F.d)
    ln_n = mp.log(mp.mpf(229) / 76 * Nm)
    ln_c = mp.log(J_RATIO_CONSTANT)
    num = mp.mpf(13) / 24 * root + 6 * ln_n
    den = mp.mpf(5) / 2 * root - ln_c
    if den <= 0:
        raise DomainError(f"d={F.d}: denominator {mpmath.nstr(den, 8)} is not positive")
    raw = num / den - mp.mpf(1) / 6
    n_min = max(0, int(mp.ceil(raw)))
    s = lambda x: mpmath.nstr(x, 25)
    return BoundReport(
        d=F.d,
        Nm=Nm,
        theorem=Theorem.CONDITIONAL,
        n_min=n_min,
        raw_bound=s(raw),
        numerator=s(num),
        denominator=s(den),
        ln_terms={"ln(229/76*Nm)": s(ln_n), "ln(877383)": s(ln_c)},
    )


def ray_class_degree_ideal(F: FieldInvariants, I: IdealHNF) -> int:
    """``[K_I : H_K]`` for ``d != -3, -4``: ``|(O_K/I)^*|`` over the image of ``+-1``."""
    if F.is_exceptional:
        raise UnsupportedFieldError(f"d={F.d} has units beyond +-1")
    phi = unit_residue_count(F, I)
    return phi if I.contains((2, 0)) else phi // 2


def generator_plan(F: FieldInvariants, I: IdealHNF) -> BoundReport:
    """Which bound applies to the modulus ``I`` and the resulting smallest admissible n."""
    if I.is_unit_ideal:
        raise DomainError("the modulus must be a proper nontrivial ideal")
    if F.is_exceptional:
        raise UnsupportedFieldError(f"d={F.d}: Q(sqrt(-1)) and Q(sqrt(-3)) are excluded")
    N = least_positive_integer(I)
    is_integer = I.a == N and I.b == 0 and I.c == N
    joint = "x and y^2 together generate the ray class field for every n >= 0"
    degree = ray_class_degree(F, N) if is_integer else ray_class_degree_ideal(F, I)
    if is_integer and inert_modulus_check(F, N):
        report = BoundReport(F.d, N, Theorem.INERT_CASE, 0)
        report.notes.append("every prime factor of N is inert; x alone generates for every n >= 0")
    elif degree == 1:
        report = BoundReport(F.d, N, Theorem.HILBERT_ONLY, 0)
        report.notes.append("the ray class field equals the Hilbert class field; C_K^n carries the generation")
    else:
        report = n_min_bound(F, N)
        if F.h == 1:
            report.notes.append("h_K = 1: the bound formula is reported unchanged")
    report.ray_class_degree = degree
    report.notes.append(joint)
    return report


# -- sweeps --------------------------------------------------------------------------


def _run(fn: Callable, items: Sequence, workers: int) -> list:
    """Map ``fn`` over ``items`` in order, optionally in a process pool."""
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _margin_below(value, err, bound) -> float:
    """Relative margin of ``value < bound`` (value taken at its upper error edge)."""
    return float(1 - (value + err) / bound)


def _margin_above(value, err, bound) -> float:
    """Relative margin of ``value > bound`` (value taken at its lower error edge)."""
    return float(1 - bound / (value - err)) if value > err else -math.inf


def _fundamental_range(d_min: int, d_max: int) -> list[int]:
    return [d for d in range(d_max, d_min - 1, -1) if is_fundamental(d)]


def _j_check(item) -> tuple[int, str, float, float]:
    digits, d = item
    ctx = context(digits)
    F = field_invariants(d)
    forms = enumerate_reduced(d)
    mp = ctx.mp
    bound = J_RATIO_CONSTANT * mp.exp(-mp.mpf(5) / 2 * mp.pi * mp.sqrt(-d))
    CK = C_value(F.tau, ctx)
    worst, worst_q = math.inf, ""
    for Q in forms[1:]:
        r = C_value(tau_of_form(Q), ctx) / CK
        m = _margin_below(abs(r), r.err, bound)
        if m < worst:
            worst, worst_q = m, str(Q)
    return d, worst_q, worst, float(bound)


def certify_j_inequality(d_min: int, d_max: int, ctx: EvalContext, workers: int = 1) -> Certificate:
    """``|C(tau_Q)/C(tau_K)| < 877383 exp(-5/2 pi sqrt|d|) < 1`` for all nonprincipal reduced Q."""
    if not d_min <= d_max <= -15:
        raise DomainError("need d_min <= d_max <= -15")
    ds = [d for d in _fundamental_range(d_min, d_max) if field_invariants(d).h >= 2]
    rows = _run(_j_check, [(ctx.digits, d) for d in ds], workers)
    worst = min((r[2] for r in rows), default=math.inf)
    worst_row = min(rows, key=lambda r: r[2]) if rows else None
    max_bound = max((r[3] for r in rows), default=0.0)
    if max_bound >= 1:
        worst = min(worst, 1 - max_bound)
    return Certificate(
        claim="j-inequality",
        description=f"fundamental d in [{d_min}, {d_max}] with h >= 2, all nonprincipal reduced forms",
        seed=None,
        worst_margin=worst,
        samples_checked=sum(field_invariants(r[0]).h - 1 for r in rows),
        details={
            "discriminants": len(rows),
            "worst_d": worst_row[0] if worst_row else None,
            "worst_form": worst_row[1] if worst_row else None,
            "max_bound": max_bound,
        },
    )


def _siegel_check(item) -> tuple[float, float]:
    digits, v1, v2, N, x, y = item
    ctx = context(digits)
    mp = ctx.mp
    tau = mp.mpc(ctx.number(x), mp.sqrt(3) / 2 if y is None else ctx.number(y))
    g = siegel_value(SiegelIndex.make(v1, v2), tau, ctx)
    q = q_abs(tau, ctx)
    a = abs(g)
    upper = _margin_below(a, g.err, G_UPPER * q ** (-mp.mpf(1) / 24))
    lower = _margin_above(a, g.err, G_LOWER * q ** (mp.mpf(1) / 12) / N) if N else math.inf
    return upper, lower


def siegel_samples(N_max: int, samples: int, seed: int, digits: int) -> list[tuple]:
    """Random samples plus a deterministic grid on the line ``Im tau = sqrt(3)/2``.

    Items are ``(digits, v1, v2, N, Re tau, Im tau)``; ``N = 0`` marks an
    arbitrary rational ``v`` that is only subject to the upper bound and
    ``Im tau = None`` means exactly ``sqrt(3)/2``.
    """
    if N_max < 2:
        raise DomainError("N_max must be >= 2")
    rng = random.Random(seed)
    items = []
    for _ in range(samples):
        x = Fraction(rng.uniform(-0.5, 0.5))
        # half of the points near the boundary where the bounds are tightest
        y = Fraction(SQRT3_HALF + (rng.uniform(0, 1) ** 3) * (10 - SQRT3_HALF))
        if rng.random() < 0.1:
            D = rng.randint(2, 1000)
            v1, v2 = Fraction(rng.randrange(D), D), Fraction(rng.randrange(1, D), D)
            items.append((digits, v1, v2, 0, x, y))
            continue
        N = rng.randint(2, N_max)
        a, b = 0, 0
        while a % N == 0 and b % N == 0:
            a, b = rng.randrange(N), rng.randrange(N)
        items.append((digits, Fraction(a, N), Fraction(b, N), N, x, y))
    for x in (Fraction(-1, 2), Fraction(-1, 4), Fraction(0), Fraction(1, 4), Fraction(1, 2)):
        for N in range(2, N_max + 1):
            picks = sorted({0, 1, N // 2, (N + 1) // 2, N - 1})
            for a in picks:
                for b in picks:
                    if a == 0 and b == 0:
                        continue
                    items.append((digits, Fraction(a, N), Fraction(b, N), N, x, None))
    return items


def certify_siegel_bounds(
    N_max: int, samples: int, ctx: EvalContext, seed: int = DEFAULT_SEED, workers: int = 1
) -> Certificate:
    """Upper bound ``2.29 |q|^(-1/24)`` and lower bound ``0.76 |q|^(1/12) / N`` for ``|g_v(tau)|``."""
    items = siegel_samples(N_max, samples, seed, ctx.digits)
    rows = _run(_siegel_check, items, workers)
    upper = min(r[0] for r in rows)
    lower = min(r[1] for r in rows)
    grid = len(items) - samples
    return Certificate(
        claim="siegel-bounds",
        description=f"N <= {N_max}, Im tau in [sqrt(3)/2, 10]; {samples} random + {grid} boundary-grid points",
        seed=seed,
        worst_margin=min(upper, lower),
        samples_checked=len(items),
        details={"upper_margin": upper, "lower_margin": lower, "violations": sum(min(r) <= 0 for r in rows)},
    )


def certify_hkc_separation(d: int, n_max: int, ctx: EvalContext) -> Certificate:
    """``|C(tau_Q)|^n < |C(tau_K)|^n`` for ``1 <= n <= n_max`` and every nonprincipal Q."""
    F = field_invariants(d)
    if F.h < 2:
        raise DomainError(f"d={d} has class number 1")
    forms = enumerate_reduced(d)
    CK = C_value(F.tau, ctx)
    worst = math.inf
    count = 0
    for Q in forms[1:]:
        CQ = C_value(tau_of_form(Q), ctx)
        for n in range(1, n_max + 1):
            a, b = CQ**n, CK**n
            worst = min(worst, _margin_below(abs(a), a.err, abs(b) - b.err))
            count += 1
    return Certificate(
        claim="hkc",
        description=f"d={d}, 1 <= n <= {n_max}, {len(forms) - 1} nonprincipal forms",
        seed=None,
        worst_margin=worst,
        samples_checked=count,
    )


def _random_tau(rng: random.Random, mp, y_max: float = 3.0):
    return mp.mpc(rng.uniform(-0.5, 0.5), rng.uniform(SQRT3_HALF, y_max))


def _random_index(rng: random.Random, N_max: int) -> SiegelIndex:
    N = rng.randint(2, N_max)
    while True:
        a, b = rng.randrange(N), rng.randrange(N)
        if a or b:
            return SiegelIndex.make(Fraction(a, N), Fraction(b, N))


def certify_ffgg(
    trials: int, ctx: EvalContext, seed: int = DEFAULT_SEED, N_max: int = 12, rel: float = 1e-9
) -> Certificate:
    """The sixth power of a Fricke difference against its Siegel product, on random ``(u, v, tau)``."""
    rng = random.Random(seed)
    worst = math.inf
    done = 0
    while done < trials:
        u, v = _random_index(rng, N_max), _random_index(rng, N_max)
        tau = _random_tau(rng, ctx.mp)
        if u.equiv(v):
            continue
        lhs, rhs = ffgg_sides(u, v, tau, ctx)
        diff = abs(lhs.value - rhs.value) / abs(rhs.value)
        worst = min(worst, float(1 - diff / rel))
        done += 1
    return Certificate(
        claim="ffgg",
        description=f"{trials} random (u, v, tau), denominators <= {N_max}, relative tolerance {rel:g}",
        seed=seed,
        worst_margin=worst,
        samples_checked=done,
    )


def normconstant_points(points: int, seed: int) -> list[complex]:
    base = [complex(0, 2), complex(0.5, 2.5)]
    rng = random.Random(seed)
    while len(base) < points:
        base.append(complex(rng.uniform(-0.5, 0.5), rng.uniform(SQRT3_HALF, 5)))
    return base[:points]


def certify_normconstant(
    N: int, points: int, ctx: EvalContext, seed: int = DEFAULT_SEED, rel: float = 1e-6, imag_rel: float = 1e-8
) -> Certificate:
    """The norm-constant ratio is the same real number at every sample point."""
    if points < 2:
        raise DomainError("need at least two sample points")
    taus = normconstant_points(points, seed)
    ratios = [normconstant_ratio(N, ctx.cv(t).value, ctx) for t in taus]
    ref = ratios[0].value
    spread = max(float(abs(r.value - ref) / abs(ref)) for r in ratios)
    imag = max(float(abs(r.im) / abs(r.value)) for r in ratios)
    worst = min(1 - spread / rel, 1 - imag / imag_rel)
    return Certificate(
        claim="normconstant",
        description=f"N={N}, {points} points with Im tau in [sqrt(3)/2, 5]",
        seed=seed,
        worst_margin=worst,
        samples_checked=points,
        details={
            "k": mpmath.nstr(ref.real, 20),
            "relative_spread": spread,
            "max_imag_ratio": imag,
            "m_N": m_N(N),
        },
    )


def curve_samples(count: int, seed: int, d_range: tuple[int, int] = (-200, -7), N_max: int = 12) -> list[tuple]:
    rng = random.Random(seed)
    ds = [d for d in _fundamental_range(*d_range) if d not in (-3, -4)]
    out = []
    for _ in range(count):
        d = rng.choice(ds)
        n = rng.randint(0, 3)
        D = rng.randint(2, N_max)
        while True:
            a, b = rng.randrange(D), rng.randrange(D)
            if math.gcd(math.gcd(a, b), D) == 1:
                break
        out.append((d, n, TorsionPoint.make(a, b, D)))
    return out


def certify_curve(samples: int, ctx: EvalContext, seed: int = DEFAULT_SEED, rel: float = 1e-10) -> Certificate:
    """``y^2 = 4x^3 - Ax - B`` and ``AB = C_K^(5n+1)/27^3`` on random ``(d, n, omega)``."""
    worst_w = worst_ab = math.inf
    for d, n, w in curve_samples(samples, seed):
        F = field_invariants(d)
        x = weber_x(F, n, w, ctx)
        y2 = y_squared(F, n, w, ctx)
        A, B = curve_coefficients(F, n, ctx)
        rhs = x**3 * 4 - A * x - B
        scale = max(abs(y2.value), abs(4 * x.value**3), abs(A.value * x.value), abs(B.value))
        worst_w = min(worst_w, float(1 - abs(y2.value - rhs.value) / scale / rel))
        C = C_value(F.tau, ctx)
        target = C ** (5 * n + 1) / 27**3
        worst_ab = min(worst_ab, float(1 - abs((A * B).value - target.value) / abs(target.value) / rel))
    return Certificate(
        claim="curve",
        description=f"{samples} random (d, n <= 3, omega), relative tolerance {rel:g}",
        seed=seed,
        worst_margin=min(worst_w, worst_ab),
        samples_checked=samples,
        details={"weierstrass_margin": worst_w, "product_margin": worst_ab},
    )
