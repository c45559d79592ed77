"""q-series evaluation of modular functions on lattices ``[tau, 1]``.

All quantities are expressed through four normalised series in
``q = exp(2*pi*i*tau)``:

* ``E4 = 1 + 240 sum n^3 q^n/(1-q^n)`` and ``E6 = 1 - 504 sum n^5 q^n/(1-q^n)``;
* ``D = q prod (1-q^n)^24`` so that ``Delta = (2 pi)^12 D``;
* ``P(z)`` with ``wp(z) = (2 pi i)^2 P(z)`` and ``P1(z)`` with ``wp'(z) = (2 pi i)^3 P1(z)``.

With these, ``j = E4^3/D``, ``J - 1 = E6^2/(1728 D)`` and the Fricke function
is ``f_v = 12 E4 E6 P(v1 tau + v2) / D``; no power of pi survives, and no
subtraction ``E4^3 - E6^2`` is ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cmfield import FieldInvariants, Surd
from .errors import DomainError, PoleError, PrecisionError, UnsupportedFieldError
from .ideals import TorsionPoint
from .numerics import ComplexValue, EvalContext

FRICKE_CONSTANT = -(2**7 * 3**5)  # -31104
MIN_IM_TAU_J = 0.5


def _tail(k: int, r: float, M: int) -> float:
    """Upper bound for ``sum_{n > M} n^k r^n``."""
    first = (M + 1) ** k * r ** (M + 1)
    ratio = ((M + 2) / (M + 1)) ** k * r
    if ratio >= 1:
        return math.inf
    return first / (1 - ratio)


# -- Siegel indices -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class SiegelIndex:
    """A row vector ``(v1, v2)`` in ``Q^2 \\ Z^2`` reduced into ``[0, 1)^2``."""

    v1: Fraction
    v2: Fraction

    @classmethod
    def make(cls, v1, v2) -> "SiegelIndex":
        v1, v2 = Fraction(v1) % 1, Fraction(v2) % 1
        if v1 == 0 and v2 == 0:
            raise DomainError("Siegel index must not be integral")
        return cls(v1, v2)

    @classmethod
    def parse(cls, text: str) -> "SiegelIndex":
        a, b = text.split(",")
        return cls.make(Fraction(a.strip()), Fraction(b.strip()))

    @property
    def denominator(self) -> int:
        return math.lcm(self.v1.denominator, self.v2.denominator)

    def __neg__(self) -> "SiegelIndex":
        return SiegelIndex.make(-self.v1, -self.v2)

    def __add__(self, other: "SiegelIndex") -> "SiegelIndex":
        return SiegelIndex.make(self.v1 + other.v1, self.v2 + other.v2)

    def __sub__(self, other: "SiegelIndex") -> "SiegelIndex":
        return SiegelIndex.make(self.v1 - other.v1, self.v2 - other.v2)

    def equiv(self, other: "SiegelIndex") -> bool:
        """``self == +-other`` modulo ``Z^2``."""
        return self == other or self == -other

    def __str__(self) -> str:
        return f"({self.v1},{self.v2})"


# -- series core ----------------------------------------------------------------


def _tau(ctx: EvalContext, tau):
    t = ctx.number(tau)
    t = ctx.mp.mpc(t)
    if t.imag <= 0:
        raise DomainError("tau must lie in the upper half-plane")
    return t


@dataclass(frozen=True)
class Eisenstein:
    """The normalised series E4, E6, D at one point."""

    tau: object
    q: object
    M: int
    E4: ComplexValue
    E6: ComplexValue
    D: ComplexValue


@lru_cache(maxsize=512)
def _eisenstein(ctx: EvalContext, tau) -> Eisenstein:
    mp = ctx.mp
    M = ctx.cutoff(tau.imag)
    q = mp.exp(2j * mp.pi * tau)
    r = float(abs(q))
    s3 = s5 = 0
    prod = 1
    qn = 1
    for n in range(1, M + 1):
        qn = qn * q
        w = qn / (1 - qn)
        s3 += n**3 * w
        s5 += n**5 * w
        prod *= 1 - qn
    e4 = 1 + 240 * s3
    e6 = 1 - 504 * s5
    D = q * prod**24
    tail = 1 / (1 - r)
    rnd = ctx.eps * 20 * M
    E4 = ComplexValue(e4, abs(e4) * rnd + 240 * tail * _tail(3, r, M))
    E6 = ComplexValue(e6, abs(e6) * rnd + 504 * tail * _tail(5, r, M))
    D_err = abs(D) * (rnd + 25 * tail * _tail(0, r, M))
    return Eisenstein(tau, q, M, E4, E6, ComplexValue(D, D_err))


def eisenstein(ctx: EvalContext, tau) -> Eisenstein:
    return _eisenstein(ctx, _tau(ctx, tau))


def _check_j_domain(tau) -> None:
    if tau.imag < MIN_IM_TAU_J:
        raise PrecisionError(
            f"Im(tau)={float(tau.imag):.4g} < {MIN_IM_TAU_J}; reduce tau into the fundamental domain"
        )


def j_value(tau, ctx: EvalContext) -> ComplexValue:
    t = _tau(ctx, tau)
    _check_j_domain(t)
    e = _eisenstein(ctx, t)
    return e.E4**3 / e.D


def J_value(tau, ctx: EvalContext) -> ComplexValue:
    return j_value(tau, ctx) / 1728


def J_minus_one(tau, ctx: EvalContext) -> ComplexValue:
    """``J - 1 = E6^2 / (1728 D)``, free of cancellation near ``tau = i``."""
    t = _tau(ctx, tau)
    _check_j_domain(t)
    e = _eisenstein(ctx, t)
    return e.E6**2 / (e.D * 1728)


def C_value(tau, ctx: EvalContext) -> ComplexValue:
    """``C = J^2 (J - 1)^3``."""
    return J_value(tau, ctx) ** 2 * J_minus_one(tau, ctx) ** 3


def g2_value(tau, ctx: EvalContext) -> ComplexValue:
    mp = ctx.mp
    return _eisenstein(ctx, _tau(ctx, tau)).E4 * ctx.cv(4 * mp.pi**4 / 3)


def g3_value(tau, ctx: EvalContext) -> ComplexValue:
    mp = ctx.mp
    return _eisenstein(ctx, _tau(ctx, tau)).E6 * ctx.cv(8 * mp.pi**6 / 27)


def delta_value(tau, ctx: EvalContext) -> ComplexValue:
    mp = ctx.mp
    return _eisenstein(ctx, _tau(ctx, tau)).D * ctx.cv((2 * mp.pi) ** 12)


# -- Weierstrass functions ------------------------------------------------------


def _lattice_coords(ctx: EvalContext, z, tau):
    """Write ``z = alpha*tau + beta`` and return ``(alpha, beta)`` as reals."""
    alpha = z.imag / tau.imag
    beta = z.real - alpha * tau.real
    return alpha, beta


def _reduce_coords(ctx: EvalContext, alpha, beta):
    mp = ctx.mp
    alpha = alpha - mp.floor(alpha + mp.mpf(1) / 2)
    beta = beta - mp.floor(beta)
    return alpha, beta


def _exact_coords(ctx: EvalContext, v1: Fraction, v2: Fraction):
    v1 = v1 - math.floor(v1 + Fraction(1, 2))
    v2 = v2 % 1
    if v1 == 0 and v2 == 0:
        raise PoleError("z lies in the lattice")
    return ctx.fraction(v1), ctx.fraction(v2)


def _wp_brackets(ctx: EvalContext, alpha, beta, tau, need_p=True, need_p1=False):
    """Series P and P1 at ``z = alpha*tau + beta`` with ``|alpha| <= 1/2``."""
    mp = ctx.mp
    e = _eisenstein(ctx, tau)
    z = alpha * tau + beta
    u = mp.exp(2j * mp.pi * z)
    if abs(1 - u) < ctx.eps * 1e6:
        raise PoleError("z lies (numerically) in the lattice")
    ui = 1 / u
    q = e.q
    M = e.M + 2
    p = u / (1 - u) ** 2 + mp.mpf(1) / 12
    p1 = u * (1 + u) / (1 - u) ** 3
    qn = 1
    for _ in range(1, M + 1):
        qn = qn * q
        a, b = qn * u, qn * ui
        if need_p:
            p += a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
        if need_p1:
            p1 += a * (1 + a) / (1 - a) ** 3 - b * (1 + b) / (1 - b) ** 3
    r = float(abs(q))
    # |q^n u^{+-1}| <= r^(n - 1/2) for |alpha| <= 1/2
    rho = r ** (M + 0.5) / (1 - r**0.5) ** 4
    tail = 8 * rho / (1 - r)
    rnd = ctx.eps * 40 * M
    P = ComplexValue(p, abs(p) * rnd + tail) if need_p else None
    P1 = ComplexValue(p1, abs(p1) * rnd + tail) if need_p1 else None
    return P, P1


def _point(ctx: EvalContext, z, tau, index: SiegelIndex | None):
    if index is not None:
        return _exact_coords(ctx, index.v1, index.v2)
    alpha, beta = _lattice_coords(ctx, z, tau)
    return _reduce_coords(ctx, alpha, beta)


def wp_value(z, tau, ctx: EvalContext) -> ComplexValue:
    """Weierstrass ``wp(z; [tau, 1])``."""
    t = _tau(ctx, tau)
    alpha, beta = _point(ctx, ctx.mp.mpc(ctx.number(z)), t, None)
    P, _ = _wp_brackets(ctx, alpha, beta, t)
    return P * ctx.cv(-4 * ctx.mp.pi**2)


def wp_prime_value(z, tau, ctx: EvalContext) -> ComplexValue:
    """Derivative ``wp'(z; [tau, 1])``."""
    t = _tau(ctx, tau)
    alpha, beta = _point(ctx, ctx.mp.mpc(ctx.number(z)), t, None)
    _, P1 = _wp_brackets(ctx, alpha, beta, t, need_p=False, need_p1=True)
    return P1 * ctx.cv((2j * ctx.mp.pi) ** 3)


# -- Fricke and Siegel functions --------------------------------------------------


def _as_index(v) -> SiegelIndex:
    if isinstance(v, SiegelIndex):
        return v
    return SiegelIndex.make(*v)


def fricke_value(v, tau, ctx: EvalContext) -> ComplexValue:
    """Fricke function ``f_v(tau) = -2^7 3^5 (g2 g3 / Delta)(tau) wp(v1 tau + v2; [tau, 1])``."""
    v = _as_index(v)
    t = _tau(ctx, tau)
    e = _eisenstein(ctx, t)
    alpha, beta = _point(ctx, None, t, v)
    P, _ = _wp_brackets(ctx, alpha, beta, t)
    return e.E4 * e.E6 * P * 12 / e.D


def _reduced_siegel(v1: Fraction, v2: Fraction, tau, ctx: EvalContext) -> ComplexValue:
    mp = ctx.mp
    M = ctx.cutoff(tau.imag) + 1
    x1, x2 = ctx.fraction(v1), ctx.fraction(v2)
    q = mp.exp(2j * mp.pi * tau)
    qz = mp.exp(2j * mp.pi * (x1 * tau + x2))
    qzi = 1 / qz
    b2 = x1 * x1 - x1 + mp.mpf(1) / 6
    pre = -mp.exp(1j * mp.pi * x2 * (x1 - 1)) * mp.exp(1j * mp.pi * tau * b2)
    prod = 1 - qz
    qn = 1
    for _ in range(1, M + 1):
        qn = qn * q
        prod *= (1 - qn * qz) * (1 - qn * qzi)
    val = pre * prod
    r = float(abs(q))
    # factors beyond M are 1 + O(r^(n - v1)) with 0 <= v1 < 1
    tail = 3 * r**M / (1 - r)
    return ComplexValue(val, abs(val) * (ctx.eps * 10 * M + tail))


def siegel_value(v, tau, ctx: EvalContext) -> ComplexValue:
    """Siegel function ``g_v(tau)`` from its product expansion.

    ``v`` may be a :class:`SiegelIndex` or any rational pair; a pair outside
    ``[0,1)^2`` is evaluated at its reduction and multiplied by the exact
    translation factors ``g_(v1+1, v2) = -e^(-pi i v2) g_v`` and
    ``g_(v1, v2+1) = e^(pi i (v1-1)) g_v``.
    """
    mp = ctx.mp
    t = _tau(ctx, tau)
    if isinstance(v, SiegelIndex):
        return _reduced_siegel(v.v1, v.v2, t, ctx)
    w1, w2 = Fraction(v[0]), Fraction(v[1])
    k, m = math.floor(w1), math.floor(w2)
    r1, r2 = w1 - k, w2 - m
    if r1 == 0 and r2 == 0:
        raise DomainError("Siegel index must not be integral")
    g = _reduced_siegel(r1, r2, t, ctx)
    # shift v2 first (at v1 = r1 + k), then v1 (at v2 = r2)
    phase = mp.expjpi(ctx.fraction(m * (r1 + k - 1))) * (-mp.expjpi(-ctx.fraction(r2))) ** k
    return g * ComplexValue(phase, 0 * g.err)


def ffgg_sides(u, v, tau, ctx: EvalContext) -> tuple[ComplexValue, ComplexValue]:
    """Both sides of the Fricke/Siegel difference identity for ``u != +-v`` mod ``Z^2``.

    Returns ``((f_u - f_v)^6, K * J^2 (J-1)^3 / 3^9 * g_(u+v)^6 g_(u-v)^6 / (g_u^12 g_v^12))``
    with ``K = (2^7 3^5)^6``.  The factor ``K`` is forced by the ``-2^7 3^5``
    normalisation of ``f_v``; without it the identity holds for the
    unnormalised ``(g2 g3 / Delta) wp``.  ``u + v`` and ``u - v`` are formed
    from the given representatives without reducing mod ``Z^2``, since ``g``
    is only invariant up to a root of unity under translation.
    """
    u, v = _as_index(u), _as_index(v)
    if u.equiv(v):
        raise DomainError(f"{u} and {v} are equal up to sign mod Z^2")
    t = _tau(ctx, tau)
    lhs = (fricke_value(u, t, ctx) - fricke_value(v, t, ctx)) ** 6
    J, J1 = J_value(t, ctx), J_minus_one(t, ctx)
    gp = siegel_value((u.v1 + v.v1, u.v2 + v.v2), t, ctx)
    gm = siegel_value((u.v1 - v.v1, u.v2 - v.v2), t, ctx)
    gu, gv = siegel_value(u, t, ctx), siegel_value(v, t, ctx)
    rhs = J**2 * J1**3 * gp**6 * gm**6 / (gu**12 * gv**12) * Fraction(FRICKE_CONSTANT**6, 3**9)
    return lhs, rhs


def q_abs(tau, ctx: EvalContext):
    t = _tau(ctx, tau)
    return ctx.mp.exp(-2 * ctx.mp.pi * t.imag)


# -- CM curve family ------------------------------------------------------------


def _check_field(F: FieldInvariants) -> None:
    if F.is_exceptional:
        raise UnsupportedFieldError(f"d={F.d}: Q(sqrt(-1)) and Q(sqrt(-3)) are excluded")


def _cm_data(F: FieldInvariants, ctx: EvalContext):
    _check_field(F)
    tau = _tau(ctx, F.tau)
    return tau, _eisenstein(ctx, tau)


def curve_coefficients(F: FieldInvariants, n: int, ctx: EvalContext) -> tuple[ComplexValue, ComplexValue]:
    """``(A, B)`` of ``y^2 = 4x^3 - A x - B``: ``A = J(J-1)/27 C^2n``, ``B = J(J-1)^2/27^2 C^3n``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    tau, _ = _cm_data(F, ctx)
    J = J_value(tau, ctx)
    J1 = J_minus_one(tau, ctx)
    C = J**2 * J1**3
    A = J * J1 * C ** (2 * n) / 27
    B = J * J1**2 * C ** (3 * n) / 729
    return A, B


def _omega_index(w: TorsionPoint) -> SiegelIndex:
    return SiegelIndex.make(Fraction(w.a, w.D), Fraction(w.b, w.D))


def weber_x(F: FieldInvariants, n: int, w: TorsionPoint, ctx: EvalContext) -> ComplexValue:
    """``x_{K,n}(omega) = -C_K^n f_{(a/D, b/D)}(tau_K) / (2^7 3^5)`` for ``D*omega = a tau_K + b``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    tau, _ = _cm_data(F, ctx)
    f = fricke_value(_omega_index(w), tau, ctx)
    return C_value(tau, ctx) ** n * f / FRICKE_CONSTANT


def weber_x_wp(F: FieldInvariants, n: int, w: TorsionPoint, ctx: EvalContext) -> ComplexValue:
    """Second route for ``x_{K,n}``: ``C^n (g2 g3 / Delta) wp(omega)`` with ``Delta = g2^3 - 27 g3^2``.

    The subtraction loses about ``pi sqrt|d| / ln 10`` digits, so the work is
    done in a context raised by that amount.
    """
    _check_field(F)
    hi = ctx.raised(math.ceil(math.pi * math.sqrt(-F.d) / math.log(10)) + 5)
    tau = _tau(hi, F.tau)
    omega = (hi.number(Fraction(w.a, w.D)) * tau) + hi.number(Fraction(w.b, w.D))
    g2, g3 = g2_value(tau, hi), g3_value(tau, hi)
    delta = g2**3 - g3**2 * 27
    x = C_value(tau, hi) ** n * g2 * g3 / delta * wp_value(omega, tau, hi)
    mp = ctx.mp
    return ComplexValue(mp.mpc(x.value), mp.mpf(x.err) + abs(mp.mpc(x.value)) * ctx.eps)


def y_squared(F: FieldInvariants, n: int, w: TorsionPoint, ctx: EvalContext) -> ComplexValue:
    """``y_{K,n}(omega)^2 = (C^n g2 g3 / Delta)^3 wp'(omega)^2``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    tau, e = _cm_data(F, ctx)
    alpha, beta = _point(ctx, None, tau, _omega_index(w))
    _, P1 = _wp_brackets(ctx, alpha, beta, tau, need_p=False, need_p1=True)
    C = C_value(tau, ctx)
    # (E4 E6 / (10368 pi^2 D))^3 * (-64 pi^6) P1^2
    c = e.E4 * e.E6 / e.D
    return C ** (3 * n) * c**3 * P1**2 * Fraction(-64, 10368**3)
