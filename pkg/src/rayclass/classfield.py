"""Class polynomials, Galois conjugation of modular values, and the level-N combinatorics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cmfield import FieldInvariants, norm_form
from .errors import DomainError, PrecisionError, UnsupportedFieldError
from .ideals import TorsionPoint, integer_ideal, unit_residue_count
from .modfun import SiegelIndex, J_minus_one, J_value, fricke_value, j_value, weber_x
from .numerics import ComplexValue, EvalContext
from .quadforms import QuadForm, enumerate_reduced, tau_of_form

ROUNDING_TOLERANCE = 1e-4
MAX_RAISES = 4

Matrix = tuple[tuple[int, int], tuple[int, int]]


# -- Hilbert class polynomial ----------------------------------------------------


def _poly_from_roots(roots: list[ComplexValue]) -> list[ComplexValue]:
    """Coefficients of ``prod (x - r)``, leading coefficient first."""
    one = roots[0] * 0 + 1
    coeffs = [one]
    for r in roots:
        nxt = coeffs + [one * 0]
        for i in range(1, len(nxt)):
            nxt[i] = nxt[i] - coeffs[i - 1] * r
        coeffs = nxt
    return coeffs


def _coefficient_digits(d: int, forms: list[QuadForm]) -> int:
    # |j(tau_Q)| is about exp(pi sqrt|d| / a); the constant term is the product
    return math.ceil(sum(math.pi * math.sqrt(-d) / Q.a for Q in forms) / math.log(10))


def hilbert_class_poly(d: int, ctx: EvalContext) -> list[int]:
    """Integer coefficients (degree-descending) of ``prod_Q (x - j(tau_Q))``.

    The working precision is raised until every coefficient lies within
    ``1e-4`` of an integer with an error bound small enough to decide it.
    """
    forms = enumerate_reduced(d)
    size = _coefficient_digits(d, forms)
    need = size + 12
    if ctx.is_float:
        # doubles carry 15-16 digits; keep at least 6 of them below the decimal point
        if size + 6 > 15:
            raise PrecisionError(f"d={d} needs about {need} digits; 15-digit mode cannot round its class polynomial")
        work = ctx
    else:
        work = ctx.raised(need - ctx.digits) if need > ctx.digits else ctx
    for _ in range(MAX_RAISES):
        roots = [j_value(tau_of_form(Q), work) for Q in forms]
        coeffs = _poly_from_roots(roots)
        out = []
        for c in coeffs:
            n = round(c.re) if work.is_float else int(work.mp.nint(c.re))
            resid = abs(c.value - n)
            if resid + c.err >= ROUNDING_TOLERANCE:
                break
            out.append(n)
        else:
            return out
        if work.is_float:
            break
        work = work.raised(work.digits)
    raise PrecisionError(f"class polynomial of d={d} did not round to integers")


# -- Galois action through matrices -------------------------------------------------


def siegel_index_action(v: SiegelIndex, gamma: Matrix, N: int) -> SiegelIndex:
    """The row vector ``v * gamma`` reduced into ``[0, 1)^2``."""
    (a, b), (c, d) = gamma
    det = a * d - b * c
    if N < 1 or gcd(det, N) != 1:
        raise DomainError(f"det {det} is not coprime to N={N}")
    if N % v.denominator:
        raise DomainError(f"{v} does not have level dividing {N}")
    return SiegelIndex.make(v.v1 * a + v.v2 * c, v.v1 * b + v.v2 * d)


def reciprocity_matrix(F: FieldInvariants, Q: QuadForm) -> Matrix:
    """``[[a_Q, (b_Q - b_K)/2], [0, 1]]``."""
    if Q.discriminant != F.d:
        raise DomainError(f"{Q} has discriminant {Q.discriminant}, field has {F.d}")
    return (Q.a, (Q.b - F.b) // 2), (0, 1)


def conjugate_fricke_value(v: SiegelIndex | None, Q: QuadForm, F: FieldInvariants, N: int, ctx: EvalContext) -> ComplexValue:
    """Image of ``f_v(tau_K)`` under the class of ``Q``: ``f_(v gamma_Q)(tau_Q)``.

    ``v=None`` stands for level 1, where the value is ``j(tau_Q)``.
    """
    gamma = reciprocity_matrix(F, Q)
    if gcd(Q.a, N) != 1:
        raise DomainError(f"a_Q={Q.a} is not coprime to N={N}")
    tau = tau_of_form(Q)
    if v is None:
        return j_value(tau, ctx)
    return fricke_value(siegel_index_action(v, gamma, N), tau, ctx)


# -- conjugates over the Hilbert class field -------------------------------------------


def _check_units(F: FieldInvariants, N: int) -> None:
    if F.is_exceptional:
        raise UnsupportedFieldError(f"d={F.d} has units beyond +-1")
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")


def residue_units(F: FieldInvariants, N: int) -> list[tuple[int, int]]:
    """``(s, t)`` with ``s*tau_K + t`` running over ``(O_K/N)^*`` modulo ``+-1``.

    From each pair ``{xi, -xi}`` the lexicographically smaller ``(s, t)`` is kept.
    """
    _check_units(F, N)
    out = []
    for s in range(N):
        for t in range(N):
            if gcd(norm_form(F, s, t), N) != 1:
                continue
            if (s, t) <= ((-s) % N, (-t) % N):
                out.append((s, t))
    return out


def ray_class_degree(F: FieldInvariants, N: int) -> int:
    """``[K_(N) : H_K] = |(O_K/N)^*| / |{+-1} mod N|``."""
    _check_units(F, N)
    phi = unit_residue_count(F, integer_ideal(F, N))
    return phi if N == 2 else phi // 2


def conjugates_over_HK(F: FieldInvariants, N: int, n: int, ctx: EvalContext) -> list[ComplexValue]:
    """``x_{K,n}((s*tau_K + t)/N)`` over :func:`residue_units`; checked pairwise distinct."""
    values = [weber_x(F, n, TorsionPoint.make(s, t, N), ctx) for s, t in residue_units(F, N)]
    for i, x in enumerate(values):
        for y in values[i + 1 :]:
            if abs(x.value - y.value) <= x.err + y.err:
                raise PrecisionError("two conjugates are not separated by their error bounds")
    return values


def elementary_symmetric(values: list[ComplexValue]) -> list[ComplexValue]:
    """``e_1, ..., e_k`` of the values (the coefficients of ``prod (x + v)``, constant term excluded)."""
    coeffs = _poly_from_roots([-v for v in values])
    return coeffs[1:]


# -- S_N, P_N and the norm constant ---------------------------------------------------


@dataclass(frozen=True, order=True)
class SNElement:
    s: int
    t: int

    def neg(self, N: int) -> "SNElement":
        return SNElement((-self.s) % N, (-self.t) % N)

    def index(self, N: int) -> SiegelIndex:
        return SiegelIndex.make(Fraction(self.s, N), Fraction(self.t, N))


def _check_level(N: int) -> None:
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")


def enumerate_S_N(N: int) -> list[SNElement]:
    _check_level(N)
    return [SNElement(s, t) for s in range(N) for t in range(N) if math.gcd(N, s, t) == 1]


def equivalent_mod_sign(u: SNElement, v: SNElement, N: int) -> bool:
    return u == v or u == v.neg(N)


def enumerate_P_N(N: int) -> list[tuple[SNElement, SNElement]]:
    """Ordered pairs ``(u, v)`` from ``S_N`` with ``u != +-v`` mod ``N``."""
    S = enumerate_S_N(N)
    return [(u, v) for u in S for v in S if not equivalent_mod_sign(u, v, N)]


def m_N(N: int) -> int:
    """``|P_N|``, counted without listing the pairs: each u excludes itself and -u."""
    S = enumerate_S_N(N)
    return sum(len(S) - (1 if u == u.neg(N) else 2) for u in S)


def normconstant_ratio(N: int, tau, ctx: EvalContext) -> ComplexValue:
    """``prod_{P_N} (f_{u/N} - f_{v/N})^6 / (J^2 (J-1)^3)^{m_N}`` at ``tau``.

    Each factor is divided by one copy of ``J^2 (J-1)^3`` before multiplying,
    which keeps magnitudes moderate; pairs are taken in sorted order.
    """
    _check_level(N)
    t = ctx.mp.mpc(ctx.number(tau))
    if t.imag < math.sqrt(3) / 2 - 1e-12:
        raise DomainError("Im(tau) must be at least sqrt(3)/2")
    C = J_value(t, ctx) ** 2 * J_minus_one(t, ctx) ** 3
    f = {u: fricke_value(u.index(N), t, ctx) for u in enumerate_S_N(N)}
    out = C * 0 + 1
    for u, v in sorted(enumerate_P_N(N)):
        out = out * ((f[u] - f[v]) ** 6 / C)
    return out


def best_rational(x, max_den: int = 10**6) -> Fraction:
    """Continued-fraction approximation of a real number with bounded denominator."""
    return Fraction(str(x)).limit_denominator(max_den)
