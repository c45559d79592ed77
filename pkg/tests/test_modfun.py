import math
import random
from fractions import Fraction

import mpmath
import pytest

from oracles import lattice_fricke, lattice_g2_g3, lattice_wp, q_series_free_j
from rayclass.cmfield import Surd, field_invariants
from rayclass.errors import DomainError, PoleError, PrecisionError, UnsupportedFieldError
from rayclass.ideals import TorsionPoint
from rayclass.modfun import (
    FRICKE_CONSTANT,
    C_value,
    J_minus_one,
    J_value,
    SiegelIndex,
    curve_coefficients,
    delta_value,
    ffgg_sides,
    fricke_value,
    g2_value,
    g3_value,
    j_value,
    siegel_value,
    weber_x,
    weber_x_wp,
    wp_prime_value,
    wp_value,
    y_squared,
)
from rayclass.numerics import context
from rayclass.quadforms import QuadForm, tau_of_form

# frozen from oracles.lattice_wp(0.5, 1j) with R = 200
WP_HALF_AT_I = 6.8751858

TAU_15 = Surd.make(Fraction(-1, 2), Fraction(1, 2), -15)
TAU_15_Q2 = tau_of_form(QuadForm(2, 1, 2))


def closed_form_j15(sign: int):
    mp = mpmath.MPContext()
    mp.dps = 40
    return -52515 - 85995 * (1 + sign * mp.sqrt(5)) / 2


def rel(a, b):
    return abs(a - b) / abs(b)


def test_j_at_i(ctx):
    j = j_value("i", ctx)
    assert abs(j.value - 1728) <= j.err + 1e-25
    assert abs(J_minus_one("i", ctx).value) < 1e-30
    assert abs(C_value("i", ctx).value) < 1e-30


def test_j_minus_15_closed_forms(ctx):
    assert rel(j_value(TAU_15, ctx).value, closed_form_j15(+1)) < 1e-25
    assert rel(j_value(TAU_15_Q2, ctx).value, closed_form_j15(-1)) < 1e-25


def test_j_against_lattice_oracle(ctx):
    tau = complex(-0.5, math.sqrt(15) / 2)
    assert rel(complex(j_value(tau, ctx).value), q_series_free_j(tau)) < 1e-5


def test_j_domain(ctx):
    with pytest.raises(PrecisionError):
        j_value("0.1+0.3i", ctx)
    with pytest.raises(DomainError):
        j_value("1-1i", ctx)


def test_C_ordering_minus_15(ctx):
    assert abs(C_value(TAU_15_Q2, ctx)) < abs(C_value(TAU_15, ctx))


def test_delta_relation(ctx):
    tau = "0.1+1.3i"
    g2, g3, D = g2_value(tau, ctx), g3_value(tau, ctx), delta_value(tau, ctx)
    assert rel((g2**3 - g3**2 * 27).value, D.value) < 1e-25
    assert rel((J_value(tau, ctx) - 1).value, J_minus_one(tau, ctx).value) < 1e-25


@pytest.mark.parametrize("tau", [1j, complex(0.2, 1.1), complex(-0.4, 0.9)])
def test_g2_g3_against_lattice(ctx, tau):
    g2, g3 = lattice_g2_g3(tau)
    assert rel(complex(g2_value(tau, ctx).value), g2) < 1e-6
    assert abs(complex(g3_value(tau, ctx).value) - g3) < 1e-6 * max(1, abs(g3))


def test_wp_half_period(ctx):
    v = wp_value(Fraction(1, 2), "i", ctx)
    assert abs(v.im) < 1e-30 and v.re > 0
    assert abs(float(v.re) - WP_HALF_AT_I) < 1e-6
    assert abs(lattice_wp(0.5, 1j) - WP_HALF_AT_I) < 1e-6


def test_wp_against_lattice_random(ctx):
    rng = random.Random(3)
    for _ in range(4):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 1.5))
        z = complex(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.8))
        assert rel(complex(wp_value(z, tau, ctx).value), lattice_wp(z, tau)) < 1e-6


def test_wp_even_periodic_and_ode(ctx):
    mp = ctx.mp
    tau = mp.mpc("0.13", "1.07")
    z = mp.mpc("0.31", "0.22")
    p = wp_value(z, tau, ctx)
    assert rel(wp_value(-z, tau, ctx).value, p.value) < 1e-28
    assert rel(wp_value(z + tau + 1, tau, ctx).value, p.value) < 1e-28
    dp = wp_prime_value(z, tau, ctx)
    g2, g3 = g2_value(tau, ctx), g3_value(tau, ctx)
    lhs = dp**2
    rhs = p**3 * 4 - g2 * p - g3
    assert rel(lhs.value, rhs.value) < 1e-26


def test_wp_pole(ctx):
    with pytest.raises(PoleError):
        wp_value(ctx.mp.mpc(1, 0), "i", ctx)


def test_fricke_half_period_at_i(ctx):
    # g3(i) = 0, so f_(1/2, 0)(i) vanishes; the lattice sum agrees
    f = fricke_value((Fraction(1, 2), 0), "i", ctx)
    assert abs(f.value) < 1e-25
    assert abs(lattice_fricke(Fraction(1, 2), Fraction(0), 1j)) < 1e-6


def test_fricke_against_lattice(ctx):
    tau = complex(0.2, 1.1)
    v = (Fraction(1, 3), Fraction(1, 5))
    assert rel(complex(fricke_value(v, tau, ctx).value), lattice_fricke(*v, tau)) < 1e-6


def test_fricke_even(ctx):
    tau = "0.21+1.3i"
    for v in [(Fraction(1, 2), 0), (Fraction(1, 3), Fraction(2, 7)), (0, Fraction(1, 2))]:
        u = SiegelIndex.make(*v)
        assert rel(fricke_value(-u, tau, ctx).value, fricke_value(u, tau, ctx).value) < 1e-28


def naive_siegel(v1: Fraction, v2: Fraction, tau, terms: int = 150):
    """Product expansion taken literally, without any reduction of the index."""
    mp = mpmath.MPContext()
    mp.dps = 40
    tau = mp.mpc(tau)
    x1, x2 = mp.mpf(v1.numerator) / v1.denominator, mp.mpf(v2.numerator) / v2.denominator
    q = mp.exp(2j * mp.pi * tau)
    qz = mp.exp(2j * mp.pi * (x1 * tau + x2))
    val = -mp.exp(mp.pi * 1j * x2 * (x1 - 1)) * mp.exp(mp.pi * 1j * tau * (x1 * x1 - x1 + mp.mpf(1) / 6))
    val *= 1 - qz
    for n in range(1, terms):
        val *= (1 - q**n * qz) * (1 - q**n / qz)
    return val


@pytest.mark.parametrize(
    "v",
    [
        (Fraction(1, 3), Fraction(2, 3)),
        (Fraction(4, 3), Fraction(1, 5)),
        (Fraction(1, 3), Fraction(-7, 5)),
        (Fraction(-2, 3), Fraction(9, 4)),
        (Fraction(5, 2), Fraction(0)),
    ],
)
def test_siegel_against_literal_product(ctx, v):
    tau = ctx.mp.mpc("0.1", "1.2")
    assert rel(siegel_value(v, tau, ctx).value, naive_siegel(*v, tau)) < 1e-28


def test_siegel_twelfth_power_symmetry(ctx):
    tau = ctx.mp.mpc("-0.17", "1.41")
    a = siegel_value(SiegelIndex.make(0, Fraction(1, 2)), tau, ctx) ** 12
    b = siegel_value(SiegelIndex.make(0, Fraction(-1, 2)), tau, ctx) ** 12
    assert rel(a.value, b.value) < 1e-28


def test_siegel_truncation_self_oracle(ctx):
    hi = context(60)
    a = siegel_value(SiegelIndex.make(0, Fraction(1, 2)), "i", ctx)
    b = siegel_value(SiegelIndex.make(0, Fraction(1, 2)), "i", hi)
    assert abs(a.value - b.value) <= a.err


def test_siegel_upper_bound_example(ctx):
    tau = ctx.mp.mpc(0, 2)
    g = siegel_value(SiegelIndex.make(Fraction(1, 3), Fraction(2, 3)), tau, ctx)
    q = ctx.mp.exp(-4 * ctx.mp.pi)
    assert abs(g) < 2.29 * q ** (-ctx.mp.mpf(1) / 24)


def test_ffgg_identity(ctx):
    rng = random.Random(11)
    for _ in range(10):
        N = rng.randint(2, 9)
        u = SiegelIndex.make(Fraction(rng.randrange(N), N), Fraction(rng.randrange(1, N), N))
        v = SiegelIndex.make(Fraction(rng.randrange(1, N), N), Fraction(rng.randrange(N), N))
        if u.equiv(v):
            continue
        tau = ctx.mp.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2))
        lhs, rhs = ffgg_sides(u, v, tau, ctx)
        assert rel(lhs.value, rhs.value) < 1e-25


def test_ffgg_constant_is_fricke_normalisation(ctx):
    # Without the (2^7 3^5)^6 factor the two sides differ by exactly that constant.
    u, v = SiegelIndex.make(Fraction(1, 3), Fraction(1, 3)), SiegelIndex.make(Fraction(2, 3), Fraction(1, 3))
    lhs, rhs = ffgg_sides(u, v, "0.1+1.2i", ctx)
    unscaled = rhs / FRICKE_CONSTANT**6
    assert rel((lhs / unscaled).value, 2**42 * 3**30) < 1e-25


def test_ffgg_rejects_equivalent(ctx):
    u = SiegelIndex.make(Fraction(1, 3), 0)
    with pytest.raises(DomainError):
        ffgg_sides(u, -u, "i", ctx)


def test_weber_routes_agree(ctx):
    for d, w in [(-7, TorsionPoint.make(0, 1, 3)), (-20, TorsionPoint.make(1, 31, 598)), (-15, TorsionPoint.make(1, 1, 2))]:
        F = field_invariants(d)
        a, b = weber_x(F, 0, w, ctx), weber_x_wp(F, 0, w, ctx)
        assert rel(a.value, b.value) < 1e-26


def test_weber_reference_value(ctx):
    # d = -7, omega = 1/3, cross-checked against the lattice-sum route
    x = weber_x(field_invariants(-7), 0, TorsionPoint.make(0, 1, 3), ctx)
    assert abs(x.value - ctx.mp.mpf("-0.41137244595717779795508483850")) < 1e-27
    tau = complex(-0.5, math.sqrt(7) / 2)
    assert rel(complex(x.value), lattice_fricke(Fraction(0), Fraction(1, 3), tau) / FRICKE_CONSTANT) < 1e-6


def test_weber_scaling_and_reality(ctx):
    F = field_invariants(-7)
    w = TorsionPoint.make(0, 1, 2)
    x0, x2 = weber_x(F, 0, w, ctx), weber_x(F, 2, w, ctx)
    assert rel(x2.value, (C_value(F.tau, ctx) ** 2 * x0).value) < 1e-28
    assert abs(x0.im) < 1e-28


def test_y_squared(ctx):
    F = field_invariants(-7)
    assert abs(y_squared(F, 0, TorsionPoint.make(0, 1, 2), ctx).value) < 1e-25
    w, wneg = TorsionPoint.make(1, 2, 5), TorsionPoint.make(-1, -2, 5)
    assert rel(y_squared(F, 1, w, ctx).value, y_squared(F, 1, wneg, ctx).value) < 1e-28
    x = weber_x(F, 1, w, ctx)
    A, B = curve_coefficients(F, 1, ctx)
    y2 = y_squared(F, 1, w, ctx)
    scale = max(abs(y2), abs(B))
    assert abs((y2 - (x**3 * 4 - A * x - B)).value) / scale < 1e-25


def test_curve_coefficients(ctx):
    F = field_invariants(-15)
    tau = F.tau
    for n in range(3):
        A, B = curve_coefficients(F, n, ctx)
        C = C_value(tau, ctx)
        assert rel((A * B).value, (C ** (5 * n + 1) / 27**3).value) < 1e-26
        c = C**n * g2_value(tau, ctx) * g3_value(tau, ctx) / delta_value(tau, ctx)
        assert rel(A.value, (g2_value(tau, ctx) * c**2).value) < 1e-24
        assert rel(B.value, (g3_value(tau, ctx) * c**3).value) < 1e-24
        assert abs(A) > 0 and abs(B) > 0


def test_unsupported_fields(ctx):
    for d in (-3, -4):
        with pytest.raises(UnsupportedFieldError):
            curve_coefficients(field_invariants(d), 0, ctx)


def test_float_mode_agrees(ctx, fctx):
    tau = "0.1+1.1i"
    v = SiegelIndex.make(Fraction(1, 5), Fraction(2, 5))
    for fn in (lambda c: j_value(tau, c), lambda c: fricke_value(v, tau, c), lambda c: siegel_value(v, tau, c)):
        hi, lo = fn(ctx), fn(fctx)
        assert abs(complex(hi.value) - complex(lo.value)) <= float(lo.err) + 1e-12 * abs(complex(hi.value))


def test_siegel_index():
    v = SiegelIndex.make(Fraction(-1, 3), Fraction(7, 4))
    assert (v.v1, v.v2) == (Fraction(2, 3), Fraction(3, 4))
    assert v.denominator == 12
    assert SiegelIndex.parse("1/2, 0") == SiegelIndex.make(Fraction(1, 2), 0)
    assert v.equiv(-v)
    with pytest.raises(DomainError):
        SiegelIndex.make(1, 2)
