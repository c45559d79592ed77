import math

import pytest

from rayclass.cmfield import (
    SplitType,
    Surd,
    check_fundamental,
    classify_prime,
    field_invariants,
    inert_modulus_check,
    is_fundamental,
    kronecker_symbol,
    norm_form,
)
from rayclass.errors import DomainError


@pytest.mark.parametrize("d", [-3, -4, -7, -8, -15, -20, -23, -24, -163, -203])
def test_fundamental_accepted(d):
    assert is_fundamental(d)


@pytest.mark.parametrize("d", [-1, -2, -10, -12, -16, -27, 0, 5, -9])
def test_non_fundamental_rejected(d):
    with pytest.raises(DomainError):
        check_fundamental(d)


def test_invariants_minus_20():
    F = field_invariants(-20)
    assert (F.b, F.c, F.h) == (0, 5, 2)
    assert F.tau == Surd.make(0, 1, -5)


def test_invariants_minus_15():
    F = field_invariants(-15)
    assert (F.b, F.c, F.h) == (1, 4, 2)
    assert str(F.tau) == "-1/2 + (1/2)*sqrt(-15)"


@pytest.mark.parametrize("d", [-7, -15, -20, -23, -163])
def test_tau_is_root(d):
    F = field_invariants(d)
    z = complex(-F.b / 2, math.sqrt(-d) / 2)
    assert abs(z * z + F.b * z + F.c) < 1e-9


def test_d20_example_splitting():
    F = field_invariants(-20)
    assert classify_prime(F, 2) is SplitType.RAMIFIED
    assert classify_prime(F, 13) is SplitType.INERT
    assert classify_prime(F, 23) is SplitType.SPLIT


@pytest.mark.parametrize("d", [-7, -15, -20, -23, -39, -164])
@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_kronecker_matches_square_count(d, p):
    # number of roots of x^2 = d mod p, minus one
    roots = sum(1 for x in range(p) if (x * x - d) % p == 0)
    assert kronecker_symbol(d, p) == roots - 1


@pytest.mark.parametrize("d", [-7, -15, -20, -23, -39])
def test_kronecker_at_two(d):
    # 2 splits iff x^2 + b x + c has two roots mod 2
    F = field_invariants(d)
    roots = sum(1 for x in range(2) if (x * x + F.b * x + F.c) % 2 == 0)
    expected = {0: -1, 1: 0, 2: 1}[roots]
    assert kronecker_symbol(d, 2) == expected


def test_kronecker_needs_prime():
    with pytest.raises(DomainError):
        kronecker_symbol(-7, 9)


@pytest.mark.parametrize("d", [-7, -20, -23])
def test_norm_form_is_absolute_square(d):
    F = field_invariants(d)
    tau = complex(-F.b / 2, math.sqrt(-d) / 2)
    for s in range(-3, 4):
        for t in range(-3, 4):
            assert norm_form(F, s, t) == round(abs(s * tau + t) ** 2)


def test_inert_modulus_check():
    F = field_invariants(-20)
    assert inert_modulus_check(F, 13)
    assert inert_modulus_check(F, 13 * 17)
    assert not inert_modulus_check(F, 26)
    assert inert_modulus_check(field_invariants(-7), 3)
    with pytest.raises(DomainError):
        inert_modulus_check(F, 1)


def test_field_arithmetic():
    F = field_invariants(-15)
    t = (0, 1)
    assert F.multiply(t, t) == (-F.c, -F.b)
    assert F.multiply(t, F.conjugate(t)) == (F.c, 0)
