"""Positive definite binary quadratic forms ``a x^2 + b x y + c y^2``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .arith import gcd3
from .cmfield import Surd, check_fundamental
from .errors import DomainError, InternalError

Matrix = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix = ((1, 0), (0, 1))


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return gcd3(self.a, self.b, self.c) == 1

    @property
    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.discriminant < 0

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return (-a < b <= a < c) or (0 <= b <= a == c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, g: Matrix) -> "QuadForm":
        """The form ``(x, y) -> Q(g (x, y)^T)``."""
        (p, q), (r, s) = g
        a, b, c = self.a, self.b, self.c
        return QuadForm(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    def __str__(self) -> str:
        return f"{self.a}x^2{self.b:+d}xy{self.c:+d}y^2"


@dataclass(frozen=True)
class ReducedForm:
    form: QuadForm
    witness: Matrix


def _matmul(g: Matrix, h: Matrix) -> Matrix:
    (a, b), (c, d) = g
    (e, f), (k, l) = h
    return ((a * e + b * k, a * f + b * l), (c * e + d * k, c * f + d * l))


def principal_form(d: int) -> QuadForm:
    b = d % 2
    return QuadForm(1, b, (b - d) // 4)


def reduce(Q: QuadForm) -> ReducedForm:
    """Gauss reduction; the witness ``g`` in SL2(Z) satisfies ``Q.transform(g) == form``."""
    if not Q.is_positive_definite:
        raise DomainError(f"{Q} is not positive definite")
    a, b, c = Q.a, Q.b, Q.c
    g = IDENTITY
    while True:
        k = (a - b) // (2 * a)
        if k:
            b, c = b + 2 * a * k, a * k * k + b * k + c
            g = _matmul(g, ((1, k), (0, 1)))
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            g = _matmul(g, ((0, -1), (1, 0)))
            continue
        break
    R = QuadForm(a, b, c)
    if not R.is_reduced or Q.transform(g) != R:
        raise InternalError(f"reduction of {Q} produced {R}")
    if 3 * a * a > abs(R.discriminant):
        raise InternalError(f"reduced form {R} violates a <= sqrt(|d|/3)")
    return ReducedForm(R, g)


@lru_cache(maxsize=512)
def _reduced_forms(d: int) -> tuple[QuadForm, ...]:
    out = []
    for a in range(1, isqrt(-d // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd3(a, b, c) == 1:
                out.append(QuadForm(a, b, c))
    out.sort(key=lambda q: (q.a, q.b))
    return tuple(out)


def enumerate_reduced(d: int) -> list[QuadForm]:
    """All reduced forms of the fundamental discriminant ``d``; principal form first."""
    check_fundamental(d)
    forms = list(_reduced_forms(d))
    assert forms[0] == principal_form(d)
    return forms


def class_number(d: int) -> int:
    return len(enumerate_reduced(d))


def tau_of_form(Q: QuadForm) -> Surd:
    """The root ``(-b + sqrt(d)) / (2a)`` of ``Q(x, 1)`` in the upper half-plane."""
    if not Q.is_positive_definite:
        raise DomainError(f"{Q} is not positive definite")
    return Surd.make(Fraction(-Q.b, 2 * Q.a), Fraction(1, 2 * Q.a), Q.discriminant)


def compose(Q1: QuadForm, Q2: QuadForm) -> ReducedForm:
    """Reduced representative of ``[Q1][Q2]``, computed through ideal multiplication."""
    if Q1.discriminant != Q2.discriminant:
        raise DomainError(f"discriminants differ: {Q1.discriminant} vs {Q2.discriminant}")
    for Q in (Q1, Q2):
        if not (Q.is_primitive and Q.is_positive_definite):
            raise DomainError(f"{Q} is not primitive positive definite")
    from .cmfield import field_invariants
    from .ideals import form_of_ideal, ideal_multiply, ideal_of_form

    F = field_invariants(Q1.discriminant)
    product = ideal_multiply(ideal_of_form(F, Q1), ideal_of_form(F, Q2))
    return reduce(form_of_ideal(F, product))
