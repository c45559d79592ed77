"""Exact invariants of an imaginary quadratic field K = Q(sqrt(d_K)).

The ring of integers is the lattice ``[tau_K, 1]`` where ``tau_K`` is the
root in the upper half-plane of ``x^2 + b_K x + c_K``.  Elements of O_K are
written ``s*tau_K + t`` and carried around as integer pairs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import is_prime, is_squarefree, prime_factors, squarefree_part
from .errors import DomainError


@dataclass(frozen=True)
class Surd:
    """The exact number ``rational + coeff * sqrt(radicand)`` with squarefree radicand."""

    rational: Fraction
    coeff: Fraction
    radicand: int

    @classmethod
    def make(cls, rational, coeff, radicand: int) -> "Surd":
        k, m = squarefree_part(radicand)
        return cls(Fraction(rational), Fraction(coeff) * k, m)

    @property
    def imag(self) -> Fraction | None:
        """Coefficient of sqrt(|radicand|) in the imaginary part (radicand < 0 only)."""
        return self.coeff if self.radicand < 0 else None

    def to_complex(self, mp):
        """Numeric value in the mpmath(-like) context ``mp``."""
        r = mp.mpf(self.rational.numerator) / self.rational.denominator
        c = mp.mpf(self.coeff.numerator) / self.coeff.denominator
        if self.radicand < 0:
            return mp.mpc(r, c * mp.sqrt(-self.radicand))
        return mp.mpc(r + c * mp.sqrt(self.radicand), 0)

    def __str__(self) -> str:
        rad = f"sqrt({self.radicand})"
        if self.rational == 0:
            return rad if self.coeff == 1 else f"({self.coeff})*{rad}"
        return f"{self.rational} + ({self.coeff})*{rad}"


class SplitType(enum.Enum):
    RAMIFIED = "ramified"
    INERT = "inert"
    SPLIT = "split"


def check_fundamental(d: int) -> None:
    """Raise DomainError unless ``d`` is a negative fundamental discriminant."""
    if not isinstance(d, int) or isinstance(d, bool):
        raise DomainError(f"discriminant must be an integer, got {d!r}")
    if d >= 0:
        raise DomainError(f"discriminant must be negative, got {d}")
    if d % 4 == 1:
        if not is_squarefree(d):
            raise DomainError(f"d={d} is 1 mod 4 but not squarefree")
    elif d % 4 == 0:
        m = d // 4
        if m % 4 not in (2, 3):
            raise DomainError(f"d={d}: d/4 must be 2 or 3 mod 4")
        if not is_squarefree(m):
            raise DomainError(f"d={d}: d/4 is not squarefree")
    else:
        raise DomainError(f"d={d} is not 0 or 1 mod 4")


def is_fundamental(d: int) -> bool:
    try:
        check_fundamental(d)
    except DomainError:
        return False
    return True


@dataclass(frozen=True)
class FieldInvariants:
    d: int
    b: int
    c: int
    h: int = field(compare=False)

    @property
    def tau(self) -> Surd:
        return Surd.make(Fraction(-self.b, 2), Fraction(1, 2), self.d)

    @property
    def is_exceptional(self) -> bool:
        """True for Q(i) and Q(sqrt(-3)), which have extra units."""
        return self.d in (-3, -4)

    def tau_times(self, x: int, y: int) -> tuple[int, int]:
        """Multiply ``x + y*tau`` by ``tau``; returns the ``(x', y')`` coordinates."""
        return -self.c * y, x - self.b * y

    def multiply(self, e1: tuple[int, int], e2: tuple[int, int]) -> tuple[int, int]:
        """Product of ``x1 + y1*tau`` and ``x2 + y2*tau`` as ``(x, y)``."""
        x1, y1 = e1
        x2, y2 = e2
        return x1 * x2 - self.c * y1 * y2, x1 * y2 + x2 * y1 - self.b * y1 * y2

    def conjugate(self, e: tuple[int, int]) -> tuple[int, int]:
        x, y = e
        return x - self.b * y, -y


@lru_cache(maxsize=1024)
def field_invariants(d: int) -> FieldInvariants:
    check_fundamental(d)
    from .quadforms import class_number

    b = d % 2
    c = (b - d) // 4
    assert b * b - 4 * c == d
    return FieldInvariants(d=d, b=b, c=c, h=class_number(d))


def kronecker_symbol(d: int, p: int) -> int:
    """Kronecker symbol (d/p) for a prime p."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = d % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def classify_prime(F: FieldInvariants, p: int) -> SplitType:
    k = kronecker_symbol(F.d, p)
    if k == 0:
        return SplitType.RAMIFIED
    return SplitType.SPLIT if k == 1 else SplitType.INERT


def norm_form(F: FieldInvariants, s: int, t: int) -> int:
    """N(s*tau_K + t) = c_K s^2 - b_K s t + t^2."""
    return F.c * s * s - F.b * s * t + t * t


def inert_modulus_check(F: FieldInvariants, N: int) -> bool:
    """True iff every prime factor of N is inert in K."""
    if N < 2:
        raise DomainError(f"modulus must be >= 2, got {N}")
    return all(classify_prime(F, p) is SplitType.INERT for p in prime_factors(N))
