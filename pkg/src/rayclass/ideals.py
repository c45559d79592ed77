"""Integral ideals of O_K in Hermite normal form.

An ideal is stored as the lattice ``Z*a + Z*(b + c*tau_K)`` with ``c | a``,
``c | b`` and ``0 <= b < a``.  Internally elements of O_K are pairs
``(x, y)`` meaning ``x + y*tau_K``; the public constructors take the
``(s, t)`` convention ``s*tau_K + t`` used throughout the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence, Union

from .arith import prime_factors
from .cmfield import FieldInvariants, SplitType, classify_prime, norm_form
from .errors import DomainError, InternalError
from .quadforms import QuadForm

Element = tuple[int, int]
Generator = Union[int, tuple[int, int]]


@dataclass(frozen=True, order=True)
class IdealHNF:
    d: int
    a: int
    b: int
    c: int

    @property
    def norm(self) -> int:
        return self.a * self.c

    @property
    def basis(self) -> tuple[Element, Element]:
        return (self.a, 0), (self.b, self.c)

    @property
    def is_unit_ideal(self) -> bool:
        return self.a == 1 and self.c == 1

    def contains(self, e: Element) -> bool:
        x, y = e
        if y % self.c:
            return False
        return (x - (y // self.c) * self.b) % self.a == 0

    def __str__(self) -> str:
        return f"[{self.a}, {self.b}+{self.c}*tau]"


def _hnf(d: int, vectors: Iterable[Element]) -> IdealHNF:
    rows = [v for v in vectors if v != (0, 0)]
    if not rows:
        raise DomainError("the zero module is not a nonzero ideal")
    xs = [x for x, y in rows if y == 0]
    ys = [(x, y) for x, y in rows if y != 0]
    while len(ys) > 1:
        ys.sort(key=lambda v: abs(v[1]))
        px, py = ys[0]
        nxt = [(px, py)]
        for x, y in ys[1:]:
            q = y // py
            x, y = x - q * px, y - q * py
            if y == 0:
                xs.append(x)
            else:
                nxt.append((x, y))
        ys = nxt
    if not ys:
        raise DomainError("generators span a rank-1 module")
    bx, c = ys[0]
    if c < 0:
        bx, c = -bx, -c
    a = 0
    for x in xs:
        a = gcd(a, x)
    if a == 0:
        raise DomainError("generators span a rank-1 module")
    return IdealHNF(d, a, bx % a, c)


def _check_ideal(F: FieldInvariants, I: IdealHNF) -> IdealHNF:
    for e in I.basis:
        if not I.contains(F.tau_times(*e)):
            raise InternalError(f"{I} is not closed under multiplication by tau")
    return I


def _as_element(g: Generator) -> Element:
    if isinstance(g, int):
        return g, 0
    s, t = g
    return t, s


def ideal_from_elements(F: FieldInvariants, elements: Sequence[Element]) -> IdealHNF:
    """O_K-ideal generated by internal ``(x, y)`` elements."""
    vecs = list(elements) + [F.tau_times(*e) for e in elements]
    return _check_ideal(F, _hnf(F.d, vecs))


def ideal_from_generators(F: FieldInvariants, gens: Sequence[Generator]) -> IdealHNF:
    """Ideal generated by integers and ``(s, t)`` pairs meaning ``s*tau_K + t``."""
    if not gens:
        raise DomainError("at least one generator is required")
    return ideal_from_elements(F, [_as_element(g) for g in gens])


def unit_ideal(F: FieldInvariants) -> IdealHNF:
    return IdealHNF(F.d, 1, 0, 1)


def integer_ideal(F: FieldInvariants, N: int) -> IdealHNF:
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    return IdealHNF(F.d, N, 0, N)


def _same_field(I: IdealHNF, J: IdealHNF) -> None:
    if I.d != J.d:
        raise DomainError(f"ideals live in different fields: {I.d} vs {J.d}")


def ideal_multiply(I: IdealHNF, J: IdealHNF) -> IdealHNF:
    _same_field(I, J)
    from .cmfield import field_invariants

    F = field_invariants(I.d)
    prods = [F.multiply(e, f) for e in I.basis for f in J.basis]
    return _check_ideal(F, _hnf(I.d, prods))


def ideal_add(I: IdealHNF, J: IdealHNF) -> IdealHNF:
    _same_field(I, J)
    return _hnf(I.d, I.basis + J.basis)


def ideal_power(I: IdealHNF, e: int) -> IdealHNF:
    out = IdealHNF(I.d, 1, 0, 1)
    for _ in range(e):
        out = ideal_multiply(out, I)
    return out


def conjugate_ideal(F: FieldInvariants, I: IdealHNF) -> IdealHNF:
    return _hnf(I.d, [F.conjugate(e) for e in I.basis])


def divide_by_integer(I: IdealHNF, n: int) -> IdealHNF:
    if I.a % n or I.b % n or I.c % n:
        raise DomainError(f"{I} is not divisible by {n}")
    return IdealHNF(I.d, I.a // n, (I.b // n) % (I.a // n), I.c // n)


def least_positive_integer(I: IdealHNF) -> int:
    return I.a


def is_coprime_to_integer(I: IdealHNF, N: int) -> bool:
    """True iff ``I + N*O_K == O_K``."""
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    return gcd(I.a, N) == 1 or ideal_add(I, IdealHNF(I.d, N, 0, N)).is_unit_ideal


def divides(P: IdealHNF, I: IdealHNF) -> bool:
    """True iff ``I`` is contained in ``P``."""
    return all(P.contains(e) for e in I.basis)


# -- primes ---------------------------------------------------------------


def _norm_roots(F: FieldInvariants, p: int) -> list[int]:
    return [r for r in range(p) if norm_form(F, 1, r) % p == 0]


def prime_ideal(F: FieldInvariants, p: int, root: int | None = None) -> IdealHNF:
    """Prime above ``p``: ``p*O_K`` if inert, else ``[p, root + tau_K]``."""
    kind = classify_prime(F, p)
    if kind is SplitType.INERT:
        if root is not None:
            raise DomainError(f"{p} is inert; it has a single prime p*O_K")
        return integer_ideal(F, p)
    roots = _norm_roots(F, p)
    if root is None:
        root = roots[0]
    elif root % p not in roots:
        raise DomainError(f"{root}+tau_K does not have norm divisible by {p}")
    return ideal_from_elements(F, [(p, 0), (root, 1)])


def prime_ideals_above(F: FieldInvariants, p: int) -> list[IdealHNF]:
    if classify_prime(F, p) is SplitType.INERT:
        return [integer_ideal(F, p)]
    return sorted({prime_ideal(F, p, r) for r in _norm_roots(F, p)})


def unit_residue_count(F: FieldInvariants, I: IdealHNF) -> int:
    """``|(O_K/I)^*|`` from the primes dividing ``I``."""
    count = Fraction(I.norm)
    for p in prime_factors(I.a):
        for P in prime_ideals_above(F, p):
            if divides(P, I):
                count *= 1 - Fraction(1, P.norm)
    assert count.denominator == 1
    return int(count)


def residues(I: IdealHNF) -> Iterator[Element]:
    """A complete residue system of ``O_K / I`` as ``(x, y)`` elements."""
    for y in range(I.c):
        for x in range(I.a):
            yield x, y


# -- forms <-> ideals ------------------------------------------------------


def ideal_of_form(F: FieldInvariants, Q: QuadForm) -> IdealHNF:
    """The ideal ``[a, (-b + sqrt(d))/2]`` attached to ``Q``."""
    if Q.discriminant != F.d:
        raise DomainError(f"{Q} has discriminant {Q.discriminant}, field has {F.d}")
    return ideal_from_elements(F, [(Q.a, 0), ((F.b - Q.b) // 2, 1)])


def form_of_ideal(F: FieldInvariants, I: IdealHNF) -> QuadForm:
    """``N(x*alpha - y*beta) / N(I)`` for the primitive part ``[alpha, beta]`` of ``I``."""
    P = divide_by_integer(I, I.c)
    a, b = P.a, P.b
    nb = norm_form(F, 1, b)
    return QuadForm(a, F.b - 2 * b, nb // a)


# -- torsion points -----------------------------------------------------------


@dataclass(frozen=True)
class TorsionPoint:
    """``omega = (a*tau_K + b) / D`` normalised so that ``gcd(a, b, D) == 1``."""

    a: int
    b: int
    D: int

    @classmethod
    def make(cls, a: int, b: int, D: int) -> "TorsionPoint":
        if D < 1:
            raise DomainError(f"denominator must be positive, got {D}")
        a, b = a % D, b % D
        g = gcd(gcd(a, b), D)
        a, b, D = a // g, b // g, D // g
        if D == 1:
            raise DomainError("omega lies in O_K")
        return cls(a, b, D)

    @property
    def siegel_index(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.a, self.D), Fraction(self.b, self.D)

    def __str__(self) -> str:
        return f"({self.a}*tau+{self.b})/{self.D}"


def annihilator(F: FieldInvariants, w: TorsionPoint) -> IdealHNF:
    """``{x in O_K : x*omega in O_K}`` computed as ``D * conj(G) / N(G)``, ``G = (D) + (D*omega)``."""
    G = ideal_from_elements(F, [(w.D, 0), (w.b, w.a)])
    num = ideal_multiply(integer_ideal(F, w.D), conjugate_ideal(F, G))
    return divide_by_integer(num, G.norm)


def find_omega(F: FieldInvariants, I: IdealHNF) -> TorsionPoint:
    """Lexicographically smallest ``(a, b)`` with ``annihilator((a*tau+b)/N_I) == I``."""
    if I.is_unit_ideal:
        raise DomainError("the unit ideal has no torsion generator")
    N = I.a
    # candidates D*omega range over N * I^{-1} = N * conj(I) / N(I)
    J = divide_by_integer(ideal_multiply(integer_ideal(F, N), conjugate_ideal(F, I)), I.norm)
    for y in range(0, N, J.c):
        x0 = (y // J.c) * J.b % J.a
        for x in range(x0, N, J.a):
            if x == 0 and y == 0:
                continue
            w = TorsionPoint.make(y, x, N)
            if w.D == N and annihilator(F, w) == I:
                return w
    raise InternalError(f"no torsion generator found for {I}")


def ideals_up_to_norm(F: FieldInvariants, bound: int) -> list[IdealHNF]:
    """Every nonzero integral ideal of norm at most ``bound``."""
    out = []
    c = 1
    while c * c <= bound:
        for a in range(1, bound // (c * c) + 1):
            for b in range(a):
                if norm_form(F, 1, b) % a == 0:
                    out.append(IdealHNF(F.d, c * a, (c * b) % (c * a), c))
        c += 1
    return sorted(out, key=lambda I: (I.norm, I.a, I.b, I.c))
