"""Precision contexts and complex values carrying an absolute error bound.

Every evaluator works inside an :class:`EvalContext`.  For ``digits > 15``
the context owns a private mpmath ``MPContext`` (no global precision state is
touched, so contexts can be used from several threads); ``digits == 15``
selects mpmath's float-backed ``fp`` context, which is much faster and is
meant for large certification sweeps.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .cmfield import Surd
from .errors import PrecisionError

GUARD_DIGITS = 10
MIN_DIGITS = 15
MAX_TERMS = 400


def default_digits() -> int:
    return int(os.environ.get("RAYCLASS_DIGITS", "30"))


@dataclass(frozen=True)
class EvalContext:
    digits: int = field(default_factory=default_digits)
    mp: object = field(init=False, repr=False, compare=False)
    eps: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise PrecisionError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.digits == MIN_DIGITS:
            mp = mpmath.fp
            eps = 2.0**-52
        else:
            mp = mpmath.MPContext()
            mp.dps = self.digits + GUARD_DIGITS
            eps = mp.mpf(10) ** (-(self.digits + GUARD_DIGITS))
        object.__setattr__(self, "mp", mp)
        object.__setattr__(self, "eps", eps)

    @property
    def is_float(self) -> bool:
        return self.mp is mpmath.fp

    def raised(self, extra: int) -> "EvalContext":
        return context(self.digits + max(int(extra), 1))

    def cutoff(self, im_tau) -> int:
        """Series length M with ``|q|^M < 10^-(digits+10)``."""
        if im_tau <= 0:
            raise PrecisionError("tau must lie in the upper half-plane")
        M = math.ceil((self.digits + 10) * math.log(10) / (2 * math.pi * float(im_tau))) + 8
        if M > MAX_TERMS:
            achievable = int(2 * math.pi * float(im_tau) * (MAX_TERMS - 8) / math.log(10)) - 10
            raise PrecisionError(
                f"Im(tau)={float(im_tau):.4g} needs {M} series terms; "
                f"about {max(achievable, 0)} digits are achievable within {MAX_TERMS}"
            )
        return M

    def number(self, x):
        """Convert ints, Fractions, Surds, complex and numeric strings."""
        mp = self.mp
        if isinstance(x, Surd):
            return x.to_complex(mp)
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        if isinstance(x, str):
            return parse_complex(self, x)
        if isinstance(x, complex):
            return mp.mpc(x.real, x.imag)
        return mp.mpc(x) if not isinstance(x, (int, float)) else mp.mpf(x)

    def fraction(self, x: Fraction):
        return self.mp.mpf(x.numerator) / x.denominator

    def cv(self, value, err=0) -> "ComplexValue":
        return ComplexValue(self.mp.mpc(value), self.mp.mpf(err) + abs(self.mp.mpc(value)) * self.eps)

    def nstr(self, x, n: int | None = None) -> str:
        n = n or self.digits
        if self.is_float:
            return format(float(x), f".{min(n, 17)}g")
        return mpmath.nstr(x, n, min_fixed=-12, max_fixed=20)


@lru_cache(maxsize=64)
def context(digits: int) -> EvalContext:
    return EvalContext(digits)


def parse_complex(ctx: EvalContext, text: str):
    """Parse ``"i"``, ``"1+2i"``, ``"0.5+0.866j"`` style literals at full precision."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if s in ("i", "+i"):
        return ctx.mp.mpc(0, 1)
    if s == "-i":
        return ctx.mp.mpc(0, -1)
    if not s.endswith("i"):
        return ctx.mp.mpc(ctx.mp.mpf(s), 0)
    body = s[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    while cut > 0 and body[cut - 1] in "eE":
        cut = max(body.rfind("+", 0, cut - 1), body.rfind("-", 0, cut - 1))
    re_part, im_part = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return ctx.mp.mpc(ctx.mp.mpf(re_part), ctx.mp.mpf(im_part))


@dataclass(frozen=True)
class ComplexValue:
    """A complex number together with a bound on its absolute error."""

    value: object
    err: object

    @property
    def re(self):
        return self.value.real

    @property
    def im(self):
        return self.value.imag

    def __abs__(self):
        return abs(self.value)

    @property
    def rel_err(self):
        a = abs(self.value)
        return self.err / a if a else float("inf")

    def _wrap(self, other):
        if isinstance(other, ComplexValue):
            return other
        if isinstance(other, Fraction):
            other = type(self.err)(other.numerator) / other.denominator
        return ComplexValue(other, 0 * self.err)

    def __add__(self, other):
        o = self._wrap(other)
        return ComplexValue(self.value + o.value, self.err + o.err)

    __radd__ = __add__

    def __neg__(self):
        return ComplexValue(-self.value, self.err)

    def __sub__(self, other):
        o = self._wrap(other)
        return ComplexValue(self.value - o.value, self.err + o.err)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        v = self.value * o.value
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return ComplexValue(v, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        den = abs(o.value)
        if den <= o.err:
            raise PrecisionError("division by a value indistinguishable from zero")
        v = self.value / o.value
        err = (self.err + abs(v) * o.err) / (den - o.err)
        return ComplexValue(v, err)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise TypeError("only non-negative integer powers are supported")
        result = ComplexValue(1 + 0 * self.value, 0 * self.err)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> "ComplexValue":
        return ComplexValue(self.value.conjugate(), self.err)

    def agrees_with(self, other: "ComplexValue", rel: float = 0.0) -> bool:
        """True if the two values differ by at most their error bounds plus ``rel`` relative."""
        diff = abs(self.value - other.value)
        scale = max(abs(self.value), abs(other.value))
        return diff <= self.err + other.err + rel * scale

    def to_dict(self, ctx: EvalContext) -> dict:
        return {
            "re": ctx.nstr(self.re),
            "im": ctx.nstr(self.im),
            "err": ctx.nstr(self.err, 3),
        }
