"""Small exact integer helpers (primality, factorisation, squarefreeness)."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``|n|`` as ``((p, e), ...)`` with p increasing."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_factors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def squarefree_part(n: int) -> tuple[int, int]:
    """Write ``n = k**2 * m`` with m squarefree; return ``(k, m)`` keeping the sign on m."""
    k, m = 1, (1 if n > 0 else -1)
    for p, e in factorize(n):
        k *= p ** (e // 2)
        m *= p ** (e % 2)
    return k, m


def gcd3(a: int, b: int, c: int) -> int:
    return gcd(gcd(a, b), c)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0
