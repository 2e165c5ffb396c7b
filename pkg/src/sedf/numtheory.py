"""Small integer and polynomial helpers over prime fields.

Polynomials are coefficient lists, lowest degree first, entries in [0, p).
"""
from __future__ import annotations

from functools import lru_cache
from math import isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n >= 1`` as ``((p, e), ...)`` with p increasing."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``q == p**m`` for a prime p, else None."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    return fac[0]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def prime_powers_up_to(limit: int) -> list[int]:
    return [q for q in range(2, limit + 1) if prime_power(q) is not None]


# --- polynomials over F_p -------------------------------------------------


def poly_trim(a: list[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``mod``."""
    a = poly_trim(a)
    dm = len(mod) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        if c:
            for i, mc in enumerate(mod):
                a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
        a = poly_trim(a)
    return a


def poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return poly_mod([c % p for c in prod], mod, p)


def poly_powmod(a: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = poly_mod(a, mod, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod, p)
        base = poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def int_to_poly(x: int, p: int, m: int) -> list[int]:
    digits = []
    for _ in range(m):
        x, r = divmod(x, p)
        digits.append(r)
    return digits


def poly_to_int(a: list[int], p: int) -> int:
    x = 0
    for c in reversed(a):
        x = x * p + c
    return x


def is_irreducible(f: list[int], p: int) -> bool:
    """Trial division of monic ``f`` by every monic polynomial of degree <= deg(f)/2."""
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    for d in range(1, m // 2 + 1):
        for low in range(p**d):
            g = int_to_poly(low, p, d) + [1]
            if not poly_mod(f, g, p):
                return False
    return True


def canonical_modulus(p: int, m: int) -> list[int]:
    """First monic irreducible of degree m, scanning lower coefficients by encoding."""
    for low in range(p**m):
        f = int_to_poly(low, p, m) + [1]
        if is_irreducible(f, p):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {m} over F_{p}")
