"""Thin wrappers over sympy's elementary number theory."""
from __future__ import annotations

from sympy import divisors as _divisors
from sympy import factorint, isprime, n_order, primitive_root, totient


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def euler_phi(n: int) -> int:
    return int(totient(n))


def divisors(n: int) -> list[int]:
    return [int(d) for d in _divisors(n)]


def factorize(n: int) -> dict[int, int]:
    return {int(p): int(e) for p, e in factorint(n).items()}


def multiplicative_order(a: int, m: int) -> int:
    """Order of a in Z_m^*; m = 1 and m = 2 give 1."""
    if m <= 2:
        return 1
    return int(n_order(a % m, m))


def is_primitive_mod(p: int, r: int) -> bool:
    """True iff p generates Z_r^* (r prime)."""
    return p % r != 0 and multiplicative_order(p, r) == r - 1


def generator_mod(q: int) -> int:
    return int(primitive_root(q))


def primes_congruent_one(n: int, above: int, count: int) -> list[int]:
    """The first ``count`` primes q > above with q = 1 (mod n)."""
    out: list[int] = []
    q = above + 1
    q += (1 - q) % n
    while len(out) < count:
        if isprime(q):
            out.append(q)
        q += n
    return out
