"""Integer and rational primitives: factorization, valuations, residue and Hilbert symbols."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

INF = "inf"


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p**e
        return n

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> Factorization:
    """Prime factorization of a nonzero integer by trial division."""
    if n == 0:
        raise ValueError("cannot factorize 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    factors = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return Factorization(sign, tuple(factors))


def prime_divisors(n: int) -> tuple[int, ...]:
    return factorize(n).primes()


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return factorize(p).factors == ((p, 1),)


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    _check_prime(p)
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel, so n = squarefree_part(n) * k**2."""
    f = factorize(n)
    s = f.sign
    for p, e in f.factors:
        if e % 2:
            s *= p
    return s


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        raise ValueError("kronecker symbol needs n != 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _as_int_mod_squares(x) -> int:
    """An integer in the same square class as the nonzero rational x."""
    if isinstance(x, int):
        if x == 0:
            raise ValueError("Hilbert symbol needs nonzero arguments")
        return x
    if isinstance(x, Rational):
        if x == 0:
            raise ValueError("Hilbert symbol needs nonzero arguments")
        return x.numerator * x.denominator
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


def _split(n: int, p: int) -> tuple[int, int]:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def hilbert(a, b, place) -> int:
    """Hilbert symbol (a,b) at a prime p or at infinity (place='inf' or math.inf)."""
    a = _as_int_mod_squares(a)
    b = _as_int_mod_squares(b)
    if place == INF or place == math.inf:
        return -1 if a < 0 and b < 0 else 1
    p = place
    _check_prime(p)
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * kronecker(u, p) ** beta * kronecker(v, p) ** alpha


def sigma1(n: int) -> int:
    if n < 1:
        raise ValueError("sigma1 needs n >= 1")
    total = 1
    for p, e in factorize(n).factors:
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def is_square_qp(x: int, p: int) -> bool:
    """Whether the nonzero integer x is a square in Q_p."""
    e, u = _split(x, p)
    if e % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return kronecker(u, p) == 1


def format_rational(x) -> str:
    """'p/q' in lowest terms, plain integer when the denominator is 1."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
