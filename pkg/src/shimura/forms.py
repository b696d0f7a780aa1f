"""Integral binary quadratic forms [a,b,c] = a x^2 + b x y + c y^2."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .arith import is_square_qp, kronecker, prime_divisors, valuation


@dataclass(frozen=True, order=True)
class BinaryForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.b * self.b - 4 * self.a * self.c == 0:
            raise ValueError(f"degenerate form {self}")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return math.gcd(self.a, self.b, self.c)

    @property
    def positive_definite(self) -> bool:
        return self.discriminant < 0 and self.a > 0

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def scaled(self, m) -> "BinaryForm":
        """The form multiplied by m; m may be a Fraction dividing the content."""
        a, b, c = (Fraction(t) * m for t in (self.a, self.b, self.c))
        if any(t.denominator != 1 for t in (a, b, c)):
            raise ValueError(f"{self} is not divisible by {m}")
        return BinaryForm(int(a), int(b), int(c))

    def primitive(self) -> "BinaryForm":
        return self.scaled(Fraction(1, self.content))

    def __str__(self) -> str:
        return f"[{self.a},{self.b},{self.c}]"

    @classmethod
    def parse(cls, text: str) -> "BinaryForm":
        parts = text.strip().strip("[]").replace(",", " ").split()
        if len(parts) != 3:
            raise ValueError(f"expected three coefficients, got {text!r}")
        return cls(*(int(t) for t in parts))


@dataclass(frozen=True)
class ContentSplit:
    m1: int
    m2: int
    m3: int


def discriminant(phi: BinaryForm) -> int:
    return phi.discriminant


def content_split(phi: BinaryForm, D: int, dL: int) -> ContentSplit:
    """Split the content m = m1*m2*m3 by primes of D, primes of dL, and the rest."""
    if math.gcd(D, dL) != 1:
        raise ValueError("D and dL must be coprime")
    m = phi.content
    m1 = m2 = 1
    for p in prime_divisors(m):
        pe = p ** valuation(m, p)
        if D % p == 0:
            m1 *= pe
        elif dL % p == 0:
            m2 *= pe
    return ContentSplit(m1, m2, m // (m1 * m2))


def _require_definite(phi: BinaryForm) -> None:
    if not phi.positive_definite:
        raise ValueError(f"{phi} is not positive definite")


def is_reduced(phi: BinaryForm) -> bool:
    a, b, c = phi.a, phi.b, phi.c
    if not (-a < b <= a <= c):
        return False
    return not (a == c and b < 0)


def reduce(phi: BinaryForm) -> BinaryForm:
    """Canonical reduced representative of the proper class of a definite form."""
    _require_definite(phi)
    a, b, c = phi.a, phi.b, phi.c
    while True:
        # move b into (-a, a] by x -> x - k y
        k = (a - b) // (2 * a)
        if k:
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return BinaryForm(a, b, c)


def equivalent_proper(phi: BinaryForm, psi: BinaryForm) -> bool:
    return reduce(phi) == reduce(psi)


def _check_discriminant(delta: int) -> None:
    if delta >= 0 or delta % 4 not in (0, 1):
        raise ValueError(f"{delta} is not a negative discriminant")


def enumerate_classes(delta: int) -> list[BinaryForm]:
    """Reduced primitive positive definite forms of discriminant delta."""
    _check_discriminant(delta)
    forms = []
    a = 1
    while 3 * a * a <= -delta:
        for b in range(-a + 1, a + 1):
            if (b - delta) % 2:
                continue
            num = b * b - delta
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(a, b, c) == 1:
                forms.append(BinaryForm(a, b, c))
        a += 1
    return forms


def class_number(delta: int) -> int:
    return len(enumerate_classes(delta))


def h_prime(delta: int) -> Fraction:
    """Class number with the conventions h'(-3) = 1/3 and h'(-4) = 1/2."""
    _check_discriminant(delta)
    if delta == -3:
        return Fraction(1, 3)
    if delta == -4:
        return Fraction(1, 2)
    return Fraction(class_number(delta))


def automorphism_count(phi: BinaryForm) -> int:
    """Order of the proper (determinant one) automorphism group."""
    r = reduce(phi)
    a, b, c = r.a, r.b, r.c
    if a == b == c:
        return 6
    if b == 0 and a == c:
        return 4
    return 2


def is_modular_p(phi: BinaryForm, p: int) -> bool:
    """Whether phi is p^k times a unimodular form over Z_p.

    Uses the Gram matrix [[2a, b], [b, 2c]], so at p = 2 a form like [1,0,1] counts as modular.
    """
    g = math.gcd(2 * phi.a, phi.b, 2 * phi.c)
    return valuation(phi.discriminant, p) == 2 * valuation(g, p)


def alpha_p(phi: BinaryForm, p: int) -> int:
    return 1 if is_modular_p(phi, p) else 2


def is_anisotropic_p(phi: BinaryForm, p: int) -> bool:
    """phi is anisotropic over Q_p iff its discriminant is not a square there."""
    return not is_square_qp(phi.discriminant, p)


def _unit_vector_value(phi: BinaryForm, p: int) -> int:
    """A value of the primitive form phi that is a p-adic unit (p odd)."""
    for x, y in ((1, 0), (0, 1), (1, 1)):
        v = phi(x, y)
        if v % p:
            return v
    raise AssertionError("primitive form with no unit value at an odd prime")


def represents_zp(phi: BinaryForm, t: int, p: int) -> bool:
    """Whether t = phi(x, y) has a solution with x, y in Z_p, for odd p and t != 0.

    Diagonalizes phi over Z_p as p^a <u1, p^k u2> and reads off the answer from the
    valuation and residue class of t.
    """
    if p == 2:
        raise ValueError("represents_zp handles odd primes only; use primitively_represents_mod")
    if t == 0:
        raise ValueError("t must be nonzero")
    a = valuation(phi.content, p)
    psi = phi.scaled(Fraction(1, p**a))
    u1 = _unit_vector_value(psi, p)
    d = psi.discriminant
    k = valuation(d, p)
    # -d/4 = u1 * p^k * u2 up to unit squares
    u2 = (-d // p**k) * u1
    s = valuation(t, p) - a
    if s < 0:
        return False
    w = t // p ** valuation(t, p)
    cls = lambda x: kronecker(x, p)
    if k % 2 == 0 and cls(-u1 * u2) == 1 and s >= k:
        return True
    if s % 2 == 0 and cls(w) == cls(u1):
        return True
    if s >= k and (s - k) % 2 == 0 and cls(w) == cls(u2):
        return True
    return k % 2 == 0 and s >= k and s % 2 == 0


def primitively_represents_mod(phi: BinaryForm, t: int, p: int) -> bool:
    """Whether phi(x, y) = t has a solution with (x, y) primitive over Z_p.

    Exhaustive search modulo p^K with a Hensel certificate; exact, but only
    practical when p^K is small (p = 2 or small odd primes).
    """
    vd = valuation(phi.discriminant, p)
    K = 2 * vd + 1
    mod = p**K
    for x, y in product(range(mod), repeat=2):
        if x % p == 0 and y % p == 0:
            continue
        f = phi(x, y) - t
        if f % mod:
            continue
        gx = 2 * phi.a * x + phi.b * y
        gy = phi.b * x + 2 * phi.c * y
        g = math.gcd(gx, gy, mod)
        delta = valuation(g, p) if g else K
        if f == 0 or valuation(f, p) >= 2 * delta + 1:
            return True
    return False
