import math
from functools import lru_cache
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shimura.arith import kronecker, valuation
from shimura.forms import (
    BinaryForm,
    alpha_p,
    automorphism_count,
    class_number,
    content_split,
    discriminant,
    enumerate_classes,
    equivalent_proper,
    h_prime,
    is_anisotropic_p,
    is_modular_p,
    is_reduced,
    primitively_represents_mod,
    reduce,
    represents_zp,
)
from shimura.invariants import is_fundamental_discriminant

from oracles import class_number_analytic, classes_by_double_loop

F = BinaryForm


@st.composite
def definite_forms(draw):
    a = draw(st.integers(1, 40))
    c = draw(st.integers(1, 40))
    b = draw(st.integers(-2 * math.isqrt(a * c), 2 * math.isqrt(a * c)))
    if b * b >= 4 * a * c:
        b = 0
    return F(a, b, c)


def _word(ks):
    # product of T^k S over the word; S = [[0,-1],[1,0]], T = [[1,1],[0,1]]
    p, q, r, s = 1, 0, 0, 1
    for k in ks:
        p, q, r, s = p * k + q, -p, r * k + s, -r
    return p, q, r, s


unimodular = st.lists(st.integers(-4, 4), max_size=5).map(_word)


def transform(phi, m):
    p, q, r, s = m
    return F(phi(p, r), 2 * phi.a * p * q + phi.b * (p * s + q * r) + 2 * phi.c * r * s, phi(q, s))


def test_construction_and_discriminant():
    assert discriminant(F(1, 0, 1)) == -4
    assert discriminant(F(2, 2, 7)) == -52
    assert discriminant(F(13, -13, 13)) == -507
    with pytest.raises(ValueError):
        F(1, 2, 1)
    assert F.parse("[2,-1,5]") == F(2, -1, 5) == F.parse("2 -1 5")
    assert str(F(2, -1, 5)) == "[2,-1,5]"


def test_content_split():
    assert content_split(F(2, 0, 39), 13, 3) == (content_split(F(2, 0, 39), 13, 3).__class__(1, 1, 1))
    s = content_split(F(39, 0, 39), 13, 3)
    assert (s.m1, s.m2, s.m3) == (13, 3, 1)
    s = content_split(F(6, 6, 21), 13, 3)
    assert (s.m1, s.m2, s.m3) == (1, 3, 1)
    s = content_split(F(10, 0, 130), 13, 3)
    assert (s.m1, s.m2, s.m3) == (1, 1, 10)


def test_reduce_examples():
    assert reduce(F(1, 0, 1)) == F(1, 0, 1)
    assert reduce(F(7, -1, 7)) == F(7, 1, 7)
    assert reduce(F(5, -3, 5)) == F(5, 3, 5)
    with pytest.raises(ValueError):
        reduce(F(1, 0, -1))


@given(definite_forms(), unimodular)
def test_reduce_is_class_invariant(phi, m):
    r = reduce(phi)
    assert is_reduced(r)
    assert r.discriminant == phi.discriminant
    assert reduce(transform(phi, m)) == r


def test_equivalence_examples():
    assert equivalent_proper(F(2, 1, 5), F(2, 1, 5))
    assert not equivalent_proper(F(2, 1, 5), F(2, -1, 5))
    assert equivalent_proper(F(5, -3, 5), F(5, 3, 5))


def test_enumerate_classes_examples():
    assert enumerate_classes(-4) == [F(1, 0, 1)]
    assert set(enumerate_classes(-52)) == {F(1, 0, 13), F(2, 2, 7)}
    assert set(enumerate_classes(-39)) == {F(1, 1, 10), F(2, 1, 5), F(2, -1, 5), F(3, 3, 4)}


@pytest.mark.parametrize("delta,h", [(-24, 2), (-7, 1), (-12, 1), (-60, 2), (-15, 2), (-156, 4)])
def test_class_numbers(delta, h):
    assert class_number(delta) == h


def test_class_numbers_double_loop_and_analytic():
    for delta in range(-3, -400, -1):
        if delta % 4 not in (0, 1):
            continue
        h = class_number(delta)
        assert h == classes_by_double_loop(delta)
        if delta < -4 and is_fundamental_discriminant(delta):
            assert h == class_number_analytic(delta)


def test_h_prime():
    assert h_prime(-3) == Fraction(1, 3)
    assert h_prime(-4) == Fraction(1, 2)
    assert h_prime(-60) == 2
    with pytest.raises(ValueError):
        h_prime(-5)


def brute_automorphisms(phi):
    return sum(
        1
        for m in product(range(-2, 3), repeat=4)
        if m[0] * m[3] - m[1] * m[2] == 1 and transform(phi, m) == phi
    )


def test_automorphism_examples():
    assert automorphism_count(F(1, 0, 1)) == 4
    assert automorphism_count(F(1, -1, 1)) == 6
    assert automorphism_count(F(2, 0, 39)) == 2


@pytest.mark.parametrize("delta", [-3, -4, -12, -15, -16, -27, -39, -52, -75, -156])
def test_automorphisms_by_brute_force(delta):
    for phi in enumerate_classes(delta):
        assert automorphism_count(phi) == brute_automorphisms(phi)
        assert automorphism_count(phi.scaled(13)) == brute_automorphisms(phi)


def test_alpha_and_modularity():
    assert alpha_p(F(13, 0, 13), 13) == 1
    assert alpha_p(F(2, 0, 39), 13) == 2
    assert alpha_p(F(2, 2, 7), 3) == 1
    assert is_modular_p(F(1, 0, 1), 2)
    assert not is_modular_p(F(1, 1, 1), 3)


def test_anisotropy():
    assert not any(is_anisotropic_p(F(1, 0, -1), p) for p in (2, 3, 13))
    assert is_anisotropic_p(F(2, 2, 7), 3)
    assert is_anisotropic_p(F(2, 1, 5), 3)


@lru_cache(maxsize=None)
def primitive_values(phi, p, K):
    """Residues mod p^K of phi over primitive vectors."""
    mod = p**K
    r = np.arange(mod, dtype=np.int64)
    x, y = np.meshgrid(r, r, indexing="ij")
    keep = (x % p != 0) | (y % p != 0)
    vals = (phi.a * x * x + phi.b * x * y + phi.c * y * y)[keep] % mod
    return frozenset(np.unique(vals).tolist())


def represents_by_search(phi, t, p):
    """t = p^(2j) t' with t' primitively represented; residues mod p^(2 v(d) + 2) decide."""
    g = p ** valuation(phi.content, p)
    if t % g:
        return False
    phi, t = phi.scaled(Fraction(1, g)), t // g
    K = 2 * valuation(phi.discriminant, p) + 2
    vals = primitive_values(phi, p, K)
    j = 0
    while t % p ** (2 * j) == 0:
        if (t // p ** (2 * j)) % p**K in vals:
            return True
        j += 1
    return False


ZP_FORMS = {
    3: [F(1, 0, 1), F(1, 1, 1), F(2, 1, 5), F(1, 0, 3), F(2, 0, 9), F(3, 0, 3), F(1, 0, -2), F(3, 1, 15)],
    5: [F(1, 0, 1), F(1, 1, 1), F(2, 1, 5), F(1, 0, 5), F(5, 0, 10), F(1, 0, -2), F(2, 1, 3)],
    7: [F(1, 0, 1), F(1, 1, 1), F(1, 0, 7), F(7, 0, 14), F(1, 0, -3), F(2, 1, 4)],
}


@pytest.mark.parametrize("p", [3, 5, 7])
def test_represents_zp_against_search(p):
    for phi in ZP_FORMS[p]:
        for t in [x for x in range(-30, 31) if x] + [p**3, 2 * p**3, -(p**4)]:
            assert represents_zp(phi, t, p) == represents_by_search(phi, t, p), (phi, t)


def test_primitively_represents_mod_against_residues():
    cases = [(3, F(1, 0, 3), 4), (3, F(2, 1, 5), 4), (5, F(1, 0, 5), 3), (5, F(2, 1, 3), 2), (2, F(1, 0, 1), 6), (2, F(1, 1, 1), 4)]
    for p, phi, K in cases:
        vals = primitive_values(phi, p, K)
        for t in range(1, 40):
            assert primitively_represents_mod(phi, t, p) == (t % p**K in vals), (phi, t)


def test_primitive_representation_mod():
    assert primitively_represents_mod(F(1, 0, 1), 2, 2)
    assert not primitively_represents_mod(F(1, 0, 1), 3, 3)
    assert not primitively_represents_mod(F(1, 0, 5), 2, 5)
    assert primitively_represents_mod(F(1, 0, 5), 4, 5)


def test_scaled_and_primitive():
    assert F(6, 6, 21).primitive() == F(2, 2, 7)
    assert F(2, 2, 7).scaled(3) == F(6, 6, 21)
    with pytest.raises(ValueError):
        F(2, 2, 7).scaled(Fraction(1, 2))
