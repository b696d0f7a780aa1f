from fractions import Fraction

import pytest

from shimura.arith import kronecker, prime_divisors
from shimura.forms import BinaryForm as F, class_number, reduce
from shimura.invariants import (
    NotRepresentedError,
    SurfaceParams,
    a_Dp,
    a_beta_splits_at_p,
    arithmetic_genus,
    chi_Dp,
    content_split,
    count_elliptic,
    covolume,
    elliptic_data,
    elliptic_form_candidates,
    euler_orbifold,
    f_n,
    is_fundamental_discriminant,
    kappa,
    lambda_beta_discriminant,
    local_verdicts,
    represents_globally,
    represents_locally_p,
    s_phi,
    s_phi_breakdown,
    zeta_k_minus1,
)

from oracles import example_f

P = SurfaceParams(13, 3, 2)


def test_params_validation():
    with pytest.raises(ValueError):
        SurfaceParams(12, 1, 1).require_special()
    with pytest.raises(ValueError):
        SurfaceParams(13, 13, 1)
    with pytest.raises(ValueError):
        SurfaceParams(15)
    assert P.splitting(3) == "split" and P.splitting(2) == "inert" and P.splitting(13) == "ramified"


def test_fundamental_discriminants():
    assert [D for D in range(2, 30) if is_fundamental_discriminant(D)] == [5, 8, 12, 13, 17, 21, 24, 28, 29]


def test_zeta_and_volume():
    assert zeta_k_minus1(13) == Fraction(1, 6)
    assert zeta_k_minus1(5) == Fraction(1, 30)
    assert zeta_k_minus1(8) == Fraction(1, 12)
    assert covolume(P) == Fraction(4, 3)
    assert covolume(SurfaceParams(13)) == Fraction(1, 3)
    assert covolume(SurfaceParams(17)) == 2 * zeta_k_minus1(17)


def test_euler_and_genus():
    assert euler_orbifold(Fraction(4, 3), {2: 8, 3: 4}) == 8
    assert euler_orbifold(Fraction(5, 7), {}) == Fraction(5, 7)
    assert euler_orbifold(Fraction(4, 3), {2: 0, 3: 4}) == 4
    assert euler_orbifold(covolume(P), elliptic_data(P)) == 8
    assert arithmetic_genus(8) == 2 and arithmetic_genus(0) == 0
    assert arithmetic_genus(Fraction(4, 3)) == Fraction(1, 3)


def test_kappa_and_local_factors():
    assert (kappa(26, P), kappa(2, P), kappa(13, P)) == (2, 1, 2)
    assert chi_Dp(4, 13, 13) == 1 and chi_Dp(13, 13, 13) == 0 and chi_Dp(2, 13, 13) == -1
    assert (a_Dp(169, 13, 13), a_Dp(13, 13, 13), a_Dp(2, 13, 13)) == (2, 1, 1)


def test_f_n_examples():
    assert [f_n(N, P) for N in (9, 169, 4, 2)] == [0, 2, 0, 1]
    assert all(f_n(N, P).denominator == 1 for N in range(1, 500))


def test_f_n_forces_B():
    """The closed form holds exactly for the B that are non-residues mod 13."""
    for B in range(1, 40):
        if B % 13 == 0:
            continue
        params = SurfaceParams(13, 3, B)
        agrees = all(f_n(N, params) == example_f(N) for N in range(1, 500))
        assert agrees == (kronecker(B, 13) == -1), B


def test_lambda_beta_discriminant():
    assert [lambda_beta_discriminant(N, P) for N in (2, 13, 3)] == [6, 39, 3]


def test_a_beta_examples():
    assert a_beta_splits_at_p(2, 3, P) is False
    assert a_beta_splits_at_p(4, 7, P) is True
    # ramified at 2 and 3; the count must be even, so 13 splits
    assert a_beta_splits_at_p(2, 13, P) is True


def test_a_beta_ramification_is_even():
    for N in range(1, 300):
        if f_n(N, P) == 0:
            continue
        ram = [p for p in prime_divisors(2 * 3 * 13 * N) if not a_beta_splits_at_p(N, p, P)]
        assert len(ram) % 2 == 0, (N, ram)


def test_local_representability_examples():
    assert not represents_locally_p(F(1, 0, 13), 13, P)
    assert represents_locally_p(F(2, 2, 7), 13, P)
    assert represents_locally_p(F(2, 0, 39), 7, P)
    assert not represents_locally_p(F(39, -39, 39), 3, P)
    assert represents_globally(F(2, 0, 39), P)
    assert not represents_globally(F(1, 0, 13), P)
    assert represents_globally(F(13, 0, 13), P)


def test_inert_prime_dividing_content_fails():
    v = {x.prime: x for x in local_verdicts(F(4, 2, 14), P)}
    assert not v[2].ok and v[2].clause == "i"


def test_content_split_supports():
    for phi in [F(39, 0, 39), F(6, 6, 21), F(13, -13, 13)]:
        s = content_split(phi, 13, 3)
        assert s.m1 * s.m2 * s.m3 == phi.content
        assert all(13 % p == 0 for p in prime_divisors(s.m1))
        assert all(3 % p == 0 for p in prime_divisors(s.m2))


def test_s_phi_examples():
    assert s_phi(F(2, 0, 39), P) == 2
    assert s_phi(F(5, 2, 8), P) == 1
    assert s_phi(F(13, 0, 39), P) == 2
    assert s_phi(F(5, -3, 5), P) == 2
    assert s_phi(F(2, 1, 5), P) == Fraction(1, 3)


def test_s_phi_breakdown():
    br = s_phi_breakdown(F(2, 0, 39), P)
    assert br.h_argument == -24 and br.h_value == class_number(-24)
    assert br.power_of_two == Fraction(1, 2) and br.alpha_D == {13: 2} and br.alpha_L == {3: 2}
    with pytest.raises(NotRepresentedError) as exc:
        s_phi(F(1, 0, 13), P)
    assert exc.value.verdict.prime == 13 and exc.value.verdict.clause == "iii"


def test_elliptic_candidates():
    two = {reduce(f) for f in elliptic_form_candidates(P, 2)}
    three = {reduce(f) for f in elliptic_form_candidates(P, 3)}
    assert two == {F(13, 0, 13), F(39, 0, 39), F(2, 2, 7), F(6, 6, 21)}
    assert three == {reduce(F(13, -13, 13)), F(2, 1, 5), F(2, -1, 5)}
    assert reduce(F(39, -39, 39)) not in three


def test_elliptic_counts():
    assert count_elliptic(P, 2) == 8
    assert count_elliptic(P, 3) == 4
    with pytest.raises(ValueError):
        count_elliptic(P, 5)


def test_per_form_counts_are_integral():
    # count = s * (2n) / w: the number of points over the weighted count s
    for pt in elliptic_data(P).points:
        assert pt.s * 2 * pt.order / pt.w == pt.count
        assert represents_globally(pt.form, P)
    rho = [pt for pt in elliptic_data(P).points if pt.form == F(13, -13, 13)]
    assert rho[0].s == 2 and rho[0].w == 6 and rho[0].count == 2


def test_hilbert_modular_sanity():
    """Without the order (dL=1, B=1) the counts match h(-4D) and h(-3D) for D=13."""
    params = SurfaceParams(13)
    assert elliptic_data(params).counts == {2: class_number(-52), 3: class_number(-39)}
