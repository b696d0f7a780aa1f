"""Closed-form arithmetic of the surfaces: volumes, curve counts, special and elliptic points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .arith import hilbert, kronecker, prime_divisors, sigma1, squarefree_part, valuation
from .forms import (
    BinaryForm,
    alpha_p,
    automorphism_count,
    content_split,
    enumerate_classes,
    h_prime,
    is_anisotropic_p,
    is_modular_p,
    primitively_represents_mod,
    reduce,
    represents_zp,
)


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return squarefree_part(D) == D
    if D % 4 == 0:
        d = D // 4
        return d % 4 in (2, 3) and squarefree_part(d) == d
    return False


@dataclass(frozen=True)
class SurfaceParams:
    """D: discriminant of the real quadratic field; dL: reduced discriminant of the order; B: level ratio."""

    D: int
    dL: int = 1
    B: int = 1

    def __post_init__(self):
        if self.D <= 1 or not is_fundamental_discriminant(self.D):
            raise ValueError(f"D={self.D} is not a positive fundamental discriminant")
        if self.dL < 1 or self.B < 1:
            raise ValueError("dL and B must be positive")
        if math.gcd(self.D, self.dL * self.B) != 1:
            raise ValueError(f"D={self.D} must be coprime to dL*B={self.dL * self.B}")

    @property
    def radicand(self) -> int:
        return self.D if self.D % 4 else self.D // 4

    def require_special(self) -> None:
        """Special-point computations need gcd(D, 6) = 1."""
        if math.gcd(self.D, 6) != 1:
            raise ValueError(f"special-point operations need gcd(D, 6) = 1, got D={self.D}")

    def splitting(self, p: int) -> str:
        k = kronecker(self.D, p)
        return {1: "split", -1: "inert", 0: "ramified"}[k]


# volumes and Euler numbers


def zeta_k_minus1(D: int) -> Fraction:
    """Siegel's formula for the Dedekind zeta value at -1 of Q(sqrt D)."""
    if D <= 1 or not is_fundamental_discriminant(D):
        raise ValueError(f"D={D} is not a positive fundamental discriminant")
    total = 0
    b = D % 2
    while b * b < D:
        term = sigma1((D - b * b) // 4)
        total += term if b == 0 else 2 * term
        b += 2
    return Fraction(total, 60)


def covolume(params: SurfaceParams) -> Fraction:
    vol = 2 * zeta_k_minus1(params.D)
    for p in prime_divisors(params.dL):
        vol *= (p - 1) ** 2
    return vol


def euler_orbifold(volume, elliptic: "Mapping[int, int] | EllipticData") -> Fraction:
    """e(X) = volume + sum over orders r of e_r (r - 1)/r."""
    counts = elliptic.counts if isinstance(elliptic, EllipticData) else elliptic
    e = Fraction(volume)
    for r, er in counts.items():
        if r < 2 or er < 0:
            raise ValueError(f"bad elliptic data r={r}, e_r={er}")
        e += Fraction(er * (r - 1), r)
    return e


def arithmetic_genus(e) -> Fraction:
    return Fraction(e) / 4


# modular curves F_N


def kappa(N: int, params: SurfaceParams) -> int:
    """Index of the norm-one group in the stabilizer of a vector of norm N (1 or 2)."""
    if N < 1:
        raise ValueError("N must be positive")
    d = params.radicand
    for p in prime_divisors(params.D):
        if hilbert(-1, params.D, p) == 1:
            if N % p:
                return 1
        else:
            vN = valuation(N, p)
            if not (valuation(d, p) <= vN < 2 * valuation(params.D, p)):
                return 1
    return 2


def chi_Dp(N: int, p: int, D: int) -> int:
    if N % p == 0:
        return 0
    return hilbert(D, N, p)


def a_Dp(N: int, p: int, D: int) -> int:
    if N == 0:
        raise ValueError("N must be nonzero")
    return 2 if valuation(N, p) >= 2 * valuation(D, p) else 1


def f_n(N: int, params: SurfaceParams) -> Fraction:
    """Number of irreducible components of F_N."""
    if N < 1:
        raise ValueError("N must be positive")
    for p in prime_divisors(params.dL):
        if N % (p * p) == 0:
            return Fraction(0)
    value = Fraction(kappa(N, params), 2)
    for p in prime_divisors(params.D):
        value *= (chi_Dp(N * params.B, p, params.D) + 1) * a_Dp(N, p, params.D)
    return value


def lambda_beta_discriminant(N: int, params: SurfaceParams) -> int:
    if N < 1:
        raise ValueError("N must be positive")
    return math.lcm(N, params.dL)


def a_beta_splits_at_p(N: int, p: int, params: SurfaceParams) -> bool:
    """Whether the quaternion algebra attached to a vector of norm N splits at p.

    At ramified primes the norm condition is tested on N*B, the reduced norm
    up to the scale between q and nr.
    """
    kind = params.splitting(p)
    if kind == "split":
        return params.dL % p != 0
    if kind == "inert":
        return valuation(N, p) % 2 == 0
    return hilbert(N * params.B, params.D, p) == 1


# local and global representability of binary forms


@dataclass(frozen=True)
class LocalVerdict:
    prime: int
    ok: bool
    clause: str = ""
    reason: str = ""

    def __str__(self) -> str:
        if self.ok:
            return f"p={self.prime}: ok" + (f" ({self.reason})" if self.reason else "")
        return f"p={self.prime}: fails clause {self.clause}: {self.reason}"


def local_verdict(phi: BinaryForm, p: int, params: SurfaceParams) -> LocalVerdict:
    m = phi.content
    d = phi.discriminant
    D, dL, B = params.D, params.dL, params.B
    kind = params.splitting(p)
    if kind == "inert" and dL % p and m % p == 0:
        return LocalVerdict(p, False, "i", f"{p} is inert and divides the content {m}")
    if dL % p == 0:
        if not is_anisotropic_p(phi, p):
            return LocalVerdict(p, False, "ii", "form is isotropic")
        if is_modular_p(phi, p):
            if m % (p * p) == 0:
                return LocalVerdict(p, False, "ii", f"modular but {p}^2 divides the content")
            return LocalVerdict(p, True, reason="anisotropic, modular")
        vd = valuation(d, p)
        if p != 2:
            if vd != 1:
                return LocalVerdict(p, False, "ii", f"non-modular with v_{p}(d)={vd} != 1")
            return LocalVerdict(p, True, reason="anisotropic, v(d)=1")
        if vd > 3:
            return LocalVerdict(p, False, "ii", f"non-modular with v_2(d)={vd} > 3")
        if primitively_represents_mod(phi, 4, 2):
            return LocalVerdict(p, False, "ii", "primitively represents 4 over Z_2")
        return LocalVerdict(p, True, reason="anisotropic, d | 8, no primitive 4")
    if kind == "ramified":
        if d % p:
            return LocalVerdict(p, False, "iii", f"{p} does not divide d={d}")
        vm = valuation(m, p)
        if vm >= 2:
            return LocalVerdict(p, False, "iii", f"{p}^2 divides the content")
        target = B if vm == 0 else -B * D
        if p == 2:
            raise ValueError("ramified p = 2 needs gcd(D, 6) = 1")
        if not represents_zp(phi, target, p):
            return LocalVerdict(p, False, "iii", f"does not represent {target} over Z_{p}")
        return LocalVerdict(p, True, reason=f"represents {target}")
    return LocalVerdict(p, True)


def represents_locally_p(phi: BinaryForm, p: int, params: SurfaceParams) -> bool:
    return local_verdict(phi, p, params).ok


def relevant_primes(phi: BinaryForm, params: SurfaceParams) -> list[int]:
    """Primes where a local condition can fail; all others impose nothing."""
    ps = set(prime_divisors(params.D)) | set(prime_divisors(params.dL))
    ps |= set(prime_divisors(phi.content))
    return sorted(ps)


def local_verdicts(phi: BinaryForm, params: SurfaceParams) -> list[LocalVerdict]:
    return [local_verdict(phi, p, params) for p in relevant_primes(phi, params)]


def represents_globally(phi: BinaryForm, params: SurfaceParams) -> bool:
    if not phi.positive_definite:
        raise ValueError(f"{phi} is not positive definite")
    return all(v.ok for v in local_verdicts(phi, params))


class NotRepresentedError(ValueError):
    def __init__(self, phi: BinaryForm, verdict: LocalVerdict):
        super().__init__(f"{phi} is not represented: {verdict}")
        self.phi = phi
        self.verdict = verdict


@dataclass(frozen=True)
class SPhiBreakdown:
    form: BinaryForm
    power_of_two: Fraction
    h_argument: int
    h_value: Fraction
    alpha_D: dict[int, int]
    alpha_L: dict[int, int]
    value: Fraction


def s_phi_breakdown(phi: BinaryForm, params: SurfaceParams) -> SPhiBreakdown:
    for v in local_verdicts(phi, params):
        if not v.ok:
            raise NotRepresentedError(phi, v)
    split = content_split(phi, params.D, params.dL)
    a = len(prime_divisors(split.m3))
    num = phi.discriminant
    den = split.m2**2 * params.D
    if num % den:
        raise ValueError(f"d({phi})={num} is not divisible by m2^2 D = {den}")
    arg = num // den
    h = h_prime(arg)
    alpha_D = {p: alpha_p(phi, p) for p in prime_divisors(params.D)}
    alpha_L = {p: alpha_p(phi, p) for p in prime_divisors(params.dL)}
    value = Fraction(2) ** (a - 1) * h
    for al in alpha_D.values():
        value *= al
    for al in alpha_L.values():
        value *= Fraction(2, al)
    return SPhiBreakdown(phi, Fraction(2) ** (a - 1), arg, h, alpha_D, alpha_L, value)


def s_phi(phi: BinaryForm, params: SurfaceParams) -> Fraction:
    """Weighted number of special points whose form is properly equivalent to phi."""
    return s_phi_breakdown(phi, params).value


# elliptic points


_SHAPE_I = {2: BinaryForm(1, 0, 1), 3: BinaryForm(1, -1, 1)}
_SHAPE_II_DISC = {2: -4, 3: -3}


@dataclass(frozen=True)
class EllipticPoint:
    """Class of elliptic points of order n sharing the form `form`."""

    order: int
    shape: str
    form: BinaryForm
    s: Fraction
    w: int
    count: int

    @property
    def cyclic_type(self) -> tuple[int, int]:
        """(r, a) of the quotient singularity: scalar rotation for shape ii, else inverse pair."""
        if self.order == 2:
            return (2, 1)
        return (3, 1) if self.shape == "ii" else (3, 2)


@dataclass(frozen=True)
class EllipticData:
    points: tuple[EllipticPoint, ...]
    rejected: tuple[tuple[int, BinaryForm, LocalVerdict], ...] = field(default=())

    @property
    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for pt in self.points:
            out[pt.order] = out.get(pt.order, 0) + pt.count
        return out


def _check_order(n: int) -> None:
    if n not in (2, 3):
        raise ValueError(f"elliptic order must be 2 or 3, got {n}")


def _shaped_candidates(params: SurfaceParams, n: int) -> list[tuple[str, BinaryForm]]:
    divisors = [m for m in range(1, params.dL + 1) if params.dL % m == 0]
    out = []
    base = _SHAPE_I[n]
    for m in divisors:
        out.append(("i", base.scaled(m * params.D)))
    for phi0 in enumerate_classes(_SHAPE_II_DISC[n] * params.D):
        for m in divisors:
            out.append(("ii", phi0.scaled(m)))
    return out


def _classify_candidates(params: SurfaceParams, n: int):
    params.require_special()
    _check_order(n)
    kept, rejected, seen = [], [], set()
    for shape, phi in _shaped_candidates(params, n):
        key = reduce(phi)
        if key in seen:
            continue
        seen.add(key)
        bad = [v for v in local_verdicts(phi, params) if not v.ok]
        if bad:
            rejected.append((n, phi, bad[0]))
        else:
            kept.append((shape, phi))
    return kept, rejected


def elliptic_form_candidates(params: SurfaceParams, n: int) -> list[BinaryForm]:
    """Forms of elliptic points of order n, one per proper class."""
    return [phi for _, phi in _classify_candidates(params, n)[0]]


def elliptic_data(params: SurfaceParams, orders=(2, 3)) -> EllipticData:
    points, rejected = [], []
    for n in orders:
        kept, rej = _classify_candidates(params, n)
        rejected.extend(rej)
        for shape, phi in kept:
            s = s_phi(phi, params)
            w = automorphism_count(phi)
            count = s * (2 * n) / w
            if count.denominator != 1:
                raise ValueError(f"non-integral point count {count} for {phi}")
            points.append(EllipticPoint(n, shape, phi, s, w, int(count)))
    return EllipticData(tuple(points), tuple(rejected))


def count_elliptic(params: SurfaceParams, n: int) -> int:
    _check_order(n)
    return elliptic_data(params, (n,)).counts.get(n, 0)
