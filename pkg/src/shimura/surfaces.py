"""Surface invariants, curve configurations, divisors and classification certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping


@dataclass(frozen=True)
class InvariantSet:
    e: int
    chi: int
    K2: int
    q: int = 0

    def __post_init__(self):
        if 12 * self.chi != self.e + self.K2:
            raise ValueError(f"Noether fails: 12*{self.chi} != {self.e} + {self.K2}")

    @property
    def pg(self) -> int:
        return self.chi - 1 + self.q

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.e, self.chi, self.K2, self.q, self.pg)


def _as_int(x, what: str) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise ValueError(f"{what} is not integral: {x}")
    return int(x)


@dataclass(frozen=True)
class CyclicSingularity:
    r: int
    a: int

    def __post_init__(self):
        if self.r < 2 or not (1 <= self.a < self.r) or math.gcd(self.r, self.a) != 1:
            raise ValueError(f"invalid cyclic quotient type ({self.r},{self.a})")


def hj_chain(s: CyclicSingularity) -> list[int]:
    """Hirzebruch-Jung continued fraction r/a = b1 - 1/(b2 - ...)."""
    r, a = s.r, s.a
    out = []
    while a:
        b = -(-r // a)
        out.append(b)
        r, a = a, b * a - r
    return out


def resolve_euler(e_X, sings: Iterable[CyclicSingularity]) -> int:
    """Euler number after replacing each singular point by its resolution chain."""
    e = Fraction(e_X)
    for s in sings:
        e += len(hj_chain(s))
    return _as_int(e, "resolved Euler number")


def blow_up(inv: InvariantSet, n: int) -> InvariantSet:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return replace(inv, e=inv.e + n, K2=inv.K2 - n)


def blow_down(inv: InvariantSet, n: int) -> InvariantSet:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return replace(inv, e=inv.e - n, K2=inv.K2 + n)


@dataclass(frozen=True)
class FixedCurve:
    """A smooth curve of the fixed locus, with genus and self-intersection upstairs."""

    genus: int
    self_int: int

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus


def quotient_euler(e: int, e_fixed_locus: int) -> int:
    return _as_int(Fraction(e + e_fixed_locus, 2), "quotient Euler number")


def quotient_by_involution(
    inv: InvariantSet,
    e_fixed_locus: int = 0,
    free: bool = False,
    fixed_curves: Iterable[FixedCurve] | None = None,
    isolated_points: int = 0,
) -> InvariantSet:
    """Invariants of S/i for an involution i of S.

    Isolated fixed points must be blown up first. For a non-free involution the
    fixed curves are needed to get chi and K^2: with branch divisor B' downstairs,
    K_S = pi^*K' + R, R^2 = B'^2/2, and chi(S) = 2 chi' + L.(K' + L)/2 with L = B'/2.
    """
    if isolated_points:
        raise ValueError("blow up the isolated fixed points before taking the quotient")
    if free:
        if e_fixed_locus or fixed_curves:
            raise ValueError("a free involution has no fixed locus")
        return InvariantSet(
            quotient_euler(inv.e, 0),
            _as_int(Fraction(inv.chi, 2), "quotient chi"),
            _as_int(Fraction(inv.K2, 2), "quotient K^2"),
            inv.q,
        )
    if fixed_curves is None:
        raise ValueError("non-free quotients need the fixed curves to determine chi and K^2")
    curves = list(fixed_curves)
    e_fix = sum(c.euler for c in curves)
    if e_fixed_locus and e_fixed_locus != e_fix:
        raise ValueError(f"fixed curves have Euler number {e_fix}, not {e_fixed_locus}")
    e = quotient_euler(inv.e, e_fix)
    # downstairs: B_i^2 = 2 s_i, K'.B_i = 2g - 2 - 2 s_i (adjunction)
    B2 = sum(2 * c.self_int for c in curves)
    KB = sum(2 * c.genus - 2 - 2 * c.self_int for c in curves)
    # K_S^2 = (pi^*K' + R)^2 = 2K'^2 + 2K'.B' + B'^2/2
    K2 = Fraction(inv.K2 - 2 * KB - Fraction(B2, 2), 2)
    chi = (inv.chi - (Fraction(B2, 4) + Fraction(KB, 2)) / 2) / 2
    return InvariantSet(e, _as_int(chi, "quotient chi"), _as_int(K2, "quotient K^2"), inv.q)


# curve configurations


@dataclass(frozen=True)
class Curve:
    name: str
    genus: int
    self_int: int


class ConfigError(ValueError):
    pass


class Divisor:
    """Integer combination of named curves."""

    def __init__(self, coeffs: Mapping[str, int] | None = None):
        self.coeffs = {k: int(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def of(cls, *names: str) -> "Divisor":
        d: dict[str, int] = {}
        for n in names:
            d[n] = d.get(n, 0) + 1
        return cls(d)

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor({n: k * v for n, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def support(self) -> list[str]:
        return sorted(self.coeffs)

    def is_effective(self) -> bool:
        return all(v > 0 for v in self.coeffs.values())

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*{k}" if v != 1 else k for k, v in sorted(self.coeffs.items()))


@dataclass
class CurveConfig:
    curves: dict[str, Curve] = field(default_factory=dict)
    meets: dict[frozenset, int] = field(default_factory=dict)
    divisors: dict[str, Divisor] = field(default_factory=dict)

    def add_curve(self, name: str, genus: int, self_int: int) -> None:
        if name in self.curves:
            raise ConfigError(f"duplicate curve {name}")
        if genus < 0:
            raise ConfigError(f"negative genus for {name}")
        self.curves[name] = Curve(name, genus, self_int)

    def _require(self, name: str) -> Curve:
        if name not in self.curves:
            raise ConfigError(f"unknown curve {name}")
        return self.curves[name]

    def set_meet(self, n1: str, n2: str, mult: int) -> None:
        self._require(n1)
        self._require(n2)
        if n1 == n2:
            raise ConfigError(f"self-intersection of {n1} belongs in its curve line")
        if mult < 0:
            raise ConfigError("intersection multiplicities are nonnegative")
        key = frozenset((n1, n2))
        if key in self.meets:
            raise ConfigError(f"duplicate meet {n1} {n2}")
        self.meets[key] = mult

    def add_divisor(self, name: str, div: Divisor) -> None:
        if name in self.divisors:
            raise ConfigError(f"duplicate divisor {name}")
        for c in div.coeffs:
            self._require(c)
        self.divisors[name] = div

    def intersection(self, n1: str, n2: str) -> int:
        if n1 == n2:
            return self._require(n1).self_int
        self._require(n1)
        self._require(n2)
        return self.meets.get(frozenset((n1, n2)), 0)

    def neighbours(self, name: str) -> dict[str, int]:
        self._require(name)
        out = {}
        for key, m in self.meets.items():
            if name in key:
                (other,) = key - {name}
                out[other] = m
        return out

    def matrix(self, names: list[str] | None = None) -> list[list[int]]:
        names = names or list(self.curves)
        return [[self.intersection(a, b) for b in names] for a in names]

    # text format

    @classmethod
    def loads(cls, text: str) -> "CurveConfig":
        cfg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            try:
                if tok[0] == "curve":
                    if len(tok) != 4:
                        raise ConfigError("expected: curve <name> genus=<g> self=<s>")
                    kv = dict(t.split("=", 1) for t in tok[2:])
                    if set(kv) != {"genus", "self"}:
                        raise ConfigError("expected genus= and self= fields")
                    cfg.add_curve(tok[1], int(kv["genus"]), int(kv["self"]))
                elif tok[0] == "meet":
                    if len(tok) != 4:
                        raise ConfigError("expected: meet <name1> <name2> <multiplicity>")
                    cfg.set_meet(tok[1], tok[2], int(tok[3]))
                elif tok[0] == "div":
                    if len(tok) < 2 or len(tok) % 2:
                        raise ConfigError("expected: div <name> <curve> <coeff> ...")
                    coeffs: dict[str, int] = {}
                    for c, k in zip(tok[2::2], tok[3::2]):
                        if c in coeffs:
                            raise ConfigError(f"curve {c} repeated in divisor {tok[1]}")
                        coeffs[c] = int(k)
                    cfg.add_divisor(tok[1], Divisor(coeffs))
                else:
                    raise ConfigError(f"unknown directive {tok[0]!r}")
            except (ConfigError, ValueError) as exc:
                raise ConfigError(f"line {lineno}: {exc}") from None
        return cfg

    @classmethod
    def load(cls, path) -> "CurveConfig":
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    def dumps(self) -> str:
        lines = [f"curve {c.name} genus={c.genus} self={c.self_int}" for c in self.curves.values()]
        order = {n: i for i, n in enumerate(self.curves)}
        for key, m in sorted(self.meets.items(), key=lambda kv: sorted(order[n] for n in kv[0])):
            if not m:
                continue
            a, b = sorted(key, key=order.get)
            lines.append(f"meet {a} {b} {m}")
        for name, d in self.divisors.items():
            lines.append("div " + name + "".join(f" {c} {k}" for c, k in d.coeffs.items()))
        return "\n".join(lines) + "\n"

    # operations

    def contract(self, name: str) -> "CurveConfig":
        """Blow down the exceptional curve `name`; divisors are pushed forward."""
        e = self._require(name)
        if e.genus != 0 or e.self_int != -1:
            raise ConfigError(f"{name} is not a smooth rational (-1)-curve")
        nb = self.neighbours(name)
        out = CurveConfig()
        for c in self.curves.values():
            if c.name == name:
                continue
            m = nb.get(c.name, 0)
            out.curves[c.name] = Curve(c.name, c.genus + m * (m - 1) // 2, c.self_int + m * m)
        for key, mult in self.meets.items():
            if name not in key:
                out.meets[key] = mult
        names = sorted(nb)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                key = frozenset((a, b))
                out.meets[key] = out.meets.get(key, 0) + nb[a] * nb[b]
        for dn, d in self.divisors.items():
            out.divisors[dn] = Divisor({k: v for k, v in d.coeffs.items() if k != name})
        return out

    def contract_all(self, names: Iterable[str]) -> "CurveConfig":
        cfg = self
        for n in names:
            cfg = cfg.contract(n)
        return cfg


def load_config(path) -> CurveConfig:
    return CurveConfig.load(path)


def pair(d1: Divisor, d2: Divisor, config: CurveConfig) -> int:
    total = 0
    for a, x in d1.coeffs.items():
        for b, y in d2.coeffs.items():
            total += x * y * config.intersection(a, b)
    return total


def canonical_multiple(divisor_name: str) -> int:
    """'K' -> 1, '2K' -> 2: the multiple of the canonical class a divisor name stands for."""
    head = divisor_name[:-1]
    if not divisor_name.endswith("K"):
        raise ValueError(f"{divisor_name!r} does not name a canonical multiple")
    return int(head) if head else 1


def adjunction_check(c: str, K: Divisor, config: CurveConfig, multiple: int = 1) -> bool:
    """K.C = 2 p_a(C) - 2 - C^2, with K standing for `multiple` times the canonical class."""
    curve = config._require(c)
    return pair(K, Divisor.of(c), config) == multiple * (2 * curve.genus - 2 - curve.self_int)


def adjunction_failures(config: CurveConfig, divisor_name: str, curves=None) -> list[str]:
    K = config.divisors[divisor_name]
    mult = canonical_multiple(divisor_name)
    names = curves if curves is not None else list(config.curves)
    return [c for c in names if not adjunction_check(c, K, config, mult)]


# classification


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Classification:
    kind: str
    blowups: int = 0

    def __str__(self) -> str:
        if self.kind in ("K3", "Enriques"):
            return f"{self.kind}-blown-up({self.blowups})"
        return self.kind


def _contract_checked(config: CurveConfig, names: Iterable[str]) -> CurveConfig:
    try:
        return config.contract_all(names)
    except ConfigError as exc:
        raise CertificateError(f"invalid blow-down: {exc}") from None


@dataclass(frozen=True)
class RationalCertificate:
    """After the stated blow-downs, `curve` is smooth rational with nonnegative self-intersection."""

    config: CurveConfig
    contractions: tuple[str, ...]
    curve: str

    def check(self, inv: InvariantSet) -> Classification:
        if inv.q != 0:
            raise CertificateError("rationality criterion needs q = 0")
        cfg = _contract_checked(self.config, self.contractions)
        c = cfg._require(self.curve)
        if c.genus != 0:
            raise CertificateError(f"{self.curve} has arithmetic genus {c.genus} after blow-down")
        if c.self_int < 0:
            raise CertificateError(f"{self.curve} has self-intersection {c.self_int} after blow-down")
        return Classification("rational")

    def final_curve(self) -> Curve:
        return _contract_checked(self.config, self.contractions).curves[self.curve]


@dataclass(frozen=True)
class EnriquesCertificate:
    """Blow-downs after which the pushed-forward 2K vanishes; with e = 12, q = 0, pg = 0."""

    config: CurveConfig
    two_k: str
    contractions: tuple[str, ...]

    def check(self, inv: InvariantSet) -> Classification:
        if canonical_multiple(self.two_k) != 2:
            raise CertificateError(f"{self.two_k} is not a representative of 2K")
        cfg = _contract_checked(self.config, self.contractions)
        if cfg.divisors[self.two_k]:
            raise CertificateError(f"2K = {cfg.divisors[self.two_k]} after blow-down, not 0")
        n = len(self.contractions)
        model = blow_down(inv, n)
        if model.e != 12 or model.q != 0 or model.pg != 0:
            raise CertificateError(f"minimal model has (e, q, pg) = ({model.e}, {model.q}, {model.pg})")
        return Classification("Enriques", n)


@dataclass(frozen=True)
class K3Certificate:
    """The surface is an unramified double cover of a surface with an Enriques certificate."""

    quotient: InvariantSet
    enriques: EnriquesCertificate

    def check(self, inv: InvariantSet) -> Classification:
        base = self.enriques.check(self.quotient)
        if quotient_by_involution(inv, free=True) != self.quotient:
            raise CertificateError("invariants are not those of an unramified double cover")
        n = 2 * base.blowups
        if blow_down(inv, n).e != 24:
            raise CertificateError("minimal model does not have e = 24")
        return Classification("K3", n)


@dataclass(frozen=True)
class GeneralTypeCertificate:
    """Effective K with no exceptional component and K^2 > 0."""

    config: CurveConfig
    canonical: str = "K"

    def check(self, inv: InvariantSet) -> Classification:
        if canonical_multiple(self.canonical) != 1:
            raise CertificateError("general-type certificate needs K itself")
        K = self.config.divisors[self.canonical]
        if not K or not K.is_effective():
            raise CertificateError(f"K = {K} is not effective")
        for c in K.support:
            cv = self.config.curves[c]
            if cv.genus == 0 and cv.self_int == -1:
                raise CertificateError(f"{c} in the support of K is exceptional")
        bad = adjunction_failures(self.config, self.canonical, K.support)
        if bad:
            raise CertificateError(f"adjunction fails for {bad}")
        k2 = pair(K, K, self.config)
        if k2 <= 0 or k2 != inv.K2:
            raise CertificateError(f"K^2 = {k2} (expected {inv.K2} > 0)")
        return Classification("minimal-general-type")


@dataclass(frozen=True)
class Evidence:
    rational: RationalCertificate | None = None
    enriques: EnriquesCertificate | None = None
    k3: K3Certificate | None = None
    general_type: GeneralTypeCertificate | None = None

    def supplied(self) -> list:
        return [c for c in (self.rational, self.enriques, self.k3, self.general_type) if c is not None]


def classify(inv: InvariantSet, evidence: Evidence) -> Classification:
    certs = evidence.supplied()
    if len(certs) != 1:
        raise CertificateError(f"expected exactly one certificate, got {len(certs)}")
    return certs[0].check(inv)


def curve_image_under_involution(N: int, which: str) -> int:
    """Label of the image of F_N under iota3, T or the involution pairing F_N and F_3N."""
    if N < 1:
        raise ValueError("N must be positive")
    if N % 9 == 0:
        raise ValueError(f"F_{N} is empty since 9 | N")
    if which in ("iota3", "T"):
        return N
    if which == "iotav":
        return N // 3 if N % 3 == 0 else 3 * N
    raise ValueError(f"unknown involution {which!r}")
