"""The chain Y -> Y_I -> Y_II -> Y_III for D=13, dL=3, B=2, driven by the shipped curve fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .invariants import SurfaceParams, arithmetic_genus, covolume, elliptic_data, euler_orbifold
from .surfaces import (
    Classification,
    CurveConfig,
    CyclicSingularity,
    Divisor,
    EnriquesCertificate,
    Evidence,
    FixedCurve,
    GeneralTypeCertificate,
    InvariantSet,
    K3Certificate,
    RationalCertificate,
    blow_down,
    blow_up,
    classify,
    pair,
    quotient_by_involution,
    resolve_euler,
)

FLAGSHIP = SurfaceParams(D=13, dL=3, B=2)

# isolated fixed points of iota3 on Y and of T on Y_II
Y_ISOLATED = 10
Y_II_ISOLATED = 6
# fixed curves of iota3 on Y and of T on Y_II
Y_FIXED = ("B1", "B2")
Y_II_FIXED = ("F13",)

# (-1)-curves of the tilde-Y_III fixture, blown down in this order to reach Y_III
Y_III_EXCEPTIONAL = ("E", "G", "M", "L1", "L2")
# blown down on Y_III, after which B is a smooth rational curve with B^2 = 0
CASTELNUOVO_CONTRACTIONS = ("F2", "C14", "C15", "C16")
CASTELNUOVO_CURVE = "B"
ENRIQUES_CONTRACTIONS = ("F2", "A")

# pullback of the curves of tilde-Y_III to tilde-Y_II (Y_II blown up in y1..y6, exceptional Ey1..Ey6)
PULLBACK = {
    "F2": Divisor({"F2": 1}),
    "F13": Divisor({"F13": 2}),
    "C14": Divisor({"Ey1": 2}),
    "C15": Divisor({"A": 1}),
    "C16": Divisor({"Ey2": 2}),
}
RAMIFICATION = Divisor({"F13": 1, **{f"Ey{i}": 1 for i in range(1, 7)}})


@lru_cache(maxsize=None)
def fixture_text(name: str) -> str:
    return resources.files("shimura").joinpath("data", f"{name}.curves").read_text(encoding="utf-8")


def load_fixture(name: str) -> CurveConfig:
    return CurveConfig.loads(fixture_text(name))


# EllipticData is immutable, so sharing one per parameter set is safe
_elliptic = lru_cache(maxsize=16)(elliptic_data)


def fixed_curves(config: CurveConfig, names, blown_up_points: int) -> list[FixedCurve]:
    """Fixed locus upstairs: the named curves plus one (-1)-curve per blown-up isolated point."""
    out = [FixedCurve(config.curves[n].genus, config.curves[n].self_int) for n in names]
    return out + [FixedCurve(0, -1)] * blown_up_points


@dataclass(frozen=True)
class Pipeline:
    Y: InvariantSet
    Y_tilde: InvariantSet
    Y_I: InvariantSet
    Y_II: InvariantSet
    Y_II_tilde: InvariantSet
    Y_III_tilde: InvariantSet
    Y_III: InvariantSet

    def table(self) -> dict[str, InvariantSet]:
        return {"Y": self.Y, "Y_I": self.Y_I, "Y_II": self.Y_II, "Y_III": self.Y_III}


def singularities(params: SurfaceParams = FLAGSHIP) -> list[CyclicSingularity]:
    out = []
    for pt in _elliptic(params).points:
        out += [CyclicSingularity(*pt.cyclic_type)] * pt.count
    return out


def run_pipeline(params: SurfaceParams = FLAGSHIP) -> Pipeline:
    if params != FLAGSHIP:
        raise ValueError("curve fixtures exist only for D=13, dL=3, B=2")
    e_X = euler_orbifold(covolume(params), _elliptic(params))
    cfg_Y = load_fixture("Y")
    K = cfg_Y.divisors["K"]
    Y = InvariantSet(resolve_euler(e_X, singularities(params)), int(arithmetic_genus(e_X)), pair(K, K, cfg_Y))
    Y_tilde = blow_up(Y, Y_ISOLATED)
    Y_I = quotient_by_involution(Y_tilde, fixed_curves=fixed_curves(cfg_Y, Y_FIXED, Y_ISOLATED))
    Y_II = quotient_by_involution(Y_I, free=True)
    Y_II_tilde = blow_up(Y_II, Y_II_ISOLATED)
    cfg_II = load_fixture("Y_II")
    Y_III_tilde = quotient_by_involution(
        Y_II_tilde, fixed_curves=fixed_curves(cfg_II, Y_II_FIXED, Y_II_ISOLATED)
    )
    Y_III = blow_down(Y_III_tilde, len(Y_III_EXCEPTIONAL))
    return Pipeline(Y, Y_tilde, Y_I, Y_II, Y_II_tilde, Y_III_tilde, Y_III)


def y_iii_config() -> CurveConfig:
    return load_fixture("Y_III_tilde").contract_all(Y_III_EXCEPTIONAL)


def certificates() -> dict[str, Evidence]:
    enriques = EnriquesCertificate(load_fixture("Y_II"), "2K", ENRIQUES_CONTRACTIONS)
    pipe = run_pipeline()
    return {
        "Y": Evidence(general_type=GeneralTypeCertificate(load_fixture("Y"))),
        "Y_I": Evidence(k3=K3Certificate(pipe.Y_II, enriques)),
        "Y_II": Evidence(enriques=enriques),
        "Y_III": Evidence(
            rational=RationalCertificate(y_iii_config(), CASTELNUOVO_CONTRACTIONS, CASTELNUOVO_CURVE)
        ),
    }


def classify_all() -> dict[str, Classification]:
    table = run_pipeline().table()
    return {name: classify(table[name], ev) for name, ev in certificates().items()}


def trace_two_k() -> Divisor:
    """2K of Y_II obtained from 2K on tilde-Y_III: pull back, add 2R, push forward."""
    two_k = load_fixture("Y_III_tilde").divisors["2K"]
    up = Divisor()
    for name, coeff in two_k.coeffs.items():
        up = up + coeff * PULLBACK[name]
    up = up + 2 * RAMIFICATION
    return Divisor({k: v for k, v in up.coeffs.items() if not k.startswith("Ey")})
