"""Command-line front end: `shimura <command> [--D ...] [--format text|csv]`."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .arith import format_rational
from .forms import BinaryForm
from .invariants import (
    NotRepresentedError,
    SurfaceParams,
    arithmetic_genus,
    covolume,
    elliptic_data,
    euler_orbifold,
    f_n,
    kappa,
    lambda_beta_discriminant,
    local_verdicts,
    represents_globally,
    s_phi_breakdown,
    zeta_k_minus1,
)
from .oracle import QuaternaryLattice, binary_sublattice_forms, enumerate_representations
from .pipeline import FLAGSHIP, certificates, run_pipeline
from .surfaces import CertificateError, classify

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_REJECTED = 0, 1, 2, 3

DEFAULTS = {"D": 13, "dL": 3, "B": 2, "max_N": 120, "bound": 40, "forms_bound": 6, "format": "text"}
INT_KEYS = ("D", "dL", "B", "max_N", "bound", "forms_bound")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    D: int
    dL: int
    B: int
    max_N: int
    bound: int
    forms_bound: int
    format: str

    @property
    def params(self) -> SurfaceParams:
        p = SurfaceParams(self.D, self.dL, self.B)
        p.require_special()
        return p


def read_config_file(path) -> dict:
    """Parse `key = value` lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: expected 'key = value' with key in {sorted(DEFAULTS)}")
        out[key] = value.strip()
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            merged[key] = v
    try:
        for key in INT_KEYS:
            merged[key] = int(merged[key])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if merged["format"] not in ("text", "csv"):
        raise UsageError(f"unknown format {merged['format']!r}")
    if merged["max_N"] < 1 or merged["bound"] < 1 or merged["forms_bound"] < 1:
        raise UsageError("max-N, bound and forms-bound must be positive")
    return RunConfig(**merged)


# reports


def _cell(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, Fraction):
        return format_rational(x)
    return str(x)


@dataclass
class Table:
    name: str
    headers: list[str]
    rows: list[list] = field(default_factory=list)
    # per-row template for text output; aligned columns when None
    line: str | None = None

    def text(self) -> list[str]:
        cells = [[_cell(x) for x in row] for row in self.rows]
        if self.line is not None:
            return [self.line.format(**dict(zip(self.headers, row))) for row in cells]
        widths = [max(len(h), *(len(r[i]) for r in cells)) for i, h in enumerate(self.headers)]
        fmt = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()
        return [fmt(self.headers)] + [fmt(r) for r in cells]


@dataclass
class Report:
    tables: list[Table] = field(default_factory=list)
    status: int = EXIT_OK

    def add(self, *args, **kwargs) -> Table:
        t = Table(*args, **kwargs)
        self.tables.append(t)
        return t

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            for t in self.tables:
                w.writerow([f"[{t.name}]"])
                w.writerow(t.headers)
                w.writerows([_cell(x) for x in row] for row in t.rows)
            return buf.getvalue()
        blocks = ["\n".join(t.text()) for t in self.tables]
        return "\n\n".join(b for b in blocks if b) + "\n"


# commands


def _invariant_table(report: Report) -> None:
    t = report.add("surfaces", ["surface", "e", "chi", "K^2", "q", "p_g"])
    for name, inv in run_pipeline().table().items():
        t.rows.append([name, *inv.as_tuple()])


def cmd_invariants(cfg: RunConfig, args) -> Report:
    params = cfg.params
    data = elliptic_data(params)
    vol = covolume(params)
    e = euler_orbifold(vol, data)
    r = Report()
    r.add(
        "summary",
        ["D", "dL", "B", "zeta", "vol", "e", "chi", "e2", "e3"],
        [[params.D, params.dL, params.B, zeta_k_minus1(params.D), vol, e, arithmetic_genus(e),
          data.counts.get(2, 0), data.counts.get(3, 0)]],
        line="D={D} dL={dL} B={B}\nzeta={zeta} vol={vol} e={e} chi={chi}\ne2={e2} e3={e3}",
    )
    if params == FLAGSHIP:
        _invariant_table(r)
    return r


def cmd_fn_table(cfg: RunConfig, args) -> Report:
    params = cfg.params
    r = Report()
    t = r.add("fn", ["N", "kappa", "f_N", "disc"])
    for N in range(1, cfg.max_N + 1):
        t.rows.append([N, kappa(N, params), f_n(N, params), lambda_beta_discriminant(N, params)])
    return r


def cmd_sphi(cfg: RunConfig, args) -> Report:
    params = cfg.params
    try:
        phi = BinaryForm(args.a, args.b, args.c)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not phi.positive_definite:
        raise UsageError(f"{phi} is not positive definite")
    r = Report()
    r.add("form", ["form"], [[phi]], line="form {form}")
    r.add(
        "local",
        ["prime", "status", "reason"],
        [[v.prime, "ok" if v.ok else f"fails clause {v.clause}", v.reason] for v in local_verdicts(phi, params)],
        line="p={prime}: {status} ({reason})",
    )
    try:
        br = s_phi_breakdown(phi, params)
    except NotRepresentedError as exc:
        r.add("verdict", ["represented", "failure"], [[False, exc.verdict]],
              line="represented={represented}: {failure}")
        r.status = EXIT_REJECTED
        return r
    factors = [["2^(a-1)", br.power_of_two], [f"h'({br.h_argument})", br.h_value]]
    factors += [[f"alpha_{p}", al] for p, al in br.alpha_D.items()]
    factors += [[f"2/alpha_{p}", Fraction(2, al)] for p, al in br.alpha_L.items()]
    r.add("factors", ["factor", "value"], factors, line="  {factor} = {value}")
    r.add("s", ["s"], [[br.value]], line="s={s}")
    return r


def cmd_elliptic(cfg: RunConfig, args) -> Report:
    params = cfg.params
    data = elliptic_data(params)
    r = Report()
    t = r.add("points", ["order", "form", "shape", "s", "w", "count", "type"])
    for pt in data.points:
        t.rows.append([pt.order, pt.form, pt.shape, pt.s, pt.w, pt.count, "({},{})".format(*pt.cyclic_type)])
    r.add("totals", ["e2", "e3"], [[data.counts.get(2, 0), data.counts.get(3, 0)]], line="e2={e2} e3={e3}")
    if args.verbose:
        r.add(
            "rejected",
            ["order", "form", "prime", "clause", "reason"],
            [[n, phi, v.prime, v.clause, v.reason] for n, phi, v in data.rejected],
            line="rejected order {order} {form}: p={prime} clause {clause} ({reason})",
        )
    return r


def _load_lattice(args) -> QuaternaryLattice:
    if args.lattice:
        return QuaternaryLattice.load(args.lattice)
    text = resources.files("shimura").joinpath("data", "example.lattice").read_text(encoding="utf-8")
    return QuaternaryLattice.loads(text)


def _components(f: Fraction) -> str:
    if f == 0:
        return "0"
    return f"{format_rational(f)} component" + ("" if f == 1 else "s")


def cmd_oracle(cfg: RunConfig, args) -> Report:
    params = cfg.params
    lattice = _load_lattice(args)
    r = Report()
    t = r.add("curves", ["N", "formula", "oracle", "verdict"],
              line="N={N}: formula: {formula}, oracle: {oracle} -> {verdict}")
    bad = 0
    for N in range(1, cfg.max_N + 1):
        f = f_n(N, params)
        found = bool(enumerate_representations(lattice, N, cfg.bound))
        agree = (f > 0) == found
        bad += not agree
        t.rows.append([N, _components(f), "nonempty" if found else "empty", "agree" if agree else "DISAGREE"])
    forms = binary_sublattice_forms(lattice, cfg.forms_bound)
    unsound = [phi for phi, _ in forms if not represents_globally(phi, params)]
    bad += len(unsound)
    u = r.add("forms", ["form", "witness_u", "witness_v"],
              line="unsound form {form}: spanned by {witness_u}, {witness_v}")
    for phi, (a, b) in forms:
        if phi in unsound:
            u.rows.append([phi, " ".join(map(str, a)), " ".join(map(str, b))])
    r.add("summary", ["curves_checked", "forms_checked", "disagreements"],
          [[cfg.max_N, len(forms), bad]],
          line="checked N<={curves_checked} and {forms_checked} sublattice forms: {disagreements} disagreements")
    r.status = EXIT_FAIL if bad else EXIT_OK
    return r


_DESCRIPTIONS = {
    "minimal-general-type": lambda inv, c: f"minimal general type (K effective, K^2={inv.K2})",
    "K3": lambda inv, c: f"K3 blown up {c.blowups} (unramified double cover of Y_II, e=24 on blow-down)",
    "Enriques": lambda inv, c: f"Enriques blown up {c.blowups} (2K=0 on blow-down, e=12)",
    "rational": lambda inv, c: "rational (Castelnuovo certificate)",
}


def cmd_classify(cfg: RunConfig, args) -> Report:
    if cfg.params != FLAGSHIP:
        raise UsageError("curve fixtures exist only for D=13, dL=3, B=2")
    table = run_pipeline().table()
    r = Report()
    t = r.add("classification", ["surface", "label", "certificate"], line="{surface}: {certificate}")
    for name, ev in certificates().items():
        try:
            c = classify(table[name], ev)
        except CertificateError as exc:
            t.rows.append([name, "invalid", f"certificate rejected: {exc}"])
            r.status = EXIT_FAIL
            continue
        t.rows.append([name, str(c), _DESCRIPTIONS[c.kind](table[name], c)])
    return r


COMMANDS = {
    "invariants": cmd_invariants,
    "fn-table": cmd_fn_table,
    "sphi": cmd_sphi,
    "elliptic": cmd_elliptic,
    "oracle": cmd_oracle,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--D", type=int, help="discriminant of the real quadratic field (default 13)")
    common.add_argument("--dL", type=int, help="reduced discriminant of the order (default 3)")
    common.add_argument("--B", type=int, help="level ratio (default 2)")
    common.add_argument("--max-N", dest="max_N", type=int, help="largest N for tables (default 120)")
    common.add_argument("--bound", type=int, help="oracle box bound for curves (default 40)")
    common.add_argument("--forms-bound", dest="forms_bound", type=int,
                        help="oracle box bound for binary sublattices (default 6)")
    common.add_argument("--format", choices=("text", "csv"), help="output format (default text)")
    common.add_argument("--config", help="file of 'key = value' lines; flags take precedence")

    parser = argparse.ArgumentParser(prog="shimura", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("invariants", parents=[common], help="zeta value, volume, e and chi")
    sub.add_parser("fn-table", parents=[common], help="kappa(N), f_N and disc for N <= max-N")
    sp = sub.add_parser("sphi", parents=[common], help="s(phi) with local verdicts and factors")
    for name in ("a", "b", "c"):
        sp.add_argument(name, type=int)
    ep = sub.add_parser("elliptic", parents=[common], help="elliptic points by form")
    ep.add_argument("--verbose", action="store_true", help="also list rejected candidate forms")
    op = sub.add_parser("oracle", parents=[common], help="cross-check formulas against lattice search")
    op.add_argument("--lattice", help="lattice file (default: the shipped example)")
    sub.add_parser("classify", parents=[common], help="classify Y, Y_I, Y_II, Y_III")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        report = COMMANDS[args.command](cfg, args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(report.render(cfg.format))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
