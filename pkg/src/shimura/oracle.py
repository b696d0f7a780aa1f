"""Brute-force ground truth over an explicit integral quaternary quadratic form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .forms import BinaryForm, reduce

LatticeVector = tuple[int, int, int, int]


@dataclass(frozen=True)
class QuaternaryLattice:
    """q(v) = v^T gram2 v / 2 with gram2 symmetric and of even diagonal."""

    gram2: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = self.gram2
        if len(g) != 4 or any(len(row) != 4 for row in g):
            raise ValueError("gram2 must be 4x4")
        for i in range(4):
            if g[i][i] % 2:
                raise ValueError("gram2 must have even diagonal")
            for j in range(4):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram2 must be symmetric")

    @classmethod
    def from_rows(cls, rows) -> "QuaternaryLattice":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    def matrix(self) -> np.ndarray:
        return np.array(self.gram2, dtype=np.int64)

    def signature(self) -> tuple[int, int]:
        ev = np.linalg.eigvalsh(self.matrix().astype(float))
        return int((ev > 0).sum()), int((ev < 0).sum())

    def bilinear(self, u, v) -> int:
        """b(u, v) = q(u + v) - q(u) - q(v)."""
        g = self.gram2
        return sum(u[i] * g[i][j] * v[j] for i in range(4) for j in range(4))

    def dumps(self) -> str:
        return "gram2 = " + " ".join(str(x) for row in self.gram2 for x in row) + "\n"

    @classmethod
    def loads(cls, text: str) -> "QuaternaryLattice":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if len(lines) != 1:
            raise ValueError("lattice file must contain exactly one 'gram2 = ...' line")
        key, sep, rest = lines[0].partition("=")
        if not sep or key.strip() != "gram2":
            raise ValueError("expected a line of the form 'gram2 = <16 integers>'")
        nums = [int(t) for t in rest.split()]
        if len(nums) != 16:
            raise ValueError(f"expected 16 integers, got {len(nums)}")
        return cls.from_rows([nums[4 * i : 4 * i + 4] for i in range(4)])

    @classmethod
    def load(cls, path) -> "QuaternaryLattice":
        return cls.loads(Path(path).read_text())

    def dump(self, path) -> None:
        Path(path).write_text(self.dumps())


EXAMPLE_LATTICE = QuaternaryLattice.from_rows(
    [[4, 1, 0, 0], [1, 10, 0, 0], [0, 0, -26, 13], [0, 0, 13, -26]]
)


def q_value(lattice: QuaternaryLattice, v) -> int:
    return lattice.bilinear(v, v) // 2


def is_primitive(v) -> bool:
    return math.gcd(*v) == 1


def _box(bound: int) -> np.ndarray:
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    return np.stack(np.meshgrid(r, r, r, r, indexing="ij"), axis=-1).reshape(-1, 4)


def enumerate_representations(
    lattice: QuaternaryLattice, N: int, bound: int, primitive_only: bool = True
) -> list[LatticeVector]:
    """Vectors v with |v_i| <= bound and q(v) = N, sorted lexicographically.

    The last coordinate is solved for exactly from the quadratic it satisfies,
    so the search is cubic in the bound.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    g = lattice.matrix()
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    t = np.stack(np.meshgrid(r, r, r, indexing="ij"), axis=-1).reshape(-1, 3)
    # q = A t3^2 + Bc t3 + C
    A = int(g[3, 3]) // 2
    Bc = t @ g[:3, 3]
    C = np.einsum("ij,jk,ik->i", t, g[:3, :3], t) // 2 - N
    found = []
    if A == 0:
        nz = Bc != 0
        idx = np.nonzero(nz & (C % np.where(nz, Bc, 1) == 0))[0]
        for i in idx:
            found.append((*t[i], -C[i] // Bc[i]))
        idx = np.nonzero(~nz & (C == 0))[0]
        for i in idx:
            for t3 in range(-bound, bound + 1):
                found.append((*t[i], t3))
    else:
        disc = Bc * Bc - 4 * A * C
        ok = disc >= 0
        root = np.zeros_like(disc)
        root[ok] = np.floor(np.sqrt(disc[ok].astype(np.float64)))
        for adj in (-1, 1):
            fix = ok & ((root + adj) ** 2 <= disc) & (root + adj >= 0)
            root[fix] += adj
        ok &= root * root == disc
        for i in np.nonzero(ok)[0]:
            for sgn in (1, -1) if root[i] else (1,):
                num = -Bc[i] + sgn * root[i]
                if num % (2 * A) == 0:
                    found.append((*t[i], num // (2 * A)))
    out = set()
    for v in found:
        v = tuple(int(x) for x in v)
        if abs(v[3]) > bound or (primitive_only and not is_primitive(v)):
            continue
        out.add(v)
    return sorted(out)


def _minor_gcd(u, v) -> int:
    g = 0
    for i in range(4):
        for j in range(i + 1, 4):
            g = math.gcd(g, u[i] * v[j] - u[j] * v[i])
    return g


def binary_sublattice_forms(
    lattice: QuaternaryLattice, bound: int
) -> list[tuple[BinaryForm, tuple[LatticeVector, LatticeVector]]]:
    """Reduced forms of positive definite primitive rank-2 sublattices spanned in the box.

    A pair (u, v) spans a primitive (saturated) sublattice iff the 2x2 minors of
    [u; v] have gcd 1. Each reduced form is returned once with its first witness.
    """
    vecs = _box(bound)
    g = lattice.matrix()
    q = np.einsum("ij,jk,ik->i", vecs, g, vecs) // 2
    pos = q > 0
    vecs, q = vecs[pos], q[pos]
    # one representative of each +-u
    first = np.array([next(x for x in row if x) for row in vecs])
    half = first > 0
    us, qu_all = vecs[half], q[half]
    gv = vecs @ g
    pairs = np.array([(i, j) for i in range(4) for j in range(i + 1, 4)])
    seen: dict[tuple[int, int, int], tuple] = {}
    for u, qu in zip(us, qu_all):
        b = gv @ u
        ok = 4 * int(qu) * q - b * b > 0
        if not ok.any():
            continue
        cand = vecs[ok]
        minors = u[pairs[:, 0]] * cand[:, pairs[:, 1]] - u[pairs[:, 1]] * cand[:, pairs[:, 0]]
        prim = np.gcd.reduce(np.abs(minors), axis=1) == 1
        for bb, qv, v in zip(b[ok][prim], q[ok][prim], cand[prim]):
            key = (int(qu), int(bb), int(qv))
            if key not in seen:
                seen[key] = (tuple(int(x) for x in u), tuple(int(x) for x in v))
    result: dict[BinaryForm, tuple] = {}
    for key in sorted(seen):
        f = reduce(BinaryForm(*key))
        if f not in result:
            result[f] = seen[key]
    return sorted(result.items(), key=lambda kv: (-kv[0].discriminant, kv[0].a, kv[0].b, kv[0].c))


def find_primitive_embedding(lattice: QuaternaryLattice, phi: BinaryForm, bound: int):
    """A pair (u, v) in the box spanning a primitive sublattice with form exactly phi, or None."""
    us = enumerate_representations(lattice, phi.a, bound, primitive_only=True)
    if not us:
        return None
    vs = enumerate_representations(lattice, phi.c, bound, primitive_only=False)
    if not vs:
        return None
    V = np.array(vs, dtype=np.int64)
    gv = V @ lattice.matrix()
    for u in us:
        b = gv @ np.array(u, dtype=np.int64)
        for i in np.nonzero(b == phi.b)[0]:
            v = vs[i]
            if _minor_gcd(u, v) == 1:
                return u, v
    return None
