"""Stabilizer codes from point sets in projective space over GF(4).

A set of ``n`` points spanning PG(m-1, 4) whose intersection with every
hyperplane has the parity of ``n`` is Hermitian self-orthogonal.  Reading the
coordinates as rows of an additive code over GF(4) gives ``m`` pairs of
commuting stabilizer generators, hence an ``[[n, n - 2m]]`` code.  Distinct
points give distance at least 3, and a cap (no three collinear points) gives
distance at least 4.

Used to certify the parameters listed in the bundled code catalog.
"""

from __future__ import annotations

import itertools
import json
from importlib import resources

import numpy as np

from .codes import PauliOp, gf2_rank

# GF(4) = {0, 1, w, w^2} encoded as 0, 1, 2, 3; addition is XOR.
MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)
INV = {1: 1, 2: 3, 3: 2}
# 1 -> X, w -> Z, w^2 -> Y
_TO_XZ = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}


def normalize(v: tuple[int, ...]) -> tuple[int, ...]:
    """Projective representative with first nonzero coordinate equal to 1."""
    for c in v:
        if c:
            inv = INV[c]
            return tuple(MUL[inv][x] for x in v)
    raise ValueError("zero vector has no projective point")


def dot(a, b) -> int:
    s = 0
    for x, y in zip(a, b):
        s ^= MUL[x][y]
    return s


def gf4_rank(vectors) -> int:
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    r = 0
    for c in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = INV[rows[r][c]]
        rows[r] = [MUL[inv][x] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x ^ MUL[f][y] for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def projective_points(m: int) -> list[tuple[int, ...]]:
    return sorted({normalize(v) for v in itertools.product(range(4), repeat=m) if any(v)})


def is_self_orthogonal(points) -> bool:
    n = len(points)
    m = len(points[0])
    for h in projective_points(m):
        hits = sum(1 for p in points if dot(h, p) == 0)
        if (hits - n) % 2:
            return False
    return True


def is_cap(points) -> bool:
    return all(gf4_rank(t) == 3 for t in itertools.combinations(points, 3))


def stabilizer_rows(points) -> list[PauliOp]:
    """Two generators per coordinate: the coordinate row and w times it."""
    m = len(points[0])
    ops = []
    for j in range(m):
        for lam in (1, 2):
            bits = [_TO_XZ[MUL[lam][p[j]]] for p in points]
            ops.append(PauliOp(tuple(b[0] for b in bits), tuple(b[1] for b in bits)))
    return ops


def min_undetected_weight(stabilizers: list[PauliOp], max_weight: int) -> int | None:
    """Smallest weight of a nonidentity Pauli with trivial syndrome, searched up to ``max_weight``.

    Returns None when every Pauli of weight <= max_weight is detected.
    """
    n = stabilizers[0].n
    sx = np.array([s.x for s in stabilizers], dtype=np.uint8).T
    sz = np.array([s.z for s in stabilizers], dtype=np.uint8).T
    # syndrome of X_i is column z_i, of Z_i is x_i, Y_i both
    single = [(sz[i], sx[i], sz[i] ^ sx[i]) for i in range(n)]
    for w in range(1, max_weight + 1):
        for qubits in itertools.combinations(range(n), w):
            for choice in itertools.product(range(3), repeat=w):
                s = np.zeros(len(stabilizers), dtype=np.uint8)
                for q, c in zip(qubits, choice):
                    s ^= single[q][c]
                if not s.any():
                    return w
    return None


def certify(points, d: int) -> tuple[int, int]:
    """Check the point set and return ``(n, k)`` of its code.

    Raises ValueError if the set is not self-orthogonal, has repeated points,
    fails to span, or leaves an undetected Pauli of weight below ``d``.
    """
    points = [tuple(int(c) for c in p) for p in points]
    n = len(points)
    m = len(points[0])
    if len({normalize(p) for p in points}) != n:
        raise ValueError("repeated projective point")
    if gf4_rank(points) != m:
        raise ValueError("points do not span the projective space")
    if not is_self_orthogonal(points):
        raise ValueError("point set is not Hermitian self-orthogonal")
    stabs = stabilizer_rows(points)
    for a, b in itertools.combinations(stabs, 2):
        if not a.commutes_with(b):
            raise ValueError("generated stabilizers do not commute")
    rank = gf2_rank(np.array([s.as_vector() for s in stabs]))
    if rank != 2 * m:
        raise ValueError("generated stabilizers are dependent")
    w = min_undetected_weight(stabs, d - 1)
    if w is not None:
        raise ValueError(f"undetected Pauli of weight {w} < {d}")
    return n, n - 2 * m


def bundled_point_sets() -> dict[str, list[list[int]]]:
    """Point sets shipped with the package, keyed by ``"n.k.d"``."""
    text = resources.files("qed_distill").joinpath("data/point_sets.json").read_text("utf-8")
    return json.loads(text)
