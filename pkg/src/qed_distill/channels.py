"""Single-pair Pauli error distributions and exact repetition-code steps."""

from __future__ import annotations

import math
from dataclasses import dataclass

SIMPLEX_TOL = 1e-12
REJECT_TOL = 1e-6

# Relabelings (pI, pX, pY, pZ) -> Z-basis frame; each is its own inverse.
_TO_Z_FRAME = {
    "Z": (0, 1, 2, 3),
    "X": (0, 3, 2, 1),  # X <-> Z
    "Y": (0, 1, 3, 2),  # Y <-> Z
}


@dataclass(frozen=True)
class PauliDist:
    """Probabilities of I, X, Y, Z on one half of a Bell pair."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        comps = [float(c) for c in (self.p_i, self.p_x, self.p_y, self.p_z)]
        for c in comps:
            if math.isnan(c) or c < -REJECT_TOL or c > 1 + REJECT_TOL:
                raise ValueError(f"probability out of range: {comps}")
        comps = [min(max(c, 0.0), 1.0) for c in comps]
        total = sum(comps)
        if abs(total - 1.0) > REJECT_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if abs(total - 1.0) > SIMPLEX_TOL:
            comps = [c / total for c in comps]
        for name, c in zip(("p_i", "p_x", "p_y", "p_z"), comps):
            object.__setattr__(self, name, c)

    @classmethod
    def identity(cls) -> "PauliDist":
        return cls(1.0, 0.0, 0.0, 0.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_i, self.p_x, self.p_y, self.p_z)

    def permuted(self, perm: tuple[int, int, int, int]) -> "PauliDist":
        t = self.as_tuple()
        return PauliDist(*(t[i] for i in perm))


def depolarizing(p: float) -> PauliDist:
    if not 0.0 <= p <= 0.75:
        raise ValueError(f"depolarizing parameter must lie in [0, 3/4], got {p}")
    return PauliDist(1.0 - p, p / 3, p / 3, p / 3)


def total_error(d: PauliDist) -> float:
    return d.p_x + d.p_y + d.p_z


def _z_step(d: PauliDist, n: int) -> tuple[float, PauliDist]:
    p_i, p_x, p_y, p_z = d.as_tuple()
    # Accept iff all X-components agree.  Within each branch the Z-parity
    # splits by the signed sums (a + b)^n +- (a - b)^n.
    no_x = p_i + p_z
    all_x = p_x + p_y
    out_i = (no_x**n + (p_i - p_z) ** n) / 2
    out_z = (no_x**n - (p_i - p_z) ** n) / 2
    out_x = (all_x**n + (p_x - p_y) ** n) / 2
    out_y = (all_x**n - (p_x - p_y) ** n) / 2
    accept = out_i + out_x + out_y + out_z
    return accept, PauliDist(out_i / accept, out_x / accept, out_y / accept, out_z / accept)


def repetition_step(d: PauliDist, n: int, basis: str = "Z") -> tuple[float, PauliDist]:
    """Acceptance probability and output distribution of an n-to-1 repetition check."""
    if n < 2:
        raise ValueError(f"repetition step needs n >= 2, got {n}")
    basis = basis.upper()
    if basis not in _TO_Z_FRAME:
        raise ValueError(f"basis must be X, Y or Z, got {basis!r}")
    perm = _TO_Z_FRAME[basis]
    accept, out = _z_step(d.permuted(perm), n)
    return accept, out.permuted(perm)


def bdsw_error_gap(d: PauliDist) -> float:
    """Increase of p_I after one two-pair Z-basis check.

    Positive whenever p_Z <= p_X, p_Y and the total error is below 1/2.
    """
    p_i, p_x, p_y, p_z = d.as_tuple()
    if p_z > min(p_x, p_y) + SIMPLEX_TOL:
        raise ValueError("requires p_z <= p_x and p_z <= p_y")
    if total_error(d) >= 0.5:
        raise ValueError("requires total error below 1/2")
    eps = p_i + p_z - 0.5
    return (p_z - eps) * (4 * eps**2 + 4 * p_z - 1) / (1 + 4 * eps**2)
