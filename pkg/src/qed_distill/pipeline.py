"""Unencoding schedules and throughput / buffer planning for a distillation pipeline.

Qubits are indexed from 0.  In the canonical layout the first ``n - k``
qubits carry the checks (those with X support first) and the last ``k``
qubits carry the logical content, so the gate written ``C(i, j)`` has qubit
``i`` as control.  All times are multiples of a caller-chosen unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .analytic import SequenceMetrics
from .codes import PauliOp, StabilizerCode, gf2_rank

Gate = tuple[int, int]


@dataclass(frozen=True)
class GateSchedule:
    n: int
    k: int
    layers: tuple[frozenset[Gate], ...]

    def __post_init__(self):
        for t, layer in enumerate(self.layers):
            used: set[int] = set()
            for c, tg in layer:
                if c == tg or not (0 <= c < self.n and 0 <= tg < self.n):
                    raise ValueError(f"bad gate {(c, tg)} in layer {t}")
                if c in used or tg in used:
                    raise ValueError(f"qubit reused within layer {t}")
                used.update((c, tg))

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def output_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n - self.k, self.n))

    def gates(self) -> list[tuple[int, Gate]]:
        return [(t, g) for t, layer in enumerate(self.layers) for g in sorted(layer)]


def staircase_layer(i: int, j: int, n: int) -> int:
    """1-based layer of gate C(i, j) in the staircase schedule."""
    return 2 * i + (j - i) % n


def unencode_schedule(n: int, k: int, x_checks: int | None = None) -> GateSchedule:
    """Staircase schedule for a generic [[n, k]] code.

    The first ``x_checks`` qubits (default: all n-k checks) hold checks with X
    support and control gates onto every other qubit.  Z-only check qubits
    control nothing.  Logical qubits control gates onto the check qubits.
    Gates keep their staircase layer order and idle layers are dropped, so
    the depth is at most 3n-2-k, the layer of the last gate C(n-1, n-k-1).
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    r = n - k
    if x_checks is None:
        x_checks = r
    if not 0 <= x_checks <= r:
        raise ValueError(f"x_checks must lie in [0, {r}], got {x_checks}")
    gates = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and (i < x_checks or (i >= r and j < r))
    ]
    by_layer: dict[int, set[Gate]] = {}
    for i, j in gates:
        by_layer.setdefault(staircase_layer(i, j, n), set()).add((i, j))
    return GateSchedule(n, k, tuple(frozenset(by_layer[t]) for t in sorted(by_layer)))


def parity_unencode_schedule(n: int) -> GateSchedule:
    """Depth n-2 schedule for the [[n, n-2, 2]] code.

    Qubit 0 collects the X-type check and qubit 1 the Z-type check.  In
    layer t qubit 0 controls logical qubit t+1 while logical qubit t+2
    (qubit 2 in the last layer) controls qubit 1.
    """
    if n < 4 or n % 2:
        raise ValueError(f"parity code needs even n >= 4, got {n}")
    layers = []
    for t in range(1, n - 1):
        jz = t + 2 if t < n - 2 else 2
        layers.append(frozenset({(0, t + 1), (jz, 1)}))
    return GateSchedule(n, n - 2, tuple(layers))


# Controlled gates are written (control basis, target Pauli): the target gets
# the Pauli when the control is in the -1 eigenstate of the control basis.
GateType = tuple[str, str]
_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def parity_gate_types(n: int) -> dict[Gate, GateType]:
    """Gate types unencoding the parity code in either parity schedule."""
    types: dict[Gate, GateType] = {(0, j): ("Z", "X") for j in range(1, n)}
    types.update({(j, 1): ("Z", "X") for j in range(2, n)})
    return types


def repetition_gate_types(n: int, basis: str) -> dict[Gate, GateType]:
    """Logical qubit n-1 controls every check qubit; other gates are idle."""
    control, target = {"Z": ("Z", "X"), "X": ("X", "Z"), "Y": ("Y", "X")}[basis.upper()]
    return {(n - 1, j): (control, target) for j in range(n - 1)}


def _anticommutes(x: int, z: int, pauli: str) -> int:
    px, pz = _BITS[pauli]
    return (x & pz) ^ (z & px)


def replay(op: PauliOp, schedule: GateSchedule, types: Mapping[Gate, GateType]) -> PauliOp:
    """Conjugate a Pauli operator through the typed schedule, layer by layer."""
    x = list(op.x)
    z = list(op.z)
    for layer in schedule.layers:
        for c, t in sorted(layer):
            if (c, t) not in types:
                continue
            q, p = types[(c, t)]
            flip_t = _anticommutes(x[c], z[c], q)
            flip_c = _anticommutes(x[t], z[t], p)
            if flip_t:
                px, pz = _BITS[p]
                x[t] ^= px
                z[t] ^= pz
            if flip_c:
                qx, qz = _BITS[q]
                x[c] ^= qx
                z[c] ^= qz
    return PauliOp(tuple(x), tuple(z))


def verify_unencoding(code: StabilizerCode, schedule: GateSchedule, types: Mapping[Gate, GateType]) -> bool:
    """True when the schedule unencodes the code.

    The image of the stabilizer group must equal the group generated by one
    single-qubit operator per check qubit, and each logical pair must map,
    up to that group, to an anticommuting single-qubit pair on its output qubit.
    """
    n, r = code.n, code.r
    if schedule.n != n or schedule.k != code.k:
        return False
    stabs = [replay(s, schedule, types) for s in code.stabilizers]
    for s in stabs:
        if any(s.x[r:]) or any(s.z[r:]):
            return False
    # each check qubit must carry a single Pauli type across the group
    for q in range(r):
        kinds = {(s.x[q], s.z[q]) for s in stabs} - {(0, 0)}
        if len(kinds) != 1:
            return False
    if gf2_rank(np.array([s.as_vector() for s in stabs])) != r:
        return False
    for j, (lx, lz) in enumerate(zip(code.logical_x, code.logical_z)):
        out = r + j
        ix = replay(lx, schedule, types)
        iz = replay(lz, schedule, types)
        for img in (ix, iz):
            for q in range(r, n):
                if q != out and (img.x[q] or img.z[q]):
                    return False
            if not (img.x[out] or img.z[out]):
                return False
        if ix.symplectic(iz) != 1:
            return False
        # the part on check qubits must be absorbed by the stabilizer image
        for img in (ix, iz):
            part = PauliOp(img.x[:r] + (0,) * (n - r), img.z[:r] + (0,) * (n - r))
            if not part.is_identity():
                stacked = np.array([s.as_vector() for s in stabs] + [part.as_vector()])
                if gf2_rank(stacked) != r:
                    return False
    return True


def stage_throughput(
    T_in: float, T_dis: float, B: int, n: int, n_total: int, k: int, p_fail: float
) -> float:
    """Average time between outputs of one distillation stage, per Bell pair.

    Input-limited when distillation keeps up with arrivals or there is room
    for enough parallel copies; otherwise ceil(B / n_total) copies share the
    load and the stage is distillation-limited.
    """
    if T_in <= 0 or T_dis < 0:
        raise ValueError("times must be positive")
    if n < 1 or k < 1 or n_total < n:
        raise ValueError("need n >= 1, k >= 1, n_total >= n")
    if not 0.0 <= p_fail < 1.0:
        raise ValueError(f"p_fail must lie in [0, 1), got {p_fail}")
    if B < n:
        raise ValueError(f"buffer {B} cannot hold one block of {n}")
    accept = (1.0 - p_fail) * k
    if T_dis <= n * T_in or B >= n * math.ceil(T_dis / (n * T_in)):
        return n * T_in / accept
    copies = math.ceil(B / n_total)
    # never faster than inputs arrive
    return max(T_dis / (copies * accept), n * T_in / accept)


def discard_fraction(T_in: float, T_out: float, n: int, k: int, p_fail: float) -> float:
    """Share of arriving inputs dropped when a stage cannot keep up."""
    limited = n * T_in / ((1.0 - p_fail) * k)
    return max(0.0, 1.0 - limited / T_out)


@dataclass(frozen=True)
class StagePlan:
    level: int
    code: str
    B: float
    T_input: float
    T_distill: float


@dataclass(frozen=True)
class PipelinePlan:
    stages: tuple[StagePlan, ...]
    B_all: float
    batch_size: int
    batch_period: float


def plan_pipeline(
    seq: Sequence, metrics: SequenceMetrics, T_Bell: float, T_gate: float, T_inject: float
) -> PipelinePlan:
    """Buffer sizes and timings for an input-limited pipeline.

    Stage 0 is state injection.  Stage i takes n_i blocks, whose preparation
    time counts every raw pair consumed upstream including retries.
    """
    if T_Bell <= 0 or T_gate <= 0 or T_inject <= 0:
        raise ValueError("T_Bell, T_gate and T_inject must be positive")
    if len(seq) != len(metrics.levels):
        raise ValueError("metrics do not belong to this sequence")
    stages = [StagePlan(0, "inject", float(max(math.ceil(T_inject / T_Bell), 1)), T_Bell, T_inject)]
    upstream = 1.0 / (1.0 - metrics.p0_reject)  # raw pairs per block entering stage i
    K_prev = 1
    for i, lv in enumerate(metrics.levels, start=1):
        t_input = lv.n * upstream * T_Bell
        t_distill = (3 * lv.n - 2 - lv.k) * T_gate
        B = (t_distill / t_input + 1.0) * lv.n * K_prev
        stages.append(StagePlan(i, lv.code, B, t_input, t_distill))
        upstream *= lv.n / (1.0 - lv.p_fail)
        K_prev = lv.K
    return PipelinePlan(
        stages=tuple(stages),
        B_all=math.fsum(s.B for s in stages),
        batch_size=metrics.K,
        batch_period=T_Bell * upstream,
    )
