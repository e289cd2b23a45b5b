"""Closed-form error, overhead and memory model for distillation sequences."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .channels import PauliDist, depolarizing, repetition_step, total_error
from .codes import CodeSpec, check_ordering


@dataclass(frozen=True)
class EvalConfig:
    p_in: PauliDist
    p0_reject: float = 0.0
    p_target: float = 1e-12

    def __post_init__(self):
        if not isinstance(self.p_in, PauliDist):
            raise TypeError("p_in must be a PauliDist")
        if not 0.0 <= self.p0_reject < 1.0:
            raise ValueError(f"p0_reject must lie in [0, 1), got {self.p0_reject}")
        if not 0.0 < self.p_target < 1.0 + 1e-15:
            raise ValueError(f"p_target must be positive, got {self.p_target}")


@dataclass(frozen=True)
class LevelMetrics:
    code: str
    n: int
    k: int
    d: int
    p: float
    p_fail: float
    K: int
    M: int
    overhead: float


@dataclass(frozen=True)
class SequenceMetrics:
    levels: tuple[LevelMetrics, ...]
    p_in: float
    p0_reject: float
    overhead: float
    p_out: float
    K: int
    M: int

    @property
    def p_per_qubit(self) -> float:
        return self.p_out / self.K

    @property
    def sequence(self) -> str:
        return ",".join(lv.code for lv in self.levels)


@dataclass(frozen=True)
class _State:
    """Running quantities after some prefix of a sequence."""

    dist: PauliDist | None  # exact distribution while only classical levels were applied
    p: float
    K: int
    M: int
    overhead: float
    levels: tuple[LevelMetrics, ...] = field(default=())

    @property
    def quantum(self) -> bool:
        return self.dist is None


def _check_prob(p: float, name: str = "p_in") -> None:
    if not 0.0 <= p < 1.0:
        raise ValueError(f"{name} must lie in [0, 1), got {p}")


def qed_error_bound(n: int, k: int, d: int, p_in: float) -> float:
    """Upper bound on the block error of an accepted [[n,k,d]] detection round.

    Equal to P(at least d of n errors) / (1-p)^n, summed in the form
    sum_{j>=d} C(n,j) x^j with x = p/(1-p) to avoid cancellation.
    """
    _check_prob(p_in)
    if not 1 <= d <= n or not 1 <= k <= n:
        raise ValueError(f"invalid code parameters [[{n},{k},{d}]]")
    if p_in == 0.0:
        return 0.0
    x = p_in / (1.0 - p_in)
    total = math.fsum(math.comb(n, j) * x**j for j in range(d, n + 1))
    return min(max(total, 0.0), 1.0)


def qed_accept_lower(n: int, p_in: float) -> float:
    _check_prob(p_in)
    if n < 1:
        raise ValueError("n must be positive")
    return (1.0 - p_in) ** n


def _initial(cfg: EvalConfig) -> _State:
    return _State(cfg.p_in, total_error(cfg.p_in), 1, 1, 1.0 / (1.0 - cfg.p0_reject))


def next_memory(n: int, K_prev: int, M_prev: int) -> int:
    return max(n * K_prev, (n - 1) * K_prev + M_prev)


def extend(state: _State, code: CodeSpec) -> _State:
    """Apply one more level to a running state."""
    if code.is_classical:
        if state.quantum:
            raise ValueError(f"classical code {code.token} cannot follow a quantum code")
        accept, dist = repetition_step(state.dist, code.n, code.basis)
        p = total_error(dist)
        p_fail = 1.0 - accept
    elif state.p >= 1.0:
        # the bound saturated at an earlier level
        dist, p, p_fail = None, 1.0, 1.0
    else:
        dist = None
        p = qed_error_bound(code.n, code.k, code.d, state.p)
        p_fail = 1.0 - qed_accept_lower(code.n, state.p)
    if p_fail >= 1.0:
        overhead = math.inf
    else:
        overhead = state.overhead * (code.n / code.k) / (1.0 - p_fail)
    K = state.K * code.k
    M = next_memory(code.n, state.K, state.M)
    level = LevelMetrics(code.token, code.n, code.k, code.d, p, p_fail, K, M, overhead)
    return _State(dist, p, K, M, overhead, state.levels + (level,))


def _finish(state: _State, cfg: EvalConfig) -> SequenceMetrics:
    return SequenceMetrics(
        levels=state.levels,
        p_in=total_error(cfg.p_in),
        p0_reject=cfg.p0_reject,
        overhead=state.overhead,
        p_out=state.p,
        K=state.K,
        M=state.M,
    )


def evaluate_sequence(seq: Sequence[CodeSpec], cfg: EvalConfig) -> SequenceMetrics:
    check_ordering(seq)
    state = _initial(cfg)
    for code in seq:
        state = extend(state, code)
    return _finish(state, cfg)


def memory_footprint(seq: Sequence[CodeSpec]) -> int:
    if not seq:
        raise ValueError("memory footprint needs at least one level")
    K, M = 1, 1
    for code in seq:
        M = next_memory(code.n, K, M)
        K *= code.k
    return M


def quadratic_parity_sequence(levels: int) -> list[CodeSpec]:
    """Parity codes of length (2i)^2 for i = 1..levels."""
    return [CodeSpec.parity((2 * i) ** 2) for i in range(1, levels + 1)]


@dataclass(frozen=True)
class TheoremBounds:
    p_bound: float
    overhead_bound: float
    memory_bound: int


def theorem_bounds(level: int, p: float) -> TheoremBounds:
    """Reference bounds for the quadratic parity sequence at input error p <= 1/2000."""
    if not 0.0 <= p <= 1 / 2000:
        raise ValueError(f"p must lie in [0, 1/2000], got {p}")
    if level < 0:
        raise ValueError("level must be nonnegative")
    if level == 0:
        return TheoremBounds(p, 3.0, 1)
    p_bound = (544 * p) ** (2**level) / 34
    memory = 0
    K = 1
    for code in quadratic_parity_sequence(level):
        memory += code.n * K
        K *= code.k
    return TheoremBounds(p_bound, 3.0, memory)


def iterate_quadratic_recurrence(level: int, p: float) -> list[float]:
    """p_i = (n_i p_{i-1} / (1 - p_{i-1}))^2 with n_i = (2i)^2, starting from p."""
    out = [p]
    for i in range(1, level + 1):
        n = (2 * i) ** 2
        out.append((n * out[-1] / (1 - out[-1])) ** 2)
    return out


@dataclass(frozen=True)
class AttemptStats:
    mean: float
    tail_quantile: float


def attempt_stats(p_fail: float, epsilon: float) -> AttemptStats:
    """Mean attempt count and the count exceeded with probability at most epsilon."""
    if not 0.0 <= p_fail < 1.0:
        raise ValueError(f"p_fail must lie in [0, 1), got {p_fail}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    mean = 1.0 / (1.0 - p_fail)
    if p_fail == 0.0:
        return AttemptStats(mean, 1.0)
    return AttemptStats(mean, math.log(1 / epsilon) / math.log(1 / p_fail))


def depolarizing_config(p: float, p0_reject: float = 0.0, p_target: float = 1e-12) -> EvalConfig:
    return EvalConfig(depolarizing(p), p0_reject, p_target)
