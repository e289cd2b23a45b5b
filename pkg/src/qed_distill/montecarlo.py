"""Pauli-frame Monte-Carlo simulation of detection-based distillation.

Single-qubit errors are encoded as 2-bit integers ``x | (z << 1)`` so that
I, X, Z, Y are 0, 1, 2, 3 and composition is XOR.

Trials are split into fixed-size chunks; chunk ``b`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(b,))``.  Results are a
function of (seed, trials, inputs) only, whatever the number of threads.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import PauliDist
from .codes import CodeSpec, StabilizerCode, check_ordering

CHUNK = 2048
Z95 = 1.959963984540054
DEFAULT_ATTEMPT_CAP = 10**6


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    trials: int = 100_000
    attempt_cap: int = DEFAULT_ATTEMPT_CAP
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.attempt_cap < 1:
            raise ValueError(f"attempt_cap must be at least 1, got {self.attempt_cap}")
        if self.threads < 1:
            raise ValueError(f"threads must be at least 1, got {self.threads}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Proportion:
    """Binomial proportion with a 95% Wilson score interval."""

    successes: int
    count: int
    value: float
    low: float
    high: float

    @property
    def radius(self) -> float:
        return (self.high - self.low) / 2

    @classmethod
    def of(cls, successes: int, count: int) -> "Proportion":
        if count == 0:
            return cls(0, 0, 0.0, 0.0, 1.0)
        lo, hi = wilson_interval(successes, count)
        return cls(int(successes), int(count), successes / count, lo, hi)


def wilson_interval(successes: int, count: int, z: float = Z95) -> tuple[float, float]:
    p = successes / count
    denom = 1 + z * z / count
    centre = (p + z * z / (2 * count)) / denom
    half = z * math.sqrt(p * (1 - p) / count + z * z / (4 * count * count)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == count else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class SimEstimate:
    trials: int
    seed: int
    p_fail: Proportion
    p_out: Proportion
    consumed_per_output: float
    consumed_stderr: float
    aborted: int = 0
    attempt_histogram: dict[int, int] = field(default_factory=dict)


def _sample(rng: np.random.Generator, dist: PauliDist, shape) -> np.ndarray:
    # codes in the order I, X, Z, Y
    probs = np.array([dist.p_i, dist.p_x, dist.p_z, dist.p_y])
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    u = rng.random(shape)
    return np.searchsorted(cdf, u, side="right").astype(np.uint8)


def _column_check(code: StabilizerCode, errors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Syndrome flags and residual logical errors for errors of shape (..., n).

    Returns ``(ok, logical)`` where ``ok`` has the leading shape and
    ``logical`` has shape (..., k) in the 2-bit encoding.
    """
    x = (errors & 1).astype(np.int64)
    z = (errors >> 1).astype(np.int64)
    ok = ~code.syndrome_bits(x, z).any(axis=-1)
    lx, lz = code.logical_bits(x, z)
    return ok, (lx | (lz << 1)).astype(np.uint8)


def _chunks(trials: int) -> list[tuple[int, int]]:
    return [(b, min(CHUNK, trials - b * CHUNK)) for b in range(math.ceil(trials / CHUNK))]


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _run_chunks(fn, cfg: TrialConfig) -> list:
    jobs = _chunks(cfg.trials)
    if cfg.threads == 1 or len(jobs) == 1:
        return [fn(b, size) for b, size in jobs]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(lambda j: fn(*j), jobs))


def _require_simulable(code: CodeSpec | StabilizerCode) -> StabilizerCode:
    if isinstance(code, StabilizerCode):
        return code
    if not code.simulable:
        raise ValueError(f"code {code.token} ({code.kind}) is not simulable")
    return code.to_stabilizer_code()


def simulate_level(code: CodeSpec | StabilizerCode, input_dist: PauliDist, cfg: TrialConfig) -> SimEstimate:
    """One detection round per trial; p_out is the logical error rate given acceptance."""
    sc = _require_simulable(code)

    def run(chunk: int, size: int):
        rng = _rng(cfg.seed, chunk)
        errors = _sample(rng, input_dist, (size, sc.n))
        ok, logical = _column_check(sc, errors)
        bad = logical.any(axis=-1)
        return int(ok.sum()), int((ok & bad).sum())

    parts = _run_chunks(run, cfg)
    accepted = sum(a for a, _ in parts)
    wrong = sum(w for _, w in parts)
    return SimEstimate(
        trials=cfg.trials,
        seed=cfg.seed,
        p_fail=Proportion.of(cfg.trials - accepted, cfg.trials),
        p_out=Proportion.of(wrong, accepted),
        consumed_per_output=(cfg.trials * sc.n / sc.k / accepted) if accepted else math.inf,
        consumed_stderr=0.0,
        attempt_histogram={1: cfg.trials},
    )


@dataclass
class _Pool:
    """Successful blocks of one level, consumed in order."""

    errors: np.ndarray  # (count, K) 2-bit codes
    cost: np.ndarray  # raw pairs charged to each block, int64
    aborted: np.ndarray  # bool


class _Producer:
    """Generates successful blocks level by level with repeat-until-success."""

    def __init__(self, codes: Sequence[StabilizerCode], dist: PauliDist, rng, cap: int):
        self.codes = codes
        self.dist = dist
        self.rng = rng
        self.cap = cap
        self.top_attempts: list[np.ndarray] = []

    def produce(self, level: int, count: int) -> _Pool:
        if level == 0:
            return _Pool(
                _sample(self.rng, self.dist, (count, 1)),
                np.ones(count, dtype=np.int64),
                np.zeros(count, dtype=bool),
            )
        code = self.codes[level - 1]
        out_err, out_cost, out_abort, out_attempts = [], [], [], []
        have = 0
        pending_cost = 0
        pending_attempts = 0
        accept_guess = 0.5
        while have < count:
            need = count - have
            batch = max(8, int(math.ceil(need / accept_guess * 1.1)))
            lower = self.produce(level - 1, batch * code.n)
            width = lower.errors.shape[1]
            rows = lower.errors.reshape(batch, code.n, width)
            cols = np.swapaxes(rows, 1, 2)  # (batch, width, n)
            ok_cols, logical = _column_check(code, cols)
            ok = ok_cols.all(axis=1)
            cost = lower.cost.reshape(batch, code.n).sum(axis=1)
            lower_abort = lower.aborted.reshape(batch, code.n).any(axis=1)
            block = logical.reshape(batch, width * code.k)
            accept_guess = max(0.01, min(1.0, float(ok.mean()) if ok.any() else accept_guess / 4))
            for i in range(batch):
                pending_cost += int(cost[i])
                pending_attempts += 1
                done = ok[i] or lower_abort[i] or pending_attempts >= self.cap
                if not done:
                    continue
                aborted = bool(lower_abort[i] or not ok[i])
                out_err.append(block[i])
                out_cost.append(pending_cost)
                out_abort.append(aborted)
                out_attempts.append(pending_attempts)
                pending_cost = 0
                pending_attempts = 0
                have += 1
                if have == count:
                    break
        if level == len(self.codes):
            self.top_attempts.append(np.array(out_attempts, dtype=np.int64))
        return _Pool(
            np.array(out_err, dtype=np.uint8).reshape(count, -1),
            np.array(out_cost, dtype=np.int64),
            np.array(out_abort, dtype=bool),
        )


def simulate_sequence(seq: Sequence[CodeSpec], p_in: PauliDist, cfg: TrialConfig) -> SimEstimate:
    """Concatenated distillation; each trial produces one top-level output block.

    ``p_fail`` counts failed top-level attempts among all top-level attempts;
    ``p_out`` is the fraction of delivered blocks carrying a logical error.
    Blocks whose production hit ``attempt_cap`` anywhere are reported in
    ``aborted`` and excluded from the other statistics.
    """
    if not seq:
        raise ValueError("sequence is empty")
    check_ordering(seq)
    codes = [_require_simulable(c) for c in seq]
    K = math.prod(c.k for c in codes)

    def run(chunk: int, size: int):
        prod = _Producer(codes, p_in, _rng(cfg.seed, chunk), cfg.attempt_cap)
        pool = prod.produce(len(codes), size)
        attempts = prod.top_attempts[-1]
        good = ~pool.aborted
        bad = pool.errors.any(axis=1) & good
        costs = pool.cost[good].astype(np.float64)
        return (
            int(good.sum()),
            int(bad.sum()),
            int(attempts[good].sum()),
            float(costs.sum()),
            float((costs**2).sum()),
            Counter(attempts[good].tolist()),
        )

    parts = _run_chunks(run, cfg)
    delivered = sum(p[0] for p in parts)
    wrong = sum(p[1] for p in parts)
    attempts = sum(p[2] for p in parts)
    cost_sum = math.fsum(p[3] for p in parts)
    cost_sq = math.fsum(p[4] for p in parts)
    hist: Counter = Counter()
    for p in parts:
        hist.update(p[5])
    if delivered:
        mean = cost_sum / delivered
        var = max(cost_sq / delivered - mean * mean, 0.0)
        consumed = mean / K
        stderr = math.sqrt(var / delivered) / K
    else:
        consumed, stderr = math.inf, math.inf
    return SimEstimate(
        trials=cfg.trials,
        seed=cfg.seed,
        p_fail=Proportion.of(attempts - delivered, attempts),
        p_out=Proportion.of(wrong, delivered),
        consumed_per_output=consumed,
        consumed_stderr=stderr,
        aborted=cfg.trials - delivered,
        attempt_histogram=dict(sorted(hist.items())),
    )


def exact_parity_stats(n: int, d: PauliDist) -> tuple[float, float]:
    """Acceptance probability and P(accepted and logical error) for the parity code.

    Tracks the joint (X-parity, Z-parity) distribution through a four-state
    transfer matrix.  Among accepted errors only I, X, Y and Z on every qubit
    lie in the stabilizer group.
    """
    if n < 4 or n % 2:
        raise ValueError(f"parity code needs even n >= 4, got {n}")
    # state index = xpar | zpar << 1, same encoding as single-qubit errors
    step = np.zeros((4, 4))
    probs = {0: d.p_i, 1: d.p_x, 2: d.p_z, 3: d.p_y}
    for s in range(4):
        for e, pe in probs.items():
            step[s ^ e, s] += pe
    state = np.array([1.0, 0.0, 0.0, 0.0])
    for _ in range(n):
        state = step @ state
    accept = float(state[0])
    trivial = d.p_i**n + d.p_x**n + d.p_y**n + d.p_z**n
    return accept, max(accept - trivial, 0.0)


@dataclass(frozen=True)
class AttemptHistogram:
    counts: dict[int, int]
    trials: int
    aborted: int

    @property
    def mean(self) -> float:
        return sum(a * c for a, c in self.counts.items()) / self.trials

    @property
    def stderr(self) -> float:
        m = self.mean
        var = sum(c * (a - m) ** 2 for a, c in self.counts.items()) / self.trials
        return math.sqrt(var / self.trials)

    def tail_frequency(self, threshold: float) -> float:
        return sum(c for a, c in self.counts.items() if a > threshold) / self.trials


def empirical_attempts(p_fail: float, cfg: TrialConfig) -> AttemptHistogram:
    """Attempt counts of a repeat-until-success loop with the given failure rate."""
    if not 0.0 <= p_fail < 1.0:
        raise ValueError(f"p_fail must lie in [0, 1), got {p_fail}")

    def run(chunk: int, size: int):
        rng = _rng(cfg.seed, chunk)
        draws = rng.geometric(1.0 - p_fail, size)
        return Counter(np.minimum(draws, cfg.attempt_cap).tolist()), int((draws > cfg.attempt_cap).sum())

    counts: Counter = Counter()
    aborted = 0
    for c, a in _run_chunks(run, cfg):
        counts.update(c)
        aborted += a
    return AttemptHistogram(dict(sorted(counts.items())), cfg.trials, aborted)
