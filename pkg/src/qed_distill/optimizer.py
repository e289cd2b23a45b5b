"""Depth-first branch-and-bound search for low-overhead distillation sequences."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .analytic import EvalConfig, SequenceMetrics, _finish, _initial, _State, extend
from .codes import CodeCatalog, CodeSpec


@dataclass(frozen=True)
class SearchConstraints:
    cfg: EvalConfig
    M_max: int
    p_target: float = 1e-12
    l_max: int = 7

    def __post_init__(self):
        if self.M_max < 1:
            raise ValueError(f"M_max must be at least 1, got {self.M_max}")
        if self.l_max < 1:
            raise ValueError(f"l_max must be at least 1, got {self.l_max}")
        if not self.p_target > 0:
            raise ValueError(f"p_target must be positive, got {self.p_target}")


@dataclass(frozen=True)
class Candidate:
    sequence: tuple[CodeSpec, ...]
    metrics: SequenceMetrics
    ids: tuple[int, ...]

    @property
    def key(self) -> tuple:
        return (self.metrics.overhead, self.metrics.M, len(self.sequence), self.ids)

    @property
    def tokens(self) -> str:
        return ",".join(c.token for c in self.sequence)


@dataclass
class SearchResult:
    best: Candidate | None
    viable: list[Candidate] = field(default_factory=list)
    nodes_visited: int = 0
    nodes_pruned: int = 0

    @property
    def feasible(self) -> bool:
        return self.best is not None


def search_order(catalog: Iterable[CodeSpec]) -> list[CodeSpec]:
    """Canonical child order with quantum codes of equal (n, k, d) merged."""
    out = []
    seen = set()
    for c in sorted(catalog, key=CodeSpec.sort_key):
        key = c.token
        if key in seen:
            continue
        seen.add(key)
        out.append(c)
    return out


def optimize(catalog: CodeCatalog | Sequence[CodeSpec], c: SearchConstraints) -> SearchResult:
    codes = search_order(catalog)
    result = SearchResult(None)
    root = _initial(c.cfg)

    def consider(state: _State, seq: tuple[CodeSpec, ...], ids: tuple[int, ...]) -> None:
        cand = Candidate(seq, _finish(state, c.cfg), ids)
        result.viable.append(cand)
        if result.best is None or cand.key < result.best.key:
            result.best = cand

    def dfs(state: _State, seq: tuple[CodeSpec, ...], ids: tuple[int, ...]) -> None:
        for idx, code in enumerate(codes):
            if code.is_classical and state.quantum:
                continue
            result.nodes_visited += 1
            child = extend(state, code)
            incumbent = result.best.metrics.overhead if result.best else math.inf
            if child.p > state.p or child.M > c.M_max or child.overhead > incumbent:
                result.nodes_pruned += 1
                continue
            cseq = seq + (code,)
            cids = ids + (idx,)
            if child.p / child.K < c.p_target:
                consider(child, cseq, cids)
                continue
            # every extension multiplies the overhead by more than one
            if len(cseq) < c.l_max and child.overhead < incumbent:
                dfs(child, cseq, cids)

    dfs(root, (), ())
    return result


def exhaustive_search(catalog: CodeCatalog | Sequence[CodeSpec], c: SearchConstraints) -> Candidate | None:
    """Reference search: enumerate every sequence up to l_max and keep the best valid one.

    A sequence is valid when classical codes precede quantum ones, the block
    error never increases from one level to the next, memory stays within
    M_max and the final per-qubit error is below p_target.
    """
    codes = search_order(catalog)
    best = None
    for length in range(1, c.l_max + 1):
        for ids in itertools.product(range(len(codes)), repeat=length):
            seq = tuple(codes[i] for i in ids)
            state = _initial(c.cfg)
            ok = True
            for code in seq:
                if code.is_classical and state.quantum:
                    ok = False
                    break
                nxt = extend(state, code)
                if nxt.p > state.p or nxt.M > c.M_max:
                    ok = False
                    break
                state = nxt
            if not ok or not state.p / state.K < c.p_target:
                continue
            cand = Candidate(seq, _finish(state, c.cfg), ids)
            if best is None or cand.key < best.key:
                best = cand
    return best


def pareto_sweep(
    catalog: CodeCatalog | Sequence[CodeSpec],
    base: SearchConstraints,
    buffers: Sequence[int],
) -> list[tuple[int, SearchResult]]:
    if not buffers:
        raise ValueError("buffer list is empty")
    if list(buffers) != sorted(buffers):
        raise ValueError("buffer list must be sorted ascending")
    out = []
    for m in buffers:
        c = SearchConstraints(base.cfg, m, base.p_target, base.l_max)
        out.append((m, optimize(catalog, c)))
    return out
