"""JSON and CSV encoding of result objects.

Dataclasses are written field by field and read back through their type
hints, so ``load_report(dump_report(r)) == r`` for every report type.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import types
import typing
from dataclasses import dataclass, field
from typing import Any

from .analytic import SequenceMetrics
from .estimators import ComparisonRow
from .montecarlo import SimEstimate
from .optimizer import Candidate
from .pipeline import PipelinePlan


def to_data(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_data(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.init}
    if isinstance(obj, (list, tuple)):
        return [to_data(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): to_data(v) for k, v in obj.items()}
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def from_data(tp: Any, data: Any) -> Any:
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if tp is Any or tp is object:
        return data
    if origin in (typing.Union, types.UnionType):
        if data is None and type(None) in args:
            return None
        rest = [a for a in args if a is not type(None)]
        for a in rest:
            try:
                return from_data(a, data)
            except (TypeError, ValueError, KeyError):
                continue
        raise ValueError(f"cannot decode {data!r} as {tp}")
    if dataclasses.is_dataclass(tp):
        if not isinstance(data, dict):
            raise TypeError(f"expected object for {tp.__name__}")
        hints = typing.get_type_hints(tp)
        names = {f.name for f in dataclasses.fields(tp) if f.init}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown keys for {tp.__name__}: {sorted(unknown)}")
        return tp(**{k: from_data(hints[k], v) for k, v in data.items()})
    if origin is tuple:
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(from_data(args[0], v) for v in data)
        return tuple(from_data(a, v) for a, v in zip(args, data))
    if origin is list:
        return [from_data(args[0], v) for v in data]
    if origin is dict:
        kt, vt = args
        return {from_data(kt, k): from_data(vt, v) for k, v in data.items()}
    if tp is float:
        if isinstance(data, str):
            return float(data)
        if isinstance(data, bool) or not isinstance(data, (int, float)):
            raise TypeError(f"expected number, got {data!r}")
        return float(data)
    if tp is int:
        if isinstance(data, str):
            return int(data)
        if isinstance(data, bool) or not isinstance(data, int):
            raise TypeError(f"expected integer, got {data!r}")
        return data
    if tp is str:
        if not isinstance(data, str):
            raise TypeError(f"expected string, got {data!r}")
        return data
    if tp is bool:
        if not isinstance(data, bool):
            raise TypeError(f"expected boolean, got {data!r}")
        return data
    if tp is type(None):
        if data is not None:
            raise TypeError("expected null")
        return None
    raise TypeError(f"unsupported type {tp}")


@dataclass(frozen=True)
class OptimizePoint:
    buffer: int
    best: Candidate | None
    nodes_visited: int
    nodes_pruned: int
    viable: int


@dataclass(frozen=True)
class OptimizeReport:
    params: dict[str, Any]
    points: tuple[OptimizePoint, ...]
    command: str = "optimize"


@dataclass(frozen=True)
class EvaluateReport:
    params: dict[str, Any]
    metrics: SequenceMetrics
    command: str = "evaluate"


@dataclass(frozen=True)
class SimulateReport:
    params: dict[str, Any]
    estimate: SimEstimate
    command: str = "simulate"


@dataclass(frozen=True)
class CompareReport:
    params: dict[str, Any]
    rows: tuple[ComparisonRow, ...]
    command: str = "compare"


@dataclass(frozen=True)
class PipelineReport:
    params: dict[str, Any]
    metrics: SequenceMetrics
    plan: PipelinePlan
    command: str = "pipeline"


REPORT_TYPES = {
    "optimize": OptimizeReport,
    "evaluate": EvaluateReport,
    "simulate": SimulateReport,
    "compare": CompareReport,
    "pipeline": PipelineReport,
}


def dump_report(report) -> str:
    return json.dumps(to_data(report), indent=2) + "\n"


def load_report(text: str):
    data = json.loads(text)
    cls = REPORT_TYPES.get(data.get("command"))
    if cls is None:
        raise ValueError(f"unknown report command {data.get('command')!r}")
    return from_data(cls, data)


# CSV layouts: fixed column order per command.
CSV_COLUMNS = {
    "optimize": [
        "buffer", "feasible", "sequence", "overhead", "memory", "outputs", "p_out",
        "p_per_qubit", "nodes_visited", "nodes_pruned", "viable",
    ],
    "evaluate": ["level", "code", "n", "k", "d", "p", "p_fail", "K", "M", "overhead"],
    "simulate": [
        "trials", "seed", "p_fail", "p_fail_low", "p_fail_high", "p_out", "p_out_low",
        "p_out_high", "consumed_per_output", "consumed_stderr", "aborted",
    ],
    "compare": [f.name for f in dataclasses.fields(ComparisonRow)],
    "pipeline": ["level", "code", "B", "T_input", "T_distill", "batch_size", "batch_period"],
}


def _csv_rows(report) -> list[dict[str, Any]]:
    if isinstance(report, OptimizeReport):
        rows = []
        for pt in report.points:
            row = {"buffer": pt.buffer, "feasible": pt.best is not None, "nodes_visited": pt.nodes_visited,
                   "nodes_pruned": pt.nodes_pruned, "viable": pt.viable}
            if pt.best is not None:
                m = pt.best.metrics
                row.update(sequence=pt.best.tokens, overhead=m.overhead, memory=m.M, outputs=m.K,
                           p_out=m.p_out, p_per_qubit=m.p_per_qubit)
            rows.append(row)
        return rows
    if isinstance(report, EvaluateReport):
        rows = [{"level": 0, "code": "", "p": report.metrics.p_in, "p_fail": report.metrics.p0_reject,
                 "K": 1, "M": 1, "overhead": 1.0 / (1.0 - report.metrics.p0_reject)}]
        for i, lv in enumerate(report.metrics.levels, start=1):
            rows.append({"level": i, **{k: getattr(lv, k) for k in ("code", "n", "k", "d", "p", "p_fail", "K", "M", "overhead")}})
        return rows
    if isinstance(report, SimulateReport):
        e = report.estimate
        return [{
            "trials": e.trials, "seed": e.seed, "p_fail": e.p_fail.value, "p_fail_low": e.p_fail.low,
            "p_fail_high": e.p_fail.high, "p_out": e.p_out.value, "p_out_low": e.p_out.low,
            "p_out_high": e.p_out.high, "consumed_per_output": e.consumed_per_output,
            "consumed_stderr": e.consumed_stderr, "aborted": e.aborted,
        }]
    if isinstance(report, CompareReport):
        return [to_data(r) for r in report.rows]
    if isinstance(report, PipelineReport):
        rows = [to_data(s) for s in report.plan.stages]
        rows.append({"level": "total", "code": "", "B": report.plan.B_all,
                     "batch_size": report.plan.batch_size, "batch_period": report.plan.batch_period})
        return rows
    raise TypeError(f"no CSV layout for {type(report).__name__}")


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dump_csv(report) -> str:
    buf = io.StringIO()
    cols = CSV_COLUMNS[report.command]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in _csv_rows(report):
        w.writerow([_cell(row.get(c)) for c in cols])
    return buf.getvalue()
