"""Command-line interface.

Exit codes: 0 success, 1 usage or configuration error, 2 infeasible request.
Settings come from defaults, then a JSON ``--config`` file, then flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .analytic import EvalConfig, evaluate_sequence
from .channels import depolarizing
from .codes import CatalogError, load_catalog, parse_sequence
from .estimators import (
    DEFAULT_SCENARIOS,
    InjectionParams,
    SchemeConfig,
    bell_injection_reject,
    comparison_table,
    injection_error,
)
from .montecarlo import DEFAULT_ATTEMPT_CAP, TrialConfig, simulate_level, simulate_sequence
from .optimizer import SearchConstraints, optimize
from .pipeline import plan_pipeline
from .reports import (
    CompareReport,
    EvaluateReport,
    OptimizePoint,
    OptimizeReport,
    PipelineReport,
    SimulateReport,
    dump_csv,
    dump_report,
)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2


class UsageError(Exception):
    """Bad flag, config value or input file."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


COMMON = {"catalog": None, "no_builtin": False, "format": "json", "out": None, "seed": 0, "threads": 1}
NOISE = {"p_bell": 0.01, "p_gate": 0.001, "p_reject": 0.08, "p_in": None, "p0": None, "target": 1e-12}
DEFAULTS: dict[str, dict[str, Any]] = {
    "optimize": {**COMMON, **NOISE, "buffer": [30], "l_max": 7},
    "evaluate": {**COMMON, **NOISE, "seq": ""},
    "simulate": {**COMMON, **NOISE, "seq": "", "mode": "sequence", "trials": 100_000,
                 "attempt_cap": DEFAULT_ATTEMPT_CAP},
    "compare": {**COMMON, "scenarios": list(DEFAULT_SCENARIOS), "p_gate": 0.001, "p_reject": 0.08,
                "target": 1e-12, "buffers": [10, 30, 50, 100], "l_max": 7, "bdsw_input": "network"},
    "pipeline": {**COMMON, **NOISE, "seq": "", "t_bell": 1.0, "t_gate": 0.01, "t_inject": 0.01,
                 "buffer": None},
}


def _add_common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="JSON file with settings (flags take precedence)")
    p.add_argument("--catalog", default=S, help="extra catalog CSV (n,k,d[,label] per line)")
    p.add_argument("--no-builtin", action="store_true", default=S,
                   help="drop the bundled table and the generated code families")
    p.add_argument("--format", choices=["json", "csv"], default=S)
    p.add_argument("--out", default=S, help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--threads", type=int, default=S)


def _add_noise(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--p-bell", type=float, default=S, help="network Bell pair error")
    p.add_argument("--p-gate", type=float, default=S, help="local one- and two-qubit gate error")
    p.add_argument("--p-reject", type=float, default=S, help="single-qubit injection rejection")
    p.add_argument("--p-in", type=float, default=S,
                   help="distillation input error (overrides the injection model)")
    p.add_argument("--p0", type=float, default=S,
                   help="Bell pair injection rejection (overrides the value from --p-reject)")
    p.add_argument("--target", type=float, default=S, help="per-qubit target error")


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = _Parser(prog="qed-distill", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("optimize", help="search for the lowest-overhead sequence")
    _add_common(p)
    _add_noise(p)
    p.add_argument("--buffer", type=int, nargs="+", default=S, help="buffer size(s) in logical qubits")
    p.add_argument("--l-max", type=int, default=S)

    p = sub.add_parser("evaluate", help="evaluate one sequence with the analytic model")
    _add_common(p)
    _add_noise(p)
    p.add_argument("--seq", default=S, help='e.g. "r3X,r2Y,r2X,q4.2.2"')

    p = sub.add_parser("simulate", help="Monte-Carlo simulation of a sequence")
    _add_common(p)
    _add_noise(p)
    p.add_argument("--seq", default=S)
    p.add_argument("--mode", choices=["sequence", "level"], default=S)
    p.add_argument("--trials", type=int, default=S)
    p.add_argument("--attempt-cap", type=int, default=S)

    p = sub.add_parser("compare", help="overhead and memory of all schemes across network errors")
    _add_common(p)
    p.add_argument("--scenarios", type=float, nargs="+", default=S)
    p.add_argument("--p-gate", type=float, default=S)
    p.add_argument("--p-reject", type=float, default=S)
    p.add_argument("--target", type=float, default=S)
    p.add_argument("--buffers", type=int, nargs="+", default=S)
    p.add_argument("--l-max", type=int, default=S)
    p.add_argument("--bdsw-input", choices=["network", "injected"], default=S)

    p = sub.add_parser("pipeline", help="buffer and timing plan for a sequence")
    _add_common(p)
    _add_noise(p)
    p.add_argument("--seq", default=S)
    p.add_argument("--t-bell", type=float, default=S)
    p.add_argument("--t-gate", type=float, default=S)
    p.add_argument("--t-inject", type=float, default=S)
    p.add_argument("--buffer", type=int, default=S, help="fail if the plan needs more logical qubits")
    return parser


def resolve(command: str, flags: dict[str, Any]) -> dict[str, Any]:
    """Merge defaults, config file and flags; reject unknown config keys."""
    params = dict(DEFAULTS[command])
    config_path = flags.pop("config", None)
    if config_path is not None:
        try:
            data = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"config: cannot read {config_path}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config: top level must be an object")
        for key, value in data.items():
            name = key.replace("-", "_")
            if name not in params:
                raise UsageError(f"config: unknown key {key!r}")
            params[name] = value
    params.update(flags)
    _validate(params)
    return params


def _check(cond: bool, field: str, message: str) -> None:
    if not cond:
        raise UsageError(f"{field}: {message}")


def _is_prob(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and 0.0 <= v < 1.0


def _validate(p: dict[str, Any]) -> None:
    for name in ("p_bell", "p_gate", "p_reject", "p_in", "p0"):
        if name in p and p[name] is not None:
            _check(_is_prob(p[name]), name, f"must lie in [0, 1), got {p[name]!r}")
    if "target" in p:
        _check(isinstance(p["target"], (int, float)) and 0 < p["target"] <= 1, "target", "must lie in (0, 1]")
    _check(p["format"] in ("json", "csv"), "format", "must be json or csv")
    _check(isinstance(p["seed"], int) and 0 <= p["seed"] < 2**64, "seed", "must be a 64-bit unsigned integer")
    _check(isinstance(p["threads"], int) and p["threads"] >= 1, "threads", "must be at least 1")
    if isinstance(p.get("buffer"), list):
        _check(len(p["buffer"]) > 0, "buffer", "needs at least one value")
        for b in p["buffer"]:
            _check(isinstance(b, int) and b >= 1, "buffer", f"must be at least 1, got {b!r}")
    elif p.get("buffer") is not None:
        _check(isinstance(p["buffer"], int) and p["buffer"] >= 1, "buffer", "must be at least 1")
    for name in ("buffers",):
        if name in p:
            for b in p[name]:
                _check(isinstance(b, int) and b >= 1, name, f"must be at least 1, got {b!r}")
    if "l_max" in p:
        _check(isinstance(p["l_max"], int) and p["l_max"] >= 1, "l_max", "must be at least 1")
    for name in ("trials", "attempt_cap"):
        if name in p:
            _check(isinstance(p[name], int) and p[name] >= 1, name, "must be at least 1")
    for name in ("t_bell", "t_gate", "t_inject"):
        if name in p:
            _check(isinstance(p[name], (int, float)) and p[name] > 0, name, "must be positive")
    if "scenarios" in p:
        for s in p["scenarios"]:
            _check(_is_prob(s), "scenarios", f"must lie in [0, 1), got {s!r}")
    if "bdsw_input" in p:
        _check(p["bdsw_input"] in ("network", "injected"), "bdsw_input", "must be network or injected")


def eval_config(p: dict[str, Any]) -> EvalConfig:
    if p["p_in"] is not None:
        p_in = p["p_in"]
    else:
        p_in = injection_error(InjectionParams(p["p_gate"], p["p_gate"], p["p_bell"], p["p_reject"]))
    p0 = p["p0"] if p["p0"] is not None else bell_injection_reject(p["p_reject"])
    _check(p_in <= 0.75, "p_in", f"distillation input error {p_in} exceeds 3/4")
    return EvalConfig(depolarizing(p_in), p0, p["target"])


def _sequence(p: dict[str, Any]):
    try:
        seq = parse_sequence(p["seq"])
        evaluate_sequence(seq, EvalConfig(depolarizing(0.0)))
    except ValueError as exc:
        raise UsageError(f"seq: {exc}") from None
    return seq


def _catalog(p: dict[str, Any]):
    try:
        return load_catalog(p["catalog"], builtin=not p["no_builtin"], generated=not p["no_builtin"])
    except (CatalogError, OSError) as exc:
        raise UsageError(f"catalog: {exc}") from None


def cmd_optimize(p: dict[str, Any]):
    catalog = _catalog(p)
    cfg = eval_config(p)
    points = []
    for m in sorted(p["buffer"]):
        res = optimize(catalog, SearchConstraints(cfg, m, p["target"], p["l_max"]))
        points.append(OptimizePoint(m, res.best, res.nodes_visited, res.nodes_pruned, len(res.viable)))
    report = OptimizeReport(_public(p), tuple(points))
    code = EXIT_OK if all(pt.best is not None for pt in points) else EXIT_INFEASIBLE
    return report, code


def cmd_evaluate(p: dict[str, Any]):
    seq = _sequence(p)
    return EvaluateReport(_public(p), evaluate_sequence(seq, eval_config(p))), EXIT_OK


def cmd_simulate(p: dict[str, Any]):
    seq = _sequence(p)
    _check(len(seq) > 0, "seq", "simulation needs at least one code")
    for c in seq:
        _check(c.simulable, "seq", f"code {c.token} ({c.kind}) is not simulable")
    cfg = eval_config(p)
    trial = TrialConfig(p["seed"], p["trials"], p["attempt_cap"], p["threads"])
    if p["mode"] == "level":
        _check(len(seq) == 1, "seq", "level mode takes exactly one code")
        est = simulate_level(seq[0], cfg.p_in, trial)
    else:
        est = simulate_sequence(seq, cfg.p_in, trial)
    # thread count does not affect results and is left out for byte-identical replay
    params = {k: v for k, v in _public(p).items() if k != "threads"}
    return SimulateReport(params, est), EXIT_OK


def cmd_compare(p: dict[str, Any]):
    schemes = SchemeConfig(
        p_gate=p["p_gate"], p_reject=p["p_reject"], p_target=p["target"],
        buffers=tuple(p["buffers"]), l_max=p["l_max"], bdsw_input=p["bdsw_input"],
    )
    rows = comparison_table(tuple(p["scenarios"]), schemes, _catalog(p))
    return CompareReport(_public(p), tuple(rows)), EXIT_OK


def cmd_pipeline(p: dict[str, Any]):
    seq = _sequence(p)
    _check(len(seq) > 0, "seq", "pipeline needs at least one code")
    metrics = evaluate_sequence(seq, eval_config(p))
    plan = plan_pipeline(seq, metrics, p["t_bell"], p["t_gate"], p["t_inject"])
    code = EXIT_OK
    if p["buffer"] is not None and plan.B_all > p["buffer"]:
        print(f"infeasible: plan needs {plan.B_all:.6g} logical qubits, buffer is {p['buffer']}", file=sys.stderr)
        code = EXIT_INFEASIBLE
    return PipelineReport(_public(p), metrics, plan), code


COMMANDS = {
    "optimize": cmd_optimize,
    "evaluate": cmd_evaluate,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "pipeline": cmd_pipeline,
}


def _public(p: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in p.items() if k not in ("out", "format")}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        flags = vars(ns)
        command = flags.pop("command")
        params = resolve(command, flags)
        report, code = COMMANDS[command](params)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dump_csv(report) if params["format"] == "csv" else dump_report(report)
    if params["out"]:
        try:
            Path(params["out"]).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: out: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    if code == EXIT_INFEASIBLE and command == "optimize":
        print("infeasible: no sequence meets the constraints", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
