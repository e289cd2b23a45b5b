"""Bell-pair distillation by quantum error detection: codes, analytic model, search and simulation."""

from .analytic import EvalConfig, LevelMetrics, SequenceMetrics, evaluate_sequence, qed_error_bound
from .channels import PauliDist, depolarizing, repetition_step
from .codes import (
    CatalogError,
    CodeCatalog,
    CodeSpec,
    PauliOp,
    StabilizerCode,
    load_catalog,
    logical_effect,
    parity_code,
    parse_sequence,
    repetition_code,
    syndrome,
)
from .estimators import comparison_table, injection_error, lattice_surgery_overhead, surface_code_distance
from .montecarlo import SimEstimate, TrialConfig, simulate_level, simulate_sequence
from .optimizer import SearchConstraints, SearchResult, optimize
from .pipeline import GateSchedule, plan_pipeline, unencode_schedule

__version__ = "0.1.0"

__all__ = [
    "CatalogError", "CodeCatalog", "CodeSpec", "EvalConfig", "GateSchedule", "LevelMetrics",
    "PauliDist", "PauliOp", "SearchConstraints", "SearchResult", "SequenceMetrics", "SimEstimate",
    "StabilizerCode", "TrialConfig", "comparison_table", "depolarizing", "evaluate_sequence",
    "injection_error", "lattice_surgery_overhead", "load_catalog", "logical_effect", "optimize",
    "parity_code", "parse_sequence", "plan_pipeline", "qed_error_bound", "repetition_code",
    "repetition_step", "simulate_level", "simulate_sequence", "surface_code_distance", "syndrome",
    "unencode_schedule",
]
