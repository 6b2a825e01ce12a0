"""Dual-temperature chain-of-thought engine with divergence gating."""

from .config import SdaConfig
from .extract import extract_confidence, extract_final_answer, normalize_answer
from .engine import (
    CalibrationState,
    Decision,
    EvalReport,
    SdaOutcome,
    SolverResponse,
    calibrate_threshold,
    compute_divergence,
    decide,
    evaluate_dataset,
    generate_dual_responses,
    meta_reassess,
    run_sda,
)
from .providers import CompletionProvider, CompletionResult, RemoteProvider, ScriptedProvider

__all__ = [
    "SdaConfig",
    "extract_confidence",
    "extract_final_answer",
    "normalize_answer",
    "CalibrationState",
    "Decision",
    "EvalReport",
    "SdaOutcome",
    "SolverResponse",
    "calibrate_threshold",
    "compute_divergence",
    "decide",
    "evaluate_dataset",
    "generate_dual_responses",
    "meta_reassess",
    "run_sda",
    "CompletionProvider",
    "CompletionResult",
    "RemoteProvider",
    "ScriptedProvider",
]
