"""Core of the dual-sampling procedure: paired low/high temperature
responses, embedding-based divergence gating against a calibrated threshold,
meta-reassessment, and dataset evaluation."""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from ..embedding import EmbeddingProvider, cosine_similarity
from ..errors import ProviderFailure
from .config import SdaConfig
from .extract import extract_confidence, extract_final_answer, normalize_answer
from .providers import (
    CompletionProvider,
    CREATIVE_HEADER,
    META_HEADER,
    PRECISE_HEADER,
)


@dataclass
class SolverResponse:
    role: str  # precise_solver | creative_evaluator | meta
    temperature: float
    text: str
    extracted_answer: str | None
    confidence: float
    prompt_tokens: int = 0
    completion_tokens: int = 0


@dataclass
class Decision:
    needs_meta: bool
    selected: SolverResponse | None = None


@dataclass
class SdaOutcome:
    problem_id: str
    final_answer: str | None
    path: str  # agreement | meta_reassessment | fallback
    similarity: float
    threshold_used: float
    confidences: tuple[float, float]
    correct: bool | None = None
    prompt_tokens: int = 0
    completion_tokens: int = 0
    error: str | None = None


@dataclass
class CalibrationState:
    """Shared sequential resource: similarities in problem completion order."""

    history: list[float] = field(default_factory=list)

    def push(self, similarity: float) -> None:
        self.history.append(similarity)


def precise_prompt(problem: str) -> str:
    return (
        f"{PRECISE_HEADER} You are a careful, methodical solver. Work through the "
        "problem step by step, double-checking each step. End with the final "
        "answer in \\boxed{...} and a line 'Confidence: <0-1>'.\n\n"
        f"Problem: {problem}"
    )


def creative_prompt(problem: str) -> str:
    return (
        f"{CREATIVE_HEADER} You are an inventive evaluator. Explore an "
        "unconventional solution path before committing. End with the final "
        "answer in \\boxed{...} and a line 'Confidence: <0-1>'.\n\n"
        f"Problem: {problem}"
    )


def meta_prompt(problem: str, resp_a: SolverResponse, resp_b: SolverResponse) -> str:
    return (
        f"{META_HEADER} Two solvers disagree. Reconcile their reasoning and give "
        "one final answer in \\boxed{...} with a line 'Confidence: <0-1>'.\n\n"
        f"Problem: {problem}\n\n"
        f"Response A:\n{resp_a.text}\n\nResponse B:\n{resp_b.text}"
    )


def _make_response(
    role: str, temperature: float, text: str, prompt_tokens: int, completion_tokens: int
) -> SolverResponse:
    answer = extract_final_answer(text)
    # extraction failure carries zero confidence regardless of any stated value
    confidence = extract_confidence(text) if answer is not None else 0.0
    return SolverResponse(
        role=role,
        temperature=temperature,
        text=text,
        extracted_answer=answer,
        confidence=confidence,
        prompt_tokens=prompt_tokens,
        completion_tokens=completion_tokens,
    )


def generate_dual_responses(
    problem: str,
    provider: CompletionProvider,
    config: SdaConfig,
    seed: int = 0,
) -> tuple[SolverResponse, SolverResponse]:
    """One low-temperature and one high-temperature response, with answers
    and confidences attached.  Unextractable answers are kept, not dropped."""
    result_a = provider.complete(precise_prompt(problem), config.t_low, seed)
    result_b = provider.complete(creative_prompt(problem), config.t_high, seed)
    resp_a = _make_response(
        "precise_solver", config.t_low, result_a.text,
        result_a.prompt_tokens, result_a.completion_tokens,
    )
    resp_b = _make_response(
        "creative_evaluator", config.t_high, result_b.text,
        result_b.prompt_tokens, result_b.completion_tokens,
    )
    return resp_a, resp_b


def compute_divergence(
    resp_a: SolverResponse, resp_b: SolverResponse, embedder: EmbeddingProvider
) -> float:
    """Cosine similarity of the two full response texts."""
    return cosine_similarity(embedder.embed(resp_a.text), embedder.embed(resp_b.text))


def calibrate_threshold(history: list[float], config: SdaConfig) -> float:
    """Dynamic threshold: mean minus kappa standard deviations of the recent
    window, clamped to [tau_min, tau_max]; tau_init below 3 observations.

    Uses the sample standard deviation; the cold-start rule guarantees the
    window holds at least 3 observations when it is computed.  Pure function
    of its inputs.
    """
    if len(history) < 3:
        return config.tau_init
    window = history[-config.window :]
    tau = statistics.fmean(window) - config.kappa * statistics.stdev(window)
    return max(config.tau_min, min(config.tau_max, tau))


def decide(
    resp_a: SolverResponse,
    resp_b: SolverResponse,
    similarity: float,
    threshold: float,
) -> Decision:
    """Pure, total selection rule.

    Equal parsed answers agree regardless of similarity.  Above the threshold
    the parsed answer with higher confidence wins (tie goes to the precise
    solver).  Otherwise meta-reassessment is required.
    """
    a, b = resp_a.extracted_answer, resp_b.extracted_answer
    if a is not None and b is not None and a == b:
        return Decision(needs_meta=False, selected=resp_a)
    if similarity >= threshold and (a is not None or b is not None):
        if a is not None and b is not None:
            selected = resp_b if resp_b.confidence > resp_a.confidence else resp_a
        else:
            selected = resp_a if a is not None else resp_b
        return Decision(needs_meta=False, selected=selected)
    return Decision(needs_meta=True)


def meta_reassess(
    problem: str,
    resp_a: SolverResponse,
    resp_b: SolverResponse,
    provider: CompletionProvider,
    config: SdaConfig,
    seed: int = 0,
) -> SolverResponse:
    """One reconciling completion at the low temperature."""
    result = provider.complete(meta_prompt(problem, resp_a, resp_b), config.t_low, seed)
    return _make_response(
        "meta", config.t_low, result.text, result.prompt_tokens, result.completion_tokens
    )


def run_sda(
    problem_id: str,
    problem: str,
    provider: CompletionProvider,
    embedder: EmbeddingProvider,
    state: CalibrationState,
    config: SdaConfig | None = None,
    seed: int = 0,
) -> SdaOutcome:
    """Full per-problem pipeline; pushes the similarity into the calibration
    window after the problem completes."""
    config = config or SdaConfig()
    resp_a, resp_b = generate_dual_responses(problem, provider, config, seed)
    similarity = compute_divergence(resp_a, resp_b, embedder)
    threshold = calibrate_threshold(state.history, config)
    decision = decide(resp_a, resp_b, similarity, threshold)

    prompt_tokens = resp_a.prompt_tokens + resp_b.prompt_tokens
    completion_tokens = resp_a.completion_tokens + resp_b.completion_tokens

    if not decision.needs_meta:
        final = decision.selected.extracted_answer
        path = "agreement"
    else:
        meta = meta_reassess(problem, resp_a, resp_b, provider, config, seed)
        prompt_tokens += meta.prompt_tokens
        completion_tokens += meta.completion_tokens
        if meta.extracted_answer is not None:
            final, path = meta.extracted_answer, "meta_reassessment"
        else:
            parsed = [r for r in (resp_a, resp_b) if r.extracted_answer is not None]
            if parsed:
                best = max(parsed, key=lambda r: r.confidence)
                final, path = best.extracted_answer, "meta_reassessment"
            else:
                final, path = None, "fallback"

    state.push(similarity)
    return SdaOutcome(
        problem_id=problem_id,
        final_answer=final,
        path=path,
        similarity=similarity,
        threshold_used=threshold,
        confidences=(resp_a.confidence, resp_b.confidence),
        prompt_tokens=prompt_tokens,
        completion_tokens=completion_tokens,
    )


@dataclass
class EvalReport:
    accuracy: float
    total: int
    correct: int
    path_counts: dict[str, int]
    outcomes: list[SdaOutcome]

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "total": self.total,
            "correct": self.correct,
            "path_counts": dict(self.path_counts),
        }


def evaluate_dataset(
    problems: list[dict],
    provider: CompletionProvider,
    embedder: EmbeddingProvider,
    config: SdaConfig | None = None,
    seed: int = 0,
) -> EvalReport:
    """Grade every problem row {id, problem, answer}; provider failures are
    logged as incorrect-with-error and never abort the run."""
    config = config or SdaConfig()
    state = CalibrationState()
    outcomes: list[SdaOutcome] = []
    correct = 0
    paths: dict[str, int] = {"agreement": 0, "meta_reassessment": 0, "fallback": 0}
    for row in problems:
        problem_id = str(row["id"])
        try:
            outcome = run_sda(
                problem_id, row["problem"], provider, embedder, state, config, seed
            )
        except ProviderFailure as exc:
            outcome = SdaOutcome(
                problem_id=problem_id,
                final_answer=None,
                path="fallback",
                similarity=0.0,
                threshold_used=calibrate_threshold(state.history, config),
                confidences=(0.0, 0.0),
                error=str(exc),
            )
        truth = normalize_answer(str(row["answer"]))
        outcome.correct = outcome.final_answer is not None and outcome.final_answer == truth
        if outcome.correct:
            correct += 1
        paths[outcome.path] = paths.get(outcome.path, 0) + 1
        outcomes.append(outcome)
    total = len(outcomes)
    return EvalReport(
        accuracy=correct / total if total else 0.0,
        total=total,
        correct=correct,
        path_counts=paths,
        outcomes=outcomes,
    )


def write_report(report: EvalReport, json_path: str | Path, csv_path: str | Path) -> None:
    """JSON summary plus a CSV per-problem log (id, path, similarity,
    threshold, correct)."""
    Path(json_path).write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "path", "similarity", "threshold", "correct"])
        for outcome in report.outcomes:
            writer.writerow(
                [
                    outcome.problem_id,
                    outcome.path,
                    repr(outcome.similarity),
                    repr(outcome.threshold_used),
                    outcome.correct,
                ]
            )
