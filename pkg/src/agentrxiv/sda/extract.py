"""Answer and confidence extraction from solver responses, plus grading
normalization.  Graders compare normalized strings, not symbolic math."""

from __future__ import annotations

import re
from fractions import Fraction

_FINAL_ANSWER_RE = re.compile(r"^\s*final answer:\s*(.*)$", re.IGNORECASE)
_CONFIDENCE_RE = re.compile(
    r"^\s*confidence:\s*(-?\d+(?:\.\d+)?)\s*(%?)\s*$", re.IGNORECASE
)
_FRAC_RE = re.compile(r"\\frac\{(-?\d+)\}\{(-?\d+)\}")
_NUMERIC_RE = re.compile(r"-?\d+(?:\.\d+)?|-?\d+\s*/\s*\d+")


def _last_boxed(text: str) -> str | None:
    """Content of the last \\boxed{...} with balanced braces, if any."""
    marker = "\\boxed{"
    start = text.rfind(marker)
    if start == -1:
        return None
    depth = 1
    i = start + len(marker)
    begin = i
    while i < len(text):
        ch = text[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[begin:i]
        i += 1
    return None  # unbalanced: treat as absent


def extract_final_answer(text: str) -> str | None:
    """Last boxed expression, else the remainder of the last 'Final Answer:'
    line; absent is a value, never an error.  Result is normalized."""
    answer = _last_boxed(text)
    if answer is None:
        for line in reversed(text.split("\n")):
            match = _FINAL_ANSWER_RE.match(line)
            if match:
                answer = match.group(1)
                break
    if answer is None or not answer.strip():
        return None
    return normalize_answer(answer)


def extract_confidence(text: str) -> float:
    """Self-reported confidence from the last 'Confidence: <number>' line.

    Percentages are divided by 100; values clamp to [0, 1]; missing -> 0.
    """
    for line in reversed(text.split("\n")):
        match = _CONFIDENCE_RE.match(line)
        if match:
            value = float(match.group(1))
            if match.group(2) == "%":
                value /= 100.0
            return max(0.0, min(1.0, value))
    return 0.0


def _render_fraction(frac: Fraction) -> str:
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"\\frac{{{frac.numerator}}}{{{frac.denominator}}}"


def normalize_answer(raw: str) -> str:
    """Canonical form for grading; idempotent.

    Trims, collapses internal whitespace, strips outer ``$`` and
    ``\\left``/``\\right``, strips trailing periods, maps ``\\dfrac`` to
    ``\\frac``, and renders anything that parses as a rational or decimal as
    an exact reduced fraction.
    """
    s = raw.strip()
    s = s.replace("\\dfrac", "\\frac")
    s = s.replace("\\left", "").replace("\\right", "")
    s = re.sub(r"\s+", " ", s).strip()
    # wrappers can nest ("$x$." hides the closing $ behind the period), so
    # strip dollars and trailing periods to a fixpoint
    while True:
        stripped = s.strip("$").strip().rstrip(".").strip()
        if stripped == s:
            break
        s = stripped

    frac_match = _FRAC_RE.fullmatch(s)
    if frac_match:
        denom = int(frac_match.group(2))
        if denom != 0:
            return _render_fraction(Fraction(int(frac_match.group(1)), denom))
        return s
    if _NUMERIC_RE.fullmatch(s):
        try:
            return _render_fraction(Fraction(s.replace(" ", "")))
        except (ValueError, ZeroDivisionError):
            return s
    return s
