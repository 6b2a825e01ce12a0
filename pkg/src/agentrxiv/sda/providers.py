"""Completion providers for the dual-sampling engine.

The scripted provider answers from canned response tables so whole runs are
deterministic and offline; the remote provider speaks a single JSON call for
live runs against a wire-compatible endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from ..errors import ProviderFailure

# Persona headers placed at the top of each prompt; the scripted provider
# uses them to tell the three call kinds apart.
PRECISE_HEADER = "[precise-solver]"
CREATIVE_HEADER = "[creative-evaluator]"
META_HEADER = "[meta-reassessment]"

ROLE_HEADERS = {
    "precise_solver": PRECISE_HEADER,
    "creative_evaluator": CREATIVE_HEADER,
    "meta": META_HEADER,
}


@dataclass
class CompletionResult:
    text: str
    prompt_tokens: int
    completion_tokens: int


class CompletionProvider(Protocol):
    def complete(self, prompt: str, temperature: float, seed: int) -> CompletionResult: ...


def _count_tokens(text: str) -> int:
    return len(text.split())


class ScriptedProvider:
    """Canned responses keyed by problem text and role.

    ``table`` maps a problem key (any substring that appears in the prompt,
    typically the problem statement) to a dict with keys drawn from
    {"precise", "creative", "meta"}.  Missing entries raise ProviderFailure.
    """

    ROLE_KEYS = {
        PRECISE_HEADER: "precise",
        CREATIVE_HEADER: "creative",
        META_HEADER: "meta",
    }

    def __init__(self, table: dict[str, dict[str, str]]):
        self.table = table
        self.call_count = 0
        self.total_prompt_tokens = 0
        self.total_completion_tokens = 0

    def _role_key(self, prompt: str) -> str:
        for header, key in self.ROLE_KEYS.items():
            if header in prompt:
                return key
        raise ProviderFailure("prompt carries no persona header")

    def complete(self, prompt: str, temperature: float, seed: int) -> CompletionResult:
        role = self._role_key(prompt)
        matches = [key for key in self.table if key in prompt]
        if not matches:
            raise ProviderFailure("no scripted entry matches the prompt")
        key = max(matches, key=len)
        entry = self.table[key]
        if role not in entry:
            raise ProviderFailure(f"no scripted {role} response for {key!r}")
        text = entry[role]
        self.call_count += 1
        prompt_tokens = _count_tokens(prompt)
        completion_tokens = _count_tokens(text)
        self.total_prompt_tokens += prompt_tokens
        self.total_completion_tokens += completion_tokens
        return CompletionResult(text, prompt_tokens, completion_tokens)


class RemoteProvider:
    """HTTP provider: POST {prompt, temperature, seed} ->
    {text, prompt_tokens, completion_tokens}."""

    def __init__(self, url: str, timeout: float = 120.0):
        import httpx

        self.url = url
        self._client = httpx.Client(timeout=timeout)

    def complete(self, prompt: str, temperature: float, seed: int) -> CompletionResult:
        try:
            resp = self._client.post(
                self.url,
                json={"prompt": prompt, "temperature": temperature, "seed": seed},
            )
            resp.raise_for_status()
        except Exception as exc:
            raise ProviderFailure(str(exc)) from exc
        data = resp.json()
        return CompletionResult(
            text=data["text"],
            prompt_tokens=int(data.get("prompt_tokens", 0)),
            completion_tokens=int(data.get("completion_tokens", 0)),
        )
