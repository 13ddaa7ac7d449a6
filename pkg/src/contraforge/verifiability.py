"""Classify confirmed contradiction pairs as retrieval-verifiable or
retrieval-resistant, with a justification from the judge LLM."""

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .corpus import GoldItem
from .prompts import PromptLibrary
from .providers import ChatRequest, JudgeParseError, _extract_json_object

RETRIEVAL_VERIFIABLE = "retrieval_verifiable"
RETRIEVAL_RESISTANT = "retrieval_resistant"


@dataclass(frozen=True)
class VerifiabilityVerdict:
    category: str
    justification: str
    confidence: float

    def __post_init__(self):
        if self.category not in (RETRIEVAL_VERIFIABLE, RETRIEVAL_RESISTANT):
            raise ValueError(f"unknown category {self.category!r}")
        if not self.justification.strip():
            raise ValueError("justification must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")


def _parse_verdict(text: str) -> Optional[VerifiabilityVerdict]:
    obj = _extract_json_object(text, required_key="category")
    if obj is None:
        return None
    category = str(obj.get("category", "")).strip().lower().replace("-", "_")
    if category not in (RETRIEVAL_VERIFIABLE, RETRIEVAL_RESISTANT):
        return None
    justification = str(obj.get("justification") or "").strip()
    if not justification:
        return None
    try:
        confidence = min(1.0, max(0.0, float(obj.get("confidence", 0.5))))
    except (TypeError, ValueError):
        confidence = 0.5
    return VerifiabilityVerdict(category, justification, confidence)


def classify_verifiability(
    pair: GoldItem, chat, prompts: PromptLibrary
) -> VerifiabilityVerdict:
    """Rubric call deciding whether public authoritative evidence could
    resolve the confirmed contradiction. Requires human_label = 1."""
    if pair.human_label != 1:
        raise ValueError("verifiability applies only to confirmed contradictions")
    prompt = prompts.render(
        "verifiability", sentence1=pair.doc1_chunk, sentence2=pair.doc2_chunk
    )
    raw = chat.complete(ChatRequest(user=prompt, temperature=0.0))
    verdict = _parse_verdict(raw)
    if verdict is not None:
        return verdict
    retry = chat.complete(
        ChatRequest(user=prompt + "\n\nReturn only the structured object.", temperature=0.0)
    )
    verdict = _parse_verdict(retry)
    if verdict is None:
        raise JudgeParseError("verifiability response unparseable after reprompt", raw=retry)
    return verdict


def classify_gold_set(
    gold: Sequence[GoldItem], chat, prompts: PromptLibrary
) -> List[dict]:
    """One verdict record per confirmed pair; parse failures become explicit
    error records so category counts plus errors always sum to the confirmed
    pair count."""
    out: List[dict] = []
    for item in gold:
        if item.human_label != 1:
            continue
        try:
            verdict = classify_verifiability(item, chat, prompts)
            out.append(
                {
                    "key": item.key,
                    "category": verdict.category,
                    "justification": verdict.justification,
                    "confidence": verdict.confidence,
                }
            )
        except JudgeParseError as exc:
            out.append({"key": item.key, "error": str(exc), "raw": exc.raw})
    return out
