"""Model-backed capability interfaces: chat, embeddings, NLI, token logprobs.

Deployed backends speak the OpenAI-compatible wire protocol; every capability
also has a deterministic mock so the whole pipeline runs offline in tests.
"""

import hashlib
import json
import math
import os
import random
import re
import threading
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import requests

API_KEY_ENV = "CONTRAFORGE_API_KEY"

# Bounds in-flight external requests across all providers.
_request_semaphore = threading.BoundedSemaphore(8)


def set_max_inflight_requests(n: int) -> None:
    global _request_semaphore
    _request_semaphore = threading.BoundedSemaphore(n)


@dataclass(frozen=True)
class ChatRequest:
    user: str
    system: Optional[str] = None
    temperature: float = 0.7
    max_tokens: int = 2048

    def __post_init__(self):
        if not self.user.strip():
            raise ValueError("chat request needs a non-empty user message")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class NliVerdict:
    label: str  # contradiction | neutral | entailment
    confidence: float

    def __post_init__(self):
        if self.label not in ("contradiction", "neutral", "entailment"):
            raise ValueError(f"unknown NLI label {self.label!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")


@dataclass(frozen=True)
class JudgeVerdict:
    contradiction: int  # 0 or 1
    reasoning: str
    confidence: float

    def __post_init__(self):
        if self.contradiction not in (0, 1):
            raise ValueError("judge verdict label must be 0 or 1")
        if not self.reasoning.strip():
            raise ValueError("judge verdict needs non-empty reasoning")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")


class ProviderError(Exception):
    """Backend call failed after retries, or returned an unusable payload."""


class JudgeParseError(ProviderError):
    """Judge response stayed unparseable after the reprompt; carries raw text."""

    def __init__(self, message: str, raw: str):
        super().__init__(message)
        self.raw = raw


def prompt_hash(req: ChatRequest) -> str:
    material = (req.system or "") + "\x1f" + req.user
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# OpenAI-compatible wire clients
# ---------------------------------------------------------------------------


class OpenAIChatClient:
    """Chat completions over POST {base_url}/chat/completions.

    Transient failures (connection errors, 429, 5xx) are retried with
    jittered exponential backoff; other non-2xx statuses fail immediately.
    """

    RETRYABLE = {429, 500, 502, 503, 504}

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: Optional[str] = None,
        max_retries: int = 5,
        base_delay: float = 0.5,
        timeout: float = 60.0,
        session: Optional[requests.Session] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key if api_key is not None else os.getenv(API_KEY_ENV, "")
        self.max_retries = max_retries
        self.base_delay = base_delay
        self.timeout = timeout
        self.session = session or requests.Session()
        self._sleep = sleep

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def _post(self, path: str, body: dict) -> dict:
        url = self.base_url + path
        last_error: Optional[str] = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                delay = self.base_delay * (2 ** (attempt - 1))
                self._sleep(delay * (1.0 + random.random() * 0.25))
            try:
                with _request_semaphore:
                    resp = self.session.post(
                        url, json=body, headers=self._headers(), timeout=self.timeout
                    )
            except requests.RequestException as exc:
                last_error = str(exc)
                continue
            if resp.status_code in self.RETRYABLE:
                last_error = f"HTTP {resp.status_code}"
                continue
            if not 200 <= resp.status_code < 300:
                raise ProviderError(f"{url} returned HTTP {resp.status_code}")
            try:
                return resp.json()
            except ValueError as exc:
                raise ProviderError(f"{url} returned non-JSON body: {exc}") from exc
        raise ProviderError(f"{url} failed after {self.max_retries} retries: {last_error}")

    def complete(self, req: ChatRequest) -> str:
        messages = []
        if req.system:
            messages.append({"role": "system", "content": req.system})
        messages.append({"role": "user", "content": req.user})
        data = self._post(
            "/chat/completions",
            {
                "model": self.model,
                "messages": messages,
                "temperature": req.temperature,
                "max_tokens": req.max_tokens,
            },
        )
        try:
            content = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed completion body at {exc!r}") from exc
        if not content:
            raise ProviderError("empty completion content")
        return content


class OpenAIEmbeddingClient:
    """Embeddings over POST {base_url}/embeddings; output is L2-normalized."""

    def __init__(self, base_url: str, model: str, api_key: Optional[str] = None, **kw):
        self._chat = OpenAIChatClient(base_url, model, api_key=api_key, **kw)
        self.model = model

    def embed(self, texts: Sequence[str]) -> List[List[float]]:
        if not texts:
            raise ValueError("embed needs at least one text")
        data = self._chat._post("/embeddings", {"model": self.model, "input": list(texts)})
        try:
            vectors = [item["embedding"] for item in data["data"]]
        except (KeyError, TypeError) as exc:
            raise ProviderError(f"malformed embedding body at {exc!r}") from exc
        if len(vectors) != len(texts):
            raise ProviderError(
                f"backend returned {len(vectors)} vectors for {len(texts)} inputs"
            )
        dims = {len(v) for v in vectors}
        if len(dims) != 1:
            raise ProviderError(f"embedding dimension mismatch: {sorted(dims)}")
        return [_l2_normalize(v) for v in vectors]


def _l2_normalize(vec: Sequence[float]) -> List[float]:
    norm = math.sqrt(sum(x * x for x in vec))
    if norm == 0:
        raise ProviderError("zero embedding vector cannot be normalized")
    return [x / norm for x in vec]


# ---------------------------------------------------------------------------
# Deterministic mocks
# ---------------------------------------------------------------------------


class MockChat:
    """Pure-function chat mock.

    Responses come from an exact mapping of prompt hashes, then from an
    optional responder callable. Identical requests always produce identical
    responses; every call is counted.
    """

    def __init__(
        self,
        by_hash: Optional[Dict[str, str]] = None,
        responder: Optional[Callable[[ChatRequest], str]] = None,
    ):
        self.by_hash = dict(by_hash or {})
        self.responder = responder
        self.calls: List[ChatRequest] = []

    def complete(self, req: ChatRequest) -> str:
        self.calls.append(req)
        h = prompt_hash(req)
        if h in self.by_hash:
            return self.by_hash[h]
        if self.responder is not None:
            return self.responder(req)
        raise ProviderError(f"mock chat has no response for prompt hash {h[:12]}")


class MockEmbedding:
    """Hash-bucketed token-count embeddings, L2-normalized.

    Each whitespace token is lower-cased and hashed into one of `dim`
    buckets; the vector is the bucket count profile. Deterministic and easy
    to reason about by hand when tokens do not collide.
    """

    def __init__(self, dim: int = 256):
        self.dim = dim

    def _bucket(self, token: str) -> int:
        digest = hashlib.sha256(token.lower().encode("utf-8")).digest()
        return int.from_bytes(digest[:4], "big") % self.dim

    def embed(self, texts: Sequence[str]) -> List[List[float]]:
        if not texts:
            raise ValueError("embed needs at least one text")
        out = []
        for text in texts:
            vec = [0.0] * self.dim
            for token in text.split():
                vec[self._bucket(token)] += 1.0
            if all(v == 0.0 for v in vec):
                vec[self._bucket("")] = 1.0
            out.append(_l2_normalize(vec))
        return out


class MockNli:
    """Rule-based NLI mock.

    "NOT " + premise -> contradiction 0.95; identical -> entailment 0.99;
    anything else -> neutral 0.60.
    """

    def __init__(self):
        self.calls = 0

    def classify(self, premise: str, hypothesis: str) -> NliVerdict:
        self.calls += 1
        if not premise.strip() or not hypothesis.strip():
            raise ValueError("NLI inputs must be non-empty")
        if hypothesis == "NOT " + premise or premise == "NOT " + hypothesis:
            return NliVerdict("contradiction", 0.95)
        if hypothesis == premise:
            return NliVerdict("entailment", 0.99)
        return NliVerdict("neutral", 0.60)


class CollusiveNli:
    """NLI mock primed with known contradiction pairs (normalized text).

    Pairs in the primed set score contradiction 0.90; everything else is
    confidently neutral so it is not forwarded to the judge.
    """

    def __init__(self, pairs: Sequence[Tuple[str, str]]):
        from .corpus import normalize_text

        self._norm = normalize_text
        self.known: Set[frozenset] = {
            frozenset((self._norm(a), self._norm(b))) for a, b in pairs
        }
        self.calls = 0

    def classify(self, premise: str, hypothesis: str) -> NliVerdict:
        self.calls += 1
        key = frozenset((self._norm(premise), self._norm(hypothesis)))
        if key in self.known:
            return NliVerdict("contradiction", 0.90)
        return NliVerdict("neutral", 0.75)


class MockLogprobs:
    """Uniform-model logprob mock: every whitespace token scores -ln(V)."""

    def __init__(self, vocab_size: int = 50):
        if vocab_size < 2:
            raise ValueError("vocab size must be >= 2")
        self.vocab_size = vocab_size

    def token_logprobs(self, text: str) -> List[float]:
        if not text.strip():
            raise ValueError("cannot score empty text")
        n = len(text.split())
        return [-math.log(self.vocab_size)] * n


class ChunkedLogprobs:
    """Wraps a logprob backend with a context limit.

    Texts longer than `max_tokens` are split at paragraph boundaries, scored
    per segment, and concatenated; the per-token values are unchanged so the
    token-weighted average equals scoring the whole text where the backend
    allows it.
    """

    def __init__(self, backend, max_tokens: int = 1024):
        self.backend = backend
        self.max_tokens = max_tokens

    def token_logprobs(self, text: str) -> List[float]:
        if not text.strip():
            raise ValueError("cannot score empty text")
        if len(text.split()) <= self.max_tokens:
            return self.backend.token_logprobs(text)
        out: List[float] = []
        for segment in self._segments(text):
            out.extend(self.backend.token_logprobs(segment))
        return out

    def _segments(self, text: str) -> List[str]:
        paragraphs = [p for p in re.split(r"\n\s*\n", text) if p.strip()]
        segments: List[str] = []
        current: List[str] = []
        count = 0
        for p in paragraphs:
            n = len(p.split())
            if current and count + n > self.max_tokens:
                segments.append("\n\n".join(current))
                current, count = [], 0
            current.append(p)
            count += n
        if current:
            segments.append("\n\n".join(current))
        return segments


# ---------------------------------------------------------------------------
# LLM contradiction judge
# ---------------------------------------------------------------------------

_FENCE_RE = re.compile(r"```[a-zA-Z]*\n?|```")

REPROMPT_INSTRUCTION = "Return only the structured object."


def _iter_json_objects(text: str):
    cleaned = _FENCE_RE.sub("", text)
    start = cleaned.find("{")
    while start != -1:
        depth = 0
        for i in range(start, len(cleaned)):
            if cleaned[i] == "{":
                depth += 1
            elif cleaned[i] == "}":
                depth -= 1
                if depth == 0:
                    try:
                        obj = json.loads(cleaned[start : i + 1])
                    except json.JSONDecodeError:
                        break
                    if isinstance(obj, dict):
                        yield obj
                    break
        start = cleaned.find("{", start + 1)


def _extract_json_object(text: str, required_key: Optional[str] = None) -> Optional[dict]:
    """First balanced JSON object in the text; with `required_key`, the first
    one carrying that key, so stray example objects cannot mask the verdict."""
    first = None
    for obj in _iter_json_objects(text):
        if first is None:
            first = obj
        if required_key is None or required_key in obj:
            return obj
    return first if required_key is None else None


def parse_judge_response(text: str) -> Optional[JudgeVerdict]:
    """Parse a judge reply, tolerating prose and code fences around the JSON."""
    obj = _extract_json_object(text, required_key="contradiction")
    if obj is None:
        return None
    raw_label = obj["contradiction"]
    if isinstance(raw_label, bool):
        label = int(raw_label)
    elif raw_label in (0, 1):
        label = int(raw_label)
    elif isinstance(raw_label, str) and raw_label.lower() in ("true", "false"):
        label = 1 if raw_label.lower() == "true" else 0
    else:
        return None
    reasoning = str(obj.get("reasoning") or "").strip() or "(no reasoning given)"
    confidence = obj.get("confidence", 0.5)
    try:
        confidence = float(confidence)
    except (TypeError, ValueError):
        confidence = 0.5
    confidence = min(1.0, max(0.0, confidence))
    return JudgeVerdict(label, reasoning, confidence)


class ContradictionJudge:
    """Prompts a chat backend to decide whether two statements contradict."""

    def __init__(self, chat, template: str):
        self.chat = chat
        self.template = template
        self.calls = 0

    def judge(self, s1: str, s2: str) -> JudgeVerdict:
        if not s1.strip() or not s2.strip():
            raise ValueError("judge inputs must be non-empty")
        self.calls += 1
        prompt = self.template.format(sentence1=s1, sentence2=s2)
        raw = self.chat.complete(ChatRequest(user=prompt, temperature=0.0))
        verdict = parse_judge_response(raw)
        if verdict is not None:
            return verdict
        retry = self.chat.complete(
            ChatRequest(user=prompt + "\n\n" + REPROMPT_INSTRUCTION, temperature=0.0)
        )
        verdict = parse_judge_response(retry)
        if verdict is not None:
            return verdict
        raise JudgeParseError("judge response unparseable after reprompt", raw=retry)
