"""Contradiction injection: target selection, typed contradiction generation,
self blending / pairwise embedding, relative-perplexity gates, and corpus
scheduling."""

import difflib
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .corpus import (
    ContradictionRecord,
    ContradictionType,
    Document,
    Mode,
    contains_normalized,
    normalize_text,
)
from .generation import DEFAULT_MAX_ATTEMPTS, DEFAULT_PPL_CAP, perplexity, split_trailers
from .prompts import PromptLibrary
from .providers import ChatRequest

HEDGE_WORDS = {
    "however",
    "while",
    "although",
    "but",
    "may",
    "might",
    "could",
    "sometimes",
    "certain",
    "extended",
    "flexibility",
}

_TYPE_ALIASES = {
    "temporal": ContradictionType.TEMPORAL,
    "numerical": ContradictionType.NUMERICAL,
    "authority": ContradictionType.AUTHORITY,
    "process": ContradictionType.PROCESS,
    "policy reversal": ContradictionType.POLICY_REVERSAL,
    "policy_reversal": ContradictionType.POLICY_REVERSAL,
    "policyreversal": ContradictionType.POLICY_REVERSAL,
    "specificity": ContradictionType.SPECIFICITY,
}


class InjectionError(Exception):
    pass


class TargetNotInDocument(InjectionError):
    pass


class HedgeViolation(InjectionError):
    pass


class BlendLostTarget(InjectionError):
    pass


class BlendLostContradiction(InjectionError):
    pass


class TargetLeak(InjectionError):
    pass


class InjectionExhausted(InjectionError):
    pass


@dataclass(frozen=True)
class DeltaGate:
    delta_self_max: float = 0.05
    delta_pair_max: float = 0.075
    ppl_cap: float = DEFAULT_PPL_CAP

    def __post_init__(self):
        if not 0 < self.delta_self_max <= self.delta_pair_max:
            raise ValueError("need 0 < delta_self_max <= delta_pair_max")


POLICY_SELF = "self_each_doc"
POLICY_INTERLEAVE = "interleave_pairs"
POLICY_NONE = "none"
_POLICIES = (POLICY_SELF, POLICY_INTERLEAVE, POLICY_NONE)


@dataclass(frozen=True)
class InjectionPolicy:
    """Per-domain injection rule."""

    rules: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for domain, rule in self.rules.items():
            if rule not in _POLICIES:
                raise ValueError(f"unknown policy {rule!r} for domain {domain!r}")

    def rule_for(self, domain: str) -> str:
        if domain not in self.rules:
            raise KeyError(f"no injection rule for domain {domain!r}")
        return self.rules[domain]


@dataclass(frozen=True)
class InjectionPlan:
    mode: Mode
    source_doc: str
    host_doc: str


@dataclass(frozen=True)
class GateResult:
    passed: bool
    reason: Optional[str] = None  # delta_self | delta_pair | ppl_cap


# ---------------------------------------------------------------------------
# Pure arithmetic
# ---------------------------------------------------------------------------


def delta_rel(ppl_base: float, ppl_contr: float) -> float:
    """Relative perplexity change caused by the injection."""
    if ppl_base <= 0:
        raise ValueError("base perplexity must be positive")
    return (ppl_contr - ppl_base) / ppl_base


def validate_injection(
    ppl_base: float, ppl_contr: float, mode: Mode, gate: DeltaGate
) -> GateResult:
    """Pass iff the mode's relative-change bound and the absolute cap hold."""
    if ppl_base <= 0 or ppl_contr <= 0:
        raise ValueError("perplexities must be positive")
    delta = delta_rel(ppl_base, ppl_contr)
    if mode == Mode.SELF:
        if delta > gate.delta_self_max:
            return GateResult(False, "delta_self")
    else:
        if delta > gate.delta_pair_max:
            return GateResult(False, "delta_pair")
    if ppl_contr > gate.ppl_cap:
        return GateResult(False, "ppl_cap")
    return GateResult(True)


# ---------------------------------------------------------------------------
# LLM-backed steps
# ---------------------------------------------------------------------------


def select_target(chat, prompts: PromptLibrary, doc: Document) -> str:
    """Ask for one sentence of the document; verify containment, reprompt once."""
    prompt = prompts.render("select_target", document_text=doc.body)
    for attempt in range(2):
        reply = chat.complete(ChatRequest(user=prompt)).strip().strip('"')
        if reply and contains_normalized(doc.body, reply):
            return reply
        prompt = (
            prompts.render("select_target", document_text=doc.body)
            + "\n\nYour previous selection was not a verbatim sentence from the "
            "document. Copy one sentence exactly as written."
        )
    raise TargetNotInDocument(f"selected sentence not found in document {doc.id}")


_hedge_re = re.compile(
    r"\b(" + "|".join(sorted(HEDGE_WORDS)) + r")\b", re.IGNORECASE
)


def find_hedge_words(text: str) -> List[str]:
    return sorted({m.group(1).lower() for m in _hedge_re.finditer(text)})


_TYPE_LINE_RE = re.compile(r"^\s*CONTRADICTION TYPE\s*:\s*(.+?)\s*$", re.IGNORECASE)


def _parse_contradiction_reply(reply: str) -> Tuple[str, Optional[ContradictionType]]:
    ctype: Optional[ContradictionType] = None
    statement_lines: List[str] = []
    for line in reply.splitlines():
        m = _TYPE_LINE_RE.match(line)
        if m and ctype is None:
            ctype = _TYPE_ALIASES.get(m.group(1).strip().lower())
            continue
        statement_lines.append(line)
    statement = "\n".join(statement_lines).strip()
    return statement, ctype


def generate_contradiction(
    chat,
    prompts: PromptLibrary,
    target: str,
    doc: Document,
    few_shot_examples: str,
) -> Tuple[str, Optional[ContradictionType]]:
    """Generate a 1-2 sentence typed contradiction of the target statement.

    Hedge-word violations trigger one regeneration, then fail. A missing
    type declaration yields ctype None (recorded, not fatal).
    """
    if not contains_normalized(doc.body, target):
        raise TargetNotInDocument("target statement is not in the source document")
    prompt = prompts.render(
        "generate_contradiction",
        few_shot_examples=few_shot_examples,
        target_statement=target,
        document_text=doc.body,
    )
    for attempt in range(2):
        reply = chat.complete(ChatRequest(user=prompt))
        statement, ctype = _parse_contradiction_reply(reply)
        hedges = find_hedge_words(statement)
        if statement and not hedges:
            return statement, ctype
        prompt = prompts.render(
            "generate_contradiction",
            few_shot_examples=few_shot_examples,
            target_statement=target,
            document_text=doc.body,
        ) + (
            f"\n\nYour previous reply used forbidden hedge words: {', '.join(hedges)}. "
            "Rewrite the contradiction without them."
            if hedges
            else "\n\nYour previous reply was empty. Write the contradiction statement."
        )
    raise HedgeViolation(f"contradiction kept hedge words after retry: {hedges}")


def _fraction_contained(haystack: str, needle: str) -> float:
    """Longest common substring between normalized texts, as a fraction of
    the needle's length."""
    a = normalize_text(haystack).lower()
    b = normalize_text(needle).lower()
    if not b:
        return 0.0
    match = difflib.SequenceMatcher(None, a, b, autojunk=False).find_longest_match(
        0, len(a), 0, len(b)
    )
    return match.size / len(b)


CONTAINMENT_FRACTION = 0.6


def _rebuild(doc: Document, raw_reply: str, ppl_final: Optional[float] = None) -> Document:
    body, people, docmeta = split_trailers(raw_reply)
    return Document(
        id=doc.id,
        metadata=doc.metadata,
        domain=doc.domain,
        subdomain=doc.subdomain,
        body=body,
        ppl_base=doc.ppl_base,
        ppl_final=ppl_final,
        people_meta=people if people is not None else doc.people_meta,
        doc_meta=docmeta if docmeta is not None else doc.doc_meta,
        extras=dict(doc.extras),
    )


def blend_self(
    chat, prompts: PromptLibrary, doc: Document, target: str, contradiction: str
) -> Document:
    """Blend the contradiction into the document; both statements must survive."""
    prompt = prompts.render(
        "blend",
        base_content=doc.body,
        target_statement=target,
        contradiction_paragraph=contradiction,
    )
    reply = chat.complete(ChatRequest(user=prompt))
    blended = _rebuild(doc, reply)
    if not contains_normalized(blended.body, target):
        raise BlendLostTarget(f"blend dropped the target statement in {doc.id}")
    if _fraction_contained(blended.body, contradiction) < CONTAINMENT_FRACTION:
        raise BlendLostContradiction(f"blend dropped the contradiction in {doc.id}")
    return blended


def embed_pairwise(
    chat,
    prompts: PromptLibrary,
    host: Document,
    target: str,
    contradiction: str,
    profile,
) -> Document:
    """Regenerate the host document around the contradiction, omitting the target."""
    prompt = prompts.render(
        "pairwise_embed",
        company=profile.name,
        domain=host.domain,
        topic=host.metadata.topic,
        phrase=host.subdomain,
        doc_type=host.metadata.doc_type,
        date=host.metadata.date,
        department=host.metadata.department,
        locations=", ".join(profile.locations),
        contradiction_paragraph=contradiction,
        target_statement=target,
    )
    reply = chat.complete(ChatRequest(user=prompt))
    rebuilt = _rebuild(host, reply)
    if contains_normalized(rebuilt.body, target):
        raise TargetLeak(f"target statement leaked into host document {host.id}")
    if _fraction_contained(rebuilt.body, contradiction) < CONTAINMENT_FRACTION:
        raise BlendLostContradiction(f"contradiction absent from host {host.id}")
    return rebuilt


# ---------------------------------------------------------------------------
# Corpus scheduling and plan execution
# ---------------------------------------------------------------------------


def schedule_corpus(
    docs_by_domain: Dict[str, List[Document]], policy: InjectionPolicy
) -> List[InjectionPlan]:
    """Turn per-domain policies into concrete injection plans.

    interleave_pairs pairs documents in order, (d1,d2), (d3,d4), ...; the
    second document of each pair hosts the contradiction and an odd leftover
    is untouched.
    """
    plans: List[InjectionPlan] = []
    for domain, docs in docs_by_domain.items():
        rule = policy.rule_for(domain)
        if rule == POLICY_NONE:
            continue
        if rule == POLICY_SELF:
            for doc in docs:
                plans.append(InjectionPlan(Mode.SELF, doc.id, doc.id))
        else:
            for i in range(0, len(docs) - 1, 2):
                plans.append(
                    InjectionPlan(Mode.PAIRWISE, docs[i].id, docs[i + 1].id)
                )
    return plans


def execute_plan(
    plan: InjectionPlan,
    docs: Dict[str, Document],
    chat,
    logprob_provider,
    prompts: PromptLibrary,
    profile,
    few_shot_examples: str,
    gate: DeltaGate,
    record_id: str,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Tuple[Document, ContradictionRecord]:
    """Run one injection plan end to end, regenerating from the blend step on
    gate failure. Returns the updated host document and its record."""
    source = docs[plan.source_doc]
    host = docs[plan.host_doc]
    if source.ppl_base is None or host.ppl_base is None:
        raise InjectionError("documents must pass the fluency gate before injection")
    target = select_target(chat, prompts, source)
    contradiction, ctype = generate_contradiction(
        chat, prompts, target, source, few_shot_examples
    )
    failures: List[str] = []
    for _ in range(max_attempts):
        if plan.mode == Mode.SELF:
            updated = blend_self(chat, prompts, host, target, contradiction)
        else:
            updated = embed_pairwise(chat, prompts, host, target, contradiction, profile)
        ppl_contr = perplexity(logprob_provider.token_logprobs(updated.body))
        result = validate_injection(host.ppl_base, ppl_contr, plan.mode, gate)
        if result.passed:
            delta = delta_rel(host.ppl_base, ppl_contr)
            final = _rebuild(updated, updated.body, ppl_final=ppl_contr)
            record = ContradictionRecord(
                id=record_id,
                mode=plan.mode,
                ctype=ctype,
                target_statement=target,
                contradiction_statement=contradiction,
                source_doc=plan.source_doc,
                host_doc=plan.host_doc,
                delta_rel=delta,
            )
            return final, record
        failures.append(result.reason or "unknown")
    raise InjectionExhausted(
        f"injection into {plan.host_doc} failed {max_attempts} gate checks: {failures}"
    )
