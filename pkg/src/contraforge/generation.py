"""Metadata-driven base document generation with perplexity fluency gating."""

import datetime
import math
import random
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .corpus import Document, DocumentMetadata, DomainTree, OrganizationProfile, normalize_text
from .prompts import PromptLibrary
from .providers import ChatRequest

DEFAULT_PPL_CAP = 22.0
DEFAULT_MAX_ATTEMPTS = 5
DEFAULT_PARAGRAPH_MIN = 4
DEFAULT_DATE_WINDOW = ("2024-01-01", "2024-12-31")


class GenerationError(Exception):
    pass


class GateExhausted(GenerationError):
    """Fluency gate rejected every attempt; carries all reports."""

    def __init__(self, reports: List["FluencyReport"]):
        super().__init__(f"fluency gate rejected all {len(reports)} attempts")
        self.reports = reports


@dataclass(frozen=True)
class FluencyReport:
    ppl: float
    token_count: int
    accepted: bool
    attempts: int = 1


# ---------------------------------------------------------------------------
# Perplexity
# ---------------------------------------------------------------------------


def perplexity(logprobs: List[float]) -> float:
    """exp of the mean negative natural-log token probability."""
    if not logprobs:
        raise ValueError("perplexity of an empty token sequence is undefined")
    if any(lp > 0 for lp in logprobs):
        raise ValueError("log probabilities must be <= 0")
    return math.exp(-sum(logprobs) / len(logprobs))


def fluency_gate(
    doc: Document, logprob_provider, ppl_cap: float = DEFAULT_PPL_CAP
) -> FluencyReport:
    """Score a document's fluency; accepted iff ppl <= ppl_cap (inclusive)."""
    logprobs = logprob_provider.token_logprobs(doc.body)
    ppl = perplexity(logprobs)
    return FluencyReport(ppl=ppl, token_count=len(logprobs), accepted=ppl <= ppl_cap)


# ---------------------------------------------------------------------------
# Metadata generation
# ---------------------------------------------------------------------------

_METADATA_KEYS = (
    "title",
    "topic",
    "date",
    "department",
    "location",
    "doc_type",
    "authority_level",
)

_META_LINE_RE = re.compile(r"^\s*([A-Z_]+)\s*:\s*(.+?)\s*$")


def _parse_metadata_block(text: str) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    for line in text.splitlines():
        m = _META_LINE_RE.match(line)
        if m:
            key = m.group(1).lower()
            if key in _METADATA_KEYS:
                fields[key] = m.group(2)
    return fields


def _date_in_window(value: str, window: Tuple[str, str]) -> bool:
    try:
        date = datetime.date.fromisoformat(value)
    except ValueError:
        return False
    start = datetime.date.fromisoformat(window[0])
    end = datetime.date.fromisoformat(window[1])
    return start <= date <= end


def draw_date(window: Tuple[str, str], rng: random.Random) -> str:
    start = datetime.date.fromisoformat(window[0])
    end = datetime.date.fromisoformat(window[1])
    span = (end - start).days
    return (start + datetime.timedelta(days=rng.randint(0, span))).isoformat()


def generate_metadata(
    chat,
    prompts: PromptLibrary,
    profile: OrganizationProfile,
    tree: DomainTree,
    domain: str,
    subdomain: str,
    rng: random.Random,
    date_window: Tuple[str, str] = DEFAULT_DATE_WINDOW,
) -> DocumentMetadata:
    """One chat call assembling all seven metadata fields; one reprompt on gaps."""
    if subdomain not in tree.subdomains(domain):
        raise ValueError(f"subdomain {subdomain!r} not under domain {domain!r}")
    prompt = prompts.render(
        "metadata",
        company=profile.name,
        description=profile.description,
        locations=", ".join(profile.locations),
        domain=domain,
        phrase=subdomain,
        date=draw_date(date_window, rng),
    )
    fields = _parse_metadata_block(chat.complete(ChatRequest(user=prompt)))
    if "date" in fields and not _date_in_window(fields["date"], date_window):
        del fields["date"]
    missing = [k for k in _METADATA_KEYS if not fields.get(k, "").strip()]
    if missing:
        retry_prompt = (
            prompt
            + "\n\nYour previous reply was missing or had invalid fields: "
            + ", ".join(k.upper() for k in missing)
            + ". Respond again with all seven lines."
        )
        fields.update(_parse_metadata_block(chat.complete(ChatRequest(user=retry_prompt))))
        if "date" in fields and not _date_in_window(fields["date"], date_window):
            del fields["date"]
        missing = [k for k in _METADATA_KEYS if not fields.get(k, "").strip()]
        if missing:
            raise GenerationError(f"metadata still missing fields after reprompt: {missing}")
    return DocumentMetadata(**{k: fields[k] for k in _METADATA_KEYS})


# ---------------------------------------------------------------------------
# Base document generation
# ---------------------------------------------------------------------------

PEOPLE_HEADER = "NEW PEOPLE META DATA"
DOCMETA_HEADER = "NEW DOCUMENT META DATA"


def _is_header(line: str, header: str) -> bool:
    norm = normalize_text(line).rstrip(":").strip()
    return norm.upper() == header


def split_trailers(text: str) -> Tuple[str, Optional[List[str]], Optional[List[str]]]:
    """Split a generated document into body and the two metadata trailers.

    Returns (body, people_meta, doc_meta); a trailer is None when its header
    is absent from the text.
    """
    lines = text.splitlines()
    sections: Dict[str, List[str]] = {}
    body_lines: List[str] = []
    current: Optional[str] = None
    for line in lines:
        if _is_header(line, PEOPLE_HEADER):
            current = PEOPLE_HEADER
            sections[current] = []
            continue
        if _is_header(line, DOCMETA_HEADER):
            current = DOCMETA_HEADER
            sections[current] = []
            continue
        if current is None:
            body_lines.append(line)
        else:
            entry = normalize_text(line)
            if entry:
                sections[current].append(entry)
    body = "\n".join(body_lines).strip()
    return (
        body,
        sections.get(PEOPLE_HEADER),
        sections.get(DOCMETA_HEADER),
    )


def paragraphs(body: str) -> List[str]:
    return [p for p in re.split(r"\n\s*\n", body) if p.strip()]


def generate_base_document(
    chat,
    prompts: PromptLibrary,
    meta: DocumentMetadata,
    profile: OrganizationProfile,
    domain: str,
    subdomain: str,
    doc_id: str,
    paragraph_min: int = DEFAULT_PARAGRAPH_MIN,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Document:
    """Render the base-document prompt and parse body plus metadata trailers.

    Regenerates when the body has fewer than `paragraph_min` paragraphs;
    missing trailers trigger one reprompt, then empty lists with a warning
    flag on the document.
    """
    prompt = prompts.render(
        "base_document",
        company=profile.name,
        domain=domain,
        topic=meta.topic,
        phrase=subdomain,
        doc_type=meta.doc_type,
        date=meta.date,
        department=meta.department,
        locations=", ".join(profile.locations),
    )
    last_failure = "no attempts made"
    for _ in range(max_attempts):
        raw = chat.complete(ChatRequest(user=prompt))
        body, people, docmeta = split_trailers(raw)
        if not body or len(paragraphs(body)) < paragraph_min:
            last_failure = f"body shorter than {paragraph_min} paragraphs"
            continue
        extras = {}
        if people is None or docmeta is None:
            retry = chat.complete(
                ChatRequest(
                    user=prompt
                    + "\n\nYour previous reply omitted the metadata trailer sections. "
                    "Repeat the document and include both trailer sections."
                )
            )
            body2, people2, docmeta2 = split_trailers(retry)
            if body2 and len(paragraphs(body2)) >= paragraph_min:
                body, people, docmeta = body2, people2, docmeta2
            if people is None or docmeta is None:
                extras["trailer_warning"] = True
        return Document(
            id=doc_id,
            metadata=meta,
            domain=domain,
            subdomain=subdomain,
            body=body,
            people_meta=people or [],
            doc_meta=docmeta or [],
            extras=extras,
        )
    raise GenerationError(f"base document generation failed: {last_failure}")


def generate_document(
    chat,
    logprob_provider,
    prompts: PromptLibrary,
    meta: DocumentMetadata,
    profile: OrganizationProfile,
    domain: str,
    subdomain: str,
    doc_id: str,
    ppl_cap: float = DEFAULT_PPL_CAP,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    paragraph_min: int = DEFAULT_PARAGRAPH_MIN,
) -> Tuple[Document, FluencyReport]:
    """Generation driver: regenerate until the fluency gate accepts."""
    reports: List[FluencyReport] = []
    for attempt in range(1, max_attempts + 1):
        doc = generate_base_document(
            chat, prompts, meta, profile, domain, subdomain, doc_id,
            paragraph_min=paragraph_min, max_attempts=max_attempts,
        )
        report = fluency_gate(doc, logprob_provider, ppl_cap)
        report = FluencyReport(report.ppl, report.token_count, report.accepted, attempt)
        reports.append(report)
        if report.accepted:
            accepted_doc = Document(
                id=doc.id,
                metadata=doc.metadata,
                domain=doc.domain,
                subdomain=doc.subdomain,
                body=doc.body,
                ppl_base=report.ppl,
                people_meta=doc.people_meta,
                doc_meta=doc.doc_meta,
                extras=doc.extras,
            )
            return accepted_doc, report
    raise GateExhausted(reports)
