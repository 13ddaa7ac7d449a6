"""Contradiction mining: sentence segmentation, semantic top-k candidate
pairing, NLI staging with a forwarding rule, LLM judging, and
confidence-weighted hybrid scoring."""

import math
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .corpus import CandidatePair, Document, Mode, normalize_text, pair_key
from .providers import JudgeParseError


@dataclass(frozen=True)
class MiningConfig:
    k: int = 5
    theta_s: float = 0.55
    theta_conf: float = 0.7
    tau: float = 0.5
    min_words: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        for name in ("theta_s", "theta_conf", "tau"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.min_words < 1:
            raise ValueError("min_words must be >= 1")


PAIRING_SAME_DOMAIN = "same_domain"
PAIRING_ALL = "all"


# ---------------------------------------------------------------------------
# Segmentation and filtering
# ---------------------------------------------------------------------------

_ABBREVIATIONS = (
    "Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "Inc.", "Ltd.", "Corp.", "Co.",
    "U.S.", "U.K.", "E.U.", "No.", "Sec.", "Art.", "Jr.", "Sr.", "St.",
    "vs.", "etc.", "e.g.", "i.e.", "approx.",
)

_SENTENCE_END_RE = re.compile(r"[.!?]+[\"')\]]*\s+(?=[A-Z\"'(\d])")


@dataclass(frozen=True)
class Chunk:
    text: str
    start: int  # character offset in the source body
    end: int


def segment_sentences(body: str) -> List[Chunk]:
    """Split text into sentence chunks, preserving character offsets.

    Splits at sentence-final punctuation followed by whitespace and an
    uppercase letter, quote, or digit, guarded against common abbreviations.
    """
    chunks: List[Chunk] = []

    def emit(piece: str, base: int, start: int, cut: int) -> None:
        seg = piece[start:cut]
        text = seg.strip()
        if not text:
            return
        s = base + start + (len(seg) - len(seg.lstrip()))
        chunks.append(Chunk(text, s, s + len(text)))

    base = 0
    for part in re.split(r"(\n\s*\n)", body):
        if part and not re.fullmatch(r"\n\s*\n", part):
            start = 0
            for m in _SENTENCE_END_RE.finditer(part):
                cut = m.end()
                if _ends_with_abbreviation(part[start:cut].rstrip()):
                    continue
                emit(part, base, start, cut)
                start = cut
            emit(part, base, start, len(part))
        base += len(part)
    return chunks


def _ends_with_abbreviation(text: str) -> bool:
    stripped = text.rstrip("\"')]")
    return any(stripped.endswith(abbr) for abbr in _ABBREVIATIONS)


_NONWORD_ONLY_RE = re.compile(r"^[\d\s\W]*$")


def filter_chunks(chunks: Sequence[str], min_words: int = 10) -> List[str]:
    """Drop short, purely numeric/date/enumeration, and bullet-point chunks."""
    kept: List[str] = []
    for raw in chunks:
        if raw.lstrip()[:1] in ("-", "•", "*"):
            continue
        if len(raw.split()) < min_words:
            continue
        norm = normalize_text(raw)
        if not norm or _NONWORD_ONLY_RE.match(norm):
            continue
        kept.append(raw)
    return kept


# ---------------------------------------------------------------------------
# Candidate pairing
# ---------------------------------------------------------------------------


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return dot / (nu * nv)


def candidate_pairs(
    src: Sequence[str],
    dst: Sequence[str],
    cfg: MiningConfig,
    embedder,
    mode: Mode,
    doc1: str,
    doc2: str,
) -> List[CandidatePair]:
    """Top-k semantic pairing: embed every chunk once, retain for each source
    chunk its k most similar destination chunks at or above theta_s,
    excluding identical self pairs and deduplicating by pair key."""
    if not src or not dst:
        return []
    texts = list(src) + list(dst)
    vectors = embedder.embed(texts)
    src_vecs = vectors[: len(src)]
    dst_vecs = vectors[len(src):]
    seen: Dict[str, CandidatePair] = {}
    ordered: List[CandidatePair] = []
    for i, (s_text, s_vec) in enumerate(zip(src, src_vecs)):
        scored: List[Tuple[float, int]] = []
        for j, (d_text, d_vec) in enumerate(zip(dst, dst_vecs)):
            if normalize_text(s_text) == normalize_text(d_text):
                continue
            sim = cosine(s_vec, d_vec)
            if sim >= cfg.theta_s:
                scored.append((sim, j))
        scored.sort(key=lambda t: (-t[0], t[1]))
        for sim, j in scored[: cfg.k]:
            key = pair_key(s_text, dst[j], mode)
            if key in seen:
                continue
            pair = CandidatePair(
                key=key,
                mode=mode,
                doc1=doc1,
                doc2=doc2,
                doc1_chunk=s_text,
                doc2_chunk=dst[j],
                similarity=sim,
            )
            seen[key] = pair
            ordered.append(pair)
    return ordered


# ---------------------------------------------------------------------------
# Staging and hybrid scoring
# ---------------------------------------------------------------------------


def nli_stage(pair: CandidatePair, cfg: MiningConfig, nli) -> CandidatePair:
    """Classify the pair and decide whether it is forwarded to the judge.

    Forwarded iff the NLI label is contradiction or the confidence is at or
    below theta_conf. Non-forwarded pairs are final negatives.
    """
    verdict = nli.classify(pair.doc1_chunk, pair.doc2_chunk)
    forwarded = verdict.label == "contradiction" or verdict.confidence <= cfg.theta_conf
    return CandidatePair(
        key=pair.key,
        mode=pair.mode,
        doc1=pair.doc1,
        doc2=pair.doc2,
        doc1_chunk=pair.doc1_chunk,
        doc2_chunk=pair.doc2_chunk,
        similarity=pair.similarity,
        nli_label=verdict.label,
        p_nli=verdict.confidence,
        forwarded=forwarded,
        hybrid_label=None if forwarded else 0,
        source=set(pair.source) | {"nli"},
        extras=dict(pair.extras),
    )


def hybrid_score(
    l_nli: int, p_nli: float, l_llm: int, p_llm: float, tau: float = 0.5
) -> Tuple[float, int]:
    """Confidence-weighted fusion of the two binary labels.

    Weights are the confidences normalized to sum to one (equal split when
    both are zero); the pair is contradictory iff the score strictly exceeds
    tau.
    """
    for name, value in (("l_nli", l_nli), ("l_llm", l_llm)):
        if value not in (0, 1):
            raise ValueError(f"{name} must be 0 or 1")
    for name, value in (("p_nli", p_nli), ("p_llm", p_llm)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    if l_nli == l_llm:
        # agreement: the weights sum to one, so the score is exactly the
        # shared label (avoids float drift from adding the two weights)
        s = float(l_nli)
        return s, int(s > tau)
    total = p_nli + p_llm
    if total == 0:
        w_nli = w_llm = 0.5
    else:
        w_nli = p_nli / total
        w_llm = p_llm / total
    s = w_nli * l_nli + w_llm * l_llm
    return s, int(s > tau)


def judge_stage(pair: CandidatePair, cfg: MiningConfig, judge) -> CandidatePair:
    """LLM judgment plus hybrid scoring for a forwarded pair.

    A parse failure leaves the pair unresolved (no llm fields, no hybrid)
    rather than defaulting a verdict.
    """
    if not pair.forwarded:
        return pair
    common = dict(
        key=pair.key,
        mode=pair.mode,
        doc1=pair.doc1,
        doc2=pair.doc2,
        doc1_chunk=pair.doc1_chunk,
        doc2_chunk=pair.doc2_chunk,
        similarity=pair.similarity,
        nli_label=pair.nli_label,
        p_nli=pair.p_nli,
        forwarded=True,
    )
    try:
        verdict = judge.judge(pair.doc1_chunk, pair.doc2_chunk)
    except JudgeParseError as exc:
        extras = dict(pair.extras)
        extras["unresolved"] = "judge_parse_error"
        return CandidatePair(
            **common, source=set(pair.source) | {"llm"}, extras=extras
        )
    l_nli = 1 if pair.nli_label == "contradiction" else 0
    s, label = hybrid_score(l_nli, pair.p_nli, verdict.contradiction, verdict.confidence, cfg.tau)
    return CandidatePair(
        **common,
        llm_label=verdict.contradiction,
        p_llm=verdict.confidence,
        llm_reasoning=verdict.reasoning,
        s_hybrid=s,
        hybrid_label=label,
        source=set(pair.source) | {"llm", "hybrid"},
        extras=dict(pair.extras),
    )


# ---------------------------------------------------------------------------
# Whole-agent driver
# ---------------------------------------------------------------------------


def document_chunks(doc: Document, cfg: MiningConfig) -> List[str]:
    return filter_chunks([c.text for c in segment_sentences(doc.body)], cfg.min_words)


def mine(
    corpus: Sequence[Document],
    mode: Mode,
    cfg: MiningConfig,
    embedder,
    nli,
    judge,
    pairing_policy: str = PAIRING_SAME_DOMAIN,
) -> List[CandidatePair]:
    """Run the full mining pipeline over a corpus.

    Self mode pairs chunks within each document; pairwise mode pairs chunks
    across ordered document pairs chosen by the pairing policy. Provider
    failures are recorded on the pair and never abort the run. Output is
    sorted by pair key so runs are reproducible.
    """
    candidates: List[CandidatePair] = []
    if mode == Mode.SELF:
        for doc in corpus:
            chunks = document_chunks(doc, cfg)
            candidates.extend(
                candidate_pairs(chunks, chunks, cfg, embedder, Mode.SELF, doc.id, doc.id)
            )
    else:
        for d1 in corpus:
            for d2 in corpus:
                if d1.id == d2.id:
                    continue
                if pairing_policy == PAIRING_SAME_DOMAIN and d1.domain != d2.domain:
                    continue
                c1 = document_chunks(d1, cfg)
                c2 = document_chunks(d2, cfg)
                candidates.extend(
                    candidate_pairs(c1, c2, cfg, embedder, Mode.PAIRWISE, d1.id, d2.id)
                )
    results: Dict[str, CandidatePair] = {}
    for pair in candidates:
        if pair.key in results:
            continue
        try:
            staged = nli_stage(pair, cfg, nli)
            staged = judge_stage(staged, cfg, judge)
        except Exception as exc:  # provider failure: record and move on
            extras = dict(pair.extras)
            extras["error"] = f"{type(exc).__name__}: {exc}"
            staged = CandidatePair(
                key=pair.key,
                mode=pair.mode,
                doc1=pair.doc1,
                doc2=pair.doc2,
                doc1_chunk=pair.doc1_chunk,
                doc2_chunk=pair.doc2_chunk,
                similarity=pair.similarity,
                source=set(pair.source),
                extras=extras,
            )
        results[staged.key] = staged
    return [results[k] for k in sorted(results)]
