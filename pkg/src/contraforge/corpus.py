"""Core domain types, text normalization, pair keying, and the append-only record log.

Every pipeline stage reads and writes the same line-delimited record format,
so all shared value types live here.
"""

import dataclasses
import hashlib
import json
import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple


class Mode(str, Enum):
    SELF = "self"
    PAIRWISE = "pairwise"


class ContradictionType(str, Enum):
    TEMPORAL = "temporal"
    NUMERICAL = "numerical"
    AUTHORITY = "authority"
    PROCESS = "process"
    POLICY_REVERSAL = "policy_reversal"
    SPECIFICITY = "specificity"


# ---------------------------------------------------------------------------
# Text normalization and pair keying
# ---------------------------------------------------------------------------

_WS_RE = re.compile(r"\s+")
# Enumeration prefixes need trailing whitespace so "3.5 rating" is untouched.
_PREFIX_RE = re.compile(r"^(?:[-•*]+\s*|\d+[.)]\s+)")


def normalize_text(t: str) -> str:
    """Canonicalize a chunk of text for comparison and hashing.

    Collapses whitespace runs to single spaces, trims the ends, and strips
    leading bullet glyphs and enumeration prefixes ("- ", "• ", "1.", ...).
    Idempotent, and never longer than the input.
    """
    t = _WS_RE.sub(" ", t).strip()
    while True:
        stripped = _PREFIX_RE.sub("", t, count=1)
        if stripped == t:
            return t
        t = stripped.strip()


def contains_normalized(haystack: str, needle: str) -> bool:
    """Substring containment after normalizing both sides."""
    return normalize_text(needle) in normalize_text(haystack)


_KEY_SEP = "\x1f"


def pair_key(c1: str, c2: str, mode: Mode) -> str:
    """Stable content hash identifying a chunk pair.

    Self pairs are unordered (the normalized chunks are sorted before
    hashing); pairwise keys preserve document order because the doc1/doc2
    roles are asymmetric.
    """
    a, b = normalize_text(c1), normalize_text(c2)
    if mode == Mode.SELF and b < a:
        a, b = b, a
    digest = hashlib.sha256(
        (a + _KEY_SEP + b + _KEY_SEP + mode.value).encode("utf-8")
    )
    return digest.hexdigest()


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrganizationProfile:
    name: str
    description: str
    locations: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.description.strip():
            raise ValueError("organization description must be non-empty")


@dataclass(frozen=True)
class DomainTree:
    """Domain -> subdomain structure the corpus spans."""

    domains: List[Tuple[str, List[str]]]

    def __post_init__(self):
        if not self.domains:
            raise ValueError("domain tree needs at least one domain")
        names = [d for d, _ in self.domains]
        if len(names) != len(set(names)):
            raise ValueError("domain names must be unique")

    def domain_names(self) -> List[str]:
        return [d for d, _ in self.domains]

    def subdomains(self, domain: str) -> List[str]:
        for name, subs in self.domains:
            if name == domain:
                return list(subs)
        raise KeyError(f"unknown domain: {domain!r}")


_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


@dataclass(frozen=True)
class DocumentMetadata:
    title: str
    topic: str
    date: str  # ISO-8601 calendar date
    department: str
    location: str
    doc_type: str
    authority_level: str

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if not getattr(self, f.name).strip():
                raise ValueError(f"metadata field {f.name!r} must be non-empty")
        if not _ISO_DATE_RE.match(self.date):
            raise ValueError(f"metadata date {self.date!r} is not ISO-8601")


@dataclass(frozen=True)
class Document:
    id: str
    metadata: DocumentMetadata
    domain: str
    subdomain: str
    body: str
    ppl_base: Optional[float] = None
    ppl_final: Optional[float] = None
    people_meta: List[str] = field(default_factory=list)
    doc_meta: List[str] = field(default_factory=list)
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.body.strip():
            raise ValueError("document body must be non-empty")
        if self.ppl_base is not None and self.ppl_base <= 1.0:
            raise ValueError("perplexity of non-degenerate text must exceed 1")


@dataclass(frozen=True)
class ContradictionRecord:
    id: str
    mode: Mode
    ctype: Optional[ContradictionType]
    target_statement: str
    contradiction_statement: str
    source_doc: str
    host_doc: str
    delta_rel: Optional[float] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode == Mode.SELF and self.host_doc != self.source_doc:
            raise ValueError("self contradiction must host in its source document")
        if self.mode == Mode.PAIRWISE and self.host_doc == self.source_doc:
            raise ValueError("pairwise contradiction needs a distinct host document")


@dataclass(frozen=True)
class CandidatePair:
    key: str
    mode: Mode
    doc1: str
    doc2: str
    doc1_chunk: str
    doc2_chunk: str
    similarity: float
    nli_label: Optional[str] = None  # contradiction | neutral | entailment
    p_nli: Optional[float] = None
    forwarded: bool = False
    llm_label: Optional[int] = None
    p_llm: Optional[float] = None
    llm_reasoning: Optional[str] = None
    s_hybrid: Optional[float] = None
    hybrid_label: Optional[int] = None
    source: Set[str] = field(default_factory=set)
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.s_hybrid is not None:
            for name in ("nli_label", "p_nli", "llm_label", "p_llm"):
                if getattr(self, name) is None:
                    raise ValueError(f"s_hybrid requires {name} to be present")
        expected = pair_key(self.doc1_chunk, self.doc2_chunk, self.mode)
        if self.key != expected:
            raise ValueError("pair key does not match chunk contents")


LIKERT_DIMENSIONS = ("fluency", "specificity", "coherence", "legitimacy")


@dataclass(frozen=True)
class AnnotationRecord:
    annotator: str
    subject: str  # pair key or doc id
    kind: str  # pair_label | doc_review | adjudication
    timestamp: str  # UTC ISO-8601 instant
    label: Optional[int] = None
    likert: Optional[Dict[str, int]] = None
    detected_contradiction: Optional[bool] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind in ("pair_label", "adjudication") and self.label not in (0, 1):
            raise ValueError(f"{self.kind} requires a binary label")
        if self.kind == "doc_review":
            if self.likert is None:
                raise ValueError("doc_review requires likert ratings")
            for dim, value in self.likert.items():
                if dim not in LIKERT_DIMENSIONS:
                    raise ValueError(f"unknown likert dimension {dim!r}")
                if not 1 <= value <= 5:
                    raise ValueError(f"likert rating {value} outside 1..5")


@dataclass(frozen=True)
class GoldItem:
    key: str
    mode: Mode
    doc1_chunk: str
    doc2_chunk: str
    context1: str = ""
    context2: str = ""
    sources: Set[str] = field(default_factory=set)
    human_label: Optional[int] = None
    adjudicated: bool = False
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.human_label is None and self.adjudicated:
            raise ValueError("an item without a human label cannot be adjudicated")


# ---------------------------------------------------------------------------
# Record log persistence
# ---------------------------------------------------------------------------


class StoreError(Exception):
    """Raised when the record log cannot be read or a line is malformed."""


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return record_to_dict(value)
    if isinstance(value, set):
        return sorted(value)
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _to_jsonable(v) for k, v in value.items()}
    return value


def record_to_dict(record: Any) -> Dict[str, Any]:
    """Serialize a record dataclass to a plain dict, folding extras back in."""
    out: Dict[str, Any] = {}
    for f in dataclasses.fields(record):
        if f.name == "extras":
            continue
        out[f.name] = _to_jsonable(getattr(record, f.name))
    extras = getattr(record, "extras", None)
    if extras:
        for k, v in extras.items():
            out.setdefault(k, _to_jsonable(v))
    return out


_KIND_TO_TYPE = {
    "document": Document,
    "contradiction": ContradictionRecord,
    "candidate_pair": CandidatePair,
    "annotation": AnnotationRecord,
    "gold_item": GoldItem,
}
_TYPE_TO_KIND = {v: k for k, v in _KIND_TO_TYPE.items()}

_ENUM_FIELDS = {"mode": Mode, "ctype": ContradictionType}
_SET_FIELDS = {"source", "sources"}


def record_from_dict(kind: str, data: Dict[str, Any]) -> Any:
    """Rebuild a record from its dict form; unknown fields land in extras."""
    try:
        cls = _KIND_TO_TYPE[kind]
    except KeyError:
        raise StoreError(f"unknown record kind {kind!r}") from None
    known = {f.name for f in dataclasses.fields(cls)}
    kwargs: Dict[str, Any] = {}
    extras: Dict[str, Any] = {}
    for name, value in data.items():
        if name not in known or name == "extras":
            extras[name] = value
            continue
        if name in _ENUM_FIELDS and value is not None:
            value = _ENUM_FIELDS[name](value)
        elif name in _SET_FIELDS:
            value = set(value)
        elif name == "metadata" and isinstance(value, dict):
            value = DocumentMetadata(**value)
        kwargs[name] = value
    if extras:
        kwargs["extras"] = extras
    return cls(**kwargs)


def record_id(record: Any) -> str:
    for attr in ("id", "key"):
        value = getattr(record, attr, None)
        if value is not None:
            return value
    return getattr(record, "subject", "")


class RecordStore:
    """Append-only line-delimited JSON log, one record per line.

    A `record` discriminator routes each line to its record type. Appends
    are serialized through a lock (single writer); reads are plain snapshots.
    """

    def __init__(self, path):
        self.path = str(path)
        self._lock = threading.Lock()

    def append(self, record: Any) -> str:
        kind = _TYPE_TO_KIND[type(record)]
        payload = {"record": kind}
        payload.update(record_to_dict(record))
        line = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        with self._lock:
            try:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
            except OSError as exc:
                raise StoreError(f"cannot append to {self.path}: {exc}") from exc
        return record_id(record)

    def append_all(self, records: Sequence[Any]) -> List[str]:
        return [self.append(r) for r in records]

    def load(self) -> List[Any]:
        records: List[Any] = []
        try:
            with open(self.path, encoding="utf-8") as fh:
                raw = fh.read()
        except FileNotFoundError:
            return []
        except OSError as exc:
            raise StoreError(f"cannot read {self.path}: {exc}") from exc
        if not raw:
            return []
        if not raw.endswith("\n"):
            n = raw.count("\n") + 1
            raise StoreError(f"{self.path}: truncated final line {n}")
        for lineno, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StoreError(f"{self.path}: malformed line {lineno}: {exc}") from exc
            kind = data.pop("record", None)
            if kind is None:
                raise StoreError(f"{self.path}: line {lineno} missing record kind")
            try:
                records.append(record_from_dict(kind, data))
            except (TypeError, ValueError, StoreError) as exc:
                raise StoreError(f"{self.path}: malformed line {lineno}: {exc}") from exc
        return records

    def load_kind(self, cls) -> List[Any]:
        return [r for r in self.load() if isinstance(r, cls)]
