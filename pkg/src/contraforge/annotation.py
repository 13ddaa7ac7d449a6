"""Human-in-the-loop annotation: gold candidate set construction, the label
queue, consolidation, adjudication routing, and Likert document reviews."""

import datetime
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .agreement import AgreementReport, agreement_report
from .corpus import (
    AnnotationRecord,
    CandidatePair,
    ContradictionRecord,
    Document,
    GoldItem,
    LIKERT_DIMENSIONS,
    Mode,
    RecordStore,
    normalize_text,
    pair_key,
)
from .mining import segment_sentences

DEFAULT_ADJUDICATION_THRESHOLD = 0.9


class AnnotationError(Exception):
    pass


class UnknownAnnotator(AnnotationError):
    pass


class UnknownItem(AnnotationError):
    pass


# ---------------------------------------------------------------------------
# Gold union
# ---------------------------------------------------------------------------


def context_window(body: str, chunk: str, radius: int = 2) -> str:
    """The chunk's sentence plus up to `radius` sentences on each side."""
    sentences = [c.text for c in segment_sentences(body)]
    needle = normalize_text(chunk)
    for i, sent in enumerate(sentences):
        if needle in normalize_text(sent) or normalize_text(sent) in needle:
            lo = max(0, i - radius)
            return " ".join(sentences[lo : i + radius + 1])
    return ""


def build_gold_union(
    detector_outputs: Sequence[Sequence[CandidatePair]],
    injected: Sequence[ContradictionRecord],
    docs: Optional[Sequence[Document]] = None,
) -> List[GoldItem]:
    """Union of all detector outputs plus every injected contradiction,
    deduplicated by pair key with sources accumulated; sorted by key."""
    doc_map = {d.id: d for d in docs} if docs else {}
    merged: Dict[str, GoldItem] = {}

    def add(key: str, mode: Mode, c1: str, c2: str, sources: set,
            ctx_docs: Tuple[Optional[str], Optional[str]]):
        if key in merged:
            old = merged[key]
            merged[key] = GoldItem(
                key=old.key,
                mode=old.mode,
                doc1_chunk=old.doc1_chunk,
                doc2_chunk=old.doc2_chunk,
                context1=old.context1,
                context2=old.context2,
                sources=set(old.sources) | sources,
                human_label=old.human_label,
                adjudicated=old.adjudicated,
                extras=dict(old.extras),
            )
            return
        ctx1 = ctx2 = ""
        d1, d2 = ctx_docs
        if d1 in doc_map:
            ctx1 = context_window(doc_map[d1].body, c1)
        if d2 in doc_map:
            ctx2 = context_window(doc_map[d2].body, c2)
        merged[key] = GoldItem(
            key=key, mode=mode, doc1_chunk=c1, doc2_chunk=c2,
            context1=ctx1, context2=ctx2, sources=set(sources),
        )

    for output in detector_outputs:
        for pair in output:
            sources = set(pair.source) or {"nli"}
            if pair.extras.get("unresolved"):
                sources.add("unresolved")
            add(pair.key, pair.mode, pair.doc1_chunk, pair.doc2_chunk,
                sources, (pair.doc1, pair.doc2))
    for rec in injected:
        key = pair_key(rec.target_statement, rec.contradiction_statement, rec.mode)
        add(key, rec.mode, rec.target_statement, rec.contradiction_statement,
            {"injected"}, (rec.source_doc, rec.host_doc))
    return [merged[k] for k in sorted(merged)]


# ---------------------------------------------------------------------------
# Annotation service state
# ---------------------------------------------------------------------------


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


class AnnotationService:
    """Label queue, consolidation, and adjudication over a gold item set.

    Original annotation records are immutable and append-only (both in
    memory and in the backing store); every consolidated view is derived on
    read. Resubmission by the same annotator is last-write-wins.
    """

    def __init__(
        self,
        items: Iterable[GoldItem],
        store: Optional[RecordStore] = None,
        annotators: Optional[Sequence[str]] = None,
        adjudication_threshold: float = DEFAULT_ADJUDICATION_THRESHOLD,
        clock=None,
    ):
        self.items: Dict[str, GoldItem] = {i.key: i for i in items}
        self.store = store
        self.annotators = set(annotators or [])
        self.adjudication_threshold = adjudication_threshold
        self.clock = clock or _utc_now
        self.records: List[AnnotationRecord] = []
        if store is not None:
            for rec in store.load_kind(AnnotationRecord):
                self.records.append(rec)

    def register(self, annotator: str) -> None:
        self.annotators.add(annotator)

    def _require_annotator(self, annotator: str) -> None:
        if annotator not in self.annotators:
            raise UnknownAnnotator(f"annotator {annotator!r} is not registered")

    def _append(self, record: AnnotationRecord) -> AnnotationRecord:
        self.records.append(record)
        if self.store is not None:
            self.store.append(record)
        return record

    # -- queue ------------------------------------------------------------

    def labeled_keys(self, annotator: str) -> set:
        return {
            r.subject
            for r in self.records
            if r.kind == "pair_label" and r.annotator == annotator
        }

    def next_item(self, annotator: str) -> Optional[GoldItem]:
        """Lowest-keyed item this annotator has not labeled yet."""
        self._require_annotator(annotator)
        done = self.labeled_keys(annotator)
        for key in sorted(self.items):
            if key not in done:
                return self.items[key]
        return None

    def submit_label(self, annotator: str, key: str, label: int) -> AnnotationRecord:
        self._require_annotator(annotator)
        if key not in self.items:
            raise UnknownItem(f"no gold item with key {key}")
        if label not in (0, 1):
            raise AnnotationError(f"label must be 0 or 1, got {label!r}")
        return self._append(
            AnnotationRecord(
                annotator=annotator, subject=key, kind="pair_label",
                timestamp=self.clock(), label=label,
            )
        )

    def submit_adjudication(self, sme: str, key: str, label: int) -> AnnotationRecord:
        if key not in self.items:
            raise UnknownItem(f"no gold item with key {key}")
        if label not in (0, 1):
            raise AnnotationError(f"label must be 0 or 1, got {label!r}")
        return self._append(
            AnnotationRecord(
                annotator=sme, subject=key, kind="adjudication",
                timestamp=self.clock(), label=label,
            )
        )

    # -- consolidation ----------------------------------------------------

    def item_labels(self, key: str) -> Dict[str, int]:
        """Last label per annotator for one item (resubmission overwrites)."""
        labels: Dict[str, int] = {}
        for rec in self.records:
            if rec.kind == "pair_label" and rec.subject == key:
                labels[rec.annotator] = rec.label
        return labels

    def _adjudicated_label(self, key: str) -> Optional[int]:
        label = None
        for rec in self.records:
            if rec.kind == "adjudication" and rec.subject == key:
                label = rec.label
        return label

    def item_agreement(self, key: str) -> Optional[float]:
        """Per-item agreement fraction: modal label count / label count."""
        labels = list(self.item_labels(key).values())
        if len(labels) < 2:
            return None
        top = max(labels.count(v) for v in set(labels))
        return top / len(labels)

    def consolidated(self, key: str) -> GoldItem:
        """The item with its derived human label.

        SME adjudication is terminal; otherwise unanimity sets the label and
        disagreement leaves it absent.
        """
        item = self.items[key]
        adj = self._adjudicated_label(key)
        if adj is not None:
            return self._with_label(item, adj, adjudicated=True)
        labels = set(self.item_labels(key).values())
        if len(labels) == 1:
            return self._with_label(item, labels.pop(), adjudicated=False)
        return item

    @staticmethod
    def _with_label(item: GoldItem, label: int, adjudicated: bool) -> GoldItem:
        return GoldItem(
            key=item.key, mode=item.mode,
            doc1_chunk=item.doc1_chunk, doc2_chunk=item.doc2_chunk,
            context1=item.context1, context2=item.context2,
            sources=set(item.sources), human_label=label,
            adjudicated=adjudicated, extras=dict(item.extras),
        )

    def export_gold(self) -> List[GoldItem]:
        return [self.consolidated(k) for k in sorted(self.items)]

    # -- adjudication queue ----------------------------------------------

    def adjudication_queue(self, threshold: Optional[float] = None) -> List[GoldItem]:
        """Items whose annotator agreement falls below the threshold, plus
        mining-unresolved items; SME-adjudicated items leave the queue."""
        if threshold is None:
            threshold = self.adjudication_threshold
        queued = []
        for key in sorted(self.items):
            if self._adjudicated_label(key) is not None:
                continue
            fraction = self.item_agreement(key)
            unresolved = "unresolved" in self.items[key].sources or self.items[
                key
            ].extras.get("unresolved")
            if (fraction is not None and fraction < threshold) or unresolved:
                queued.append(self.items[key])
        return queued

    # -- agreement --------------------------------------------------------

    def iaa(self, mode: Optional[Mode] = None) -> AgreementReport:
        labels: Dict[str, Dict[str, Hashable]] = {}
        for rec in self.records:
            if rec.kind != "pair_label":
                continue
            item = self.items.get(rec.subject)
            if item is None or (mode is not None and item.mode != mode):
                continue
            labels.setdefault(rec.annotator, {})[rec.subject] = rec.label
        return agreement_report(labels)

    # -- document reviews -------------------------------------------------

    def record_doc_review(
        self,
        annotator: str,
        doc_id: str,
        likert: Dict[str, int],
        detected: bool,
    ) -> AnnotationRecord:
        self._require_annotator(annotator)
        missing = [d for d in LIKERT_DIMENSIONS if d not in likert]
        if missing:
            raise AnnotationError(f"doc review missing likert dimensions: {missing}")
        return self._append(
            AnnotationRecord(
                annotator=annotator, subject=doc_id, kind="doc_review",
                timestamp=self.clock(), likert=dict(likert),
                detected_contradiction=detected,
            )
        )

    def review_aggregates(self) -> Dict[str, float]:
        """Per-dimension Likert means plus the contradiction detection rate."""
        reviews = [r for r in self.records if r.kind == "doc_review"]
        if not reviews:
            return {}
        out = {
            dim: sum(r.likert[dim] for r in reviews) / len(reviews)
            for dim in LIKERT_DIMENSIONS
        }
        out["detection_rate"] = sum(
            1 for r in reviews if r.detected_contradiction
        ) / len(reviews)
        return out
