"""End-to-end orchestration: generate -> inject -> mine -> unify -> annotate
-> evaluate, persisting to an append-only record store after every stage so
interrupted runs resume from what is already on disk."""

import json
import random
import re
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .annotation import AnnotationService, build_gold_union
from .config import RunConfig
from .corpus import (
    AnnotationRecord,
    CandidatePair,
    ContradictionRecord,
    Document,
    GoldItem,
    Mode,
    RecordStore,
    normalize_text,
)
from .evaluation import evaluate_detectors, report_to_dict
from .fixtures import load_domain_tree, load_fixtures, load_profile
from .generation import generate_document, generate_metadata
from .injection import execute_plan, schedule_corpus
from .mining import mine
from .prompts import PromptLibrary
from .providers import (
    CollusiveNli,
    ContradictionJudge,
    MockEmbedding,
    MockLogprobs,
    OpenAIChatClient,
    OpenAIEmbeddingClient,
    ProviderError,
)
from .scripted import ScriptedPipelineChat

STAGES = ("generate", "inject", "mine", "unify", "annotate", "evaluate")

FIXED_CLOCK = "2024-06-01T00:00:00+00:00"


class PipelineError(Exception):
    pass


@dataclass(frozen=True)
class StageReport:
    name: str
    counts: Dict[str, int]
    seconds: float


@dataclass
class RunManifest:
    """Everything needed to reproduce or audit a run."""

    config: Dict[str, Any]
    providers: Dict[str, str]
    seed: int
    deterministic: bool
    stages: List[StageReport] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "providers": self.providers,
            "seed": self.seed,
            "deterministic": self.deterministic,
            "stages": [
                {"name": s.name, "counts": s.counts, "seconds": s.seconds}
                for s in self.stages
            ],
            "results": self.results,
        }


# ---------------------------------------------------------------------------
# Providers
# ---------------------------------------------------------------------------


@dataclass
class ProviderBundle:
    chat: Any
    embedder: Any
    logprobs: Any
    nli_factory: Any  # callable: List[ContradictionRecord] -> nli classifier
    judge: Any
    identifiers: Dict[str, str]


def _mock_nli_factory(injected: Sequence[ContradictionRecord]) -> CollusiveNli:
    return CollusiveNli(
        [(r.target_statement, r.contradiction_statement) for r in injected]
    )


def build_providers(cfg: RunConfig, prompts: PromptLibrary) -> ProviderBundle:
    p = cfg.raw["providers"]
    if cfg.mock_providers:
        chat = ScriptedPipelineChat(seed=cfg.seed)
        judge = ContradictionJudge(chat, prompts.get("judge"))
        return ProviderBundle(
            chat=chat,
            embedder=MockEmbedding(),
            logprobs=MockLogprobs(int(p["logprobs"].get("mock_vocab", 18))),
            nli_factory=_mock_nli_factory,
            judge=judge,
            identifiers={
                "chat": "mock:scripted",
                "embedding": "mock:hash-bucket",
                "nli": "mock:collusive",
                "logprobs": f"mock:uniform-{p['logprobs'].get('mock_vocab', 18)}",
            },
        )
    if not p["chat"].get("base_url"):
        raise ProviderError("live providers need providers.chat.base_url in the config")
    chat = OpenAIChatClient(p["chat"]["base_url"], p["chat"]["model"])
    embedder = OpenAIEmbeddingClient(
        p["embedding"].get("base_url") or p["chat"]["base_url"],
        p["embedding"]["model"],
    )
    judge = ContradictionJudge(chat, prompts.get("judge"))

    def live_nli_factory(injected):
        raise ProviderError(
            "no live NLI backend is wired in; run with mock_providers or add one"
        )

    return ProviderBundle(
        chat=chat,
        embedder=embedder,
        logprobs=MockLogprobs(int(p["logprobs"].get("mock_vocab", 18))),
        nli_factory=live_nli_factory,
        judge=judge,
        identifiers={
            "chat": p["chat"]["model"],
            "embedding": p["embedding"]["model"],
            "nli": p["nli"]["model"],
            "logprobs": p["logprobs"]["model"],
        },
    )


# ---------------------------------------------------------------------------
# Store views
# ---------------------------------------------------------------------------


def latest_documents(store: RecordStore) -> Dict[str, Document]:
    """Current corpus state: the last stored revision of each document."""
    docs: Dict[str, Document] = {}
    for doc in store.load_kind(Document):
        docs[doc.id] = doc
    return docs


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def stage_generate(cfg: RunConfig, store: RecordStore, bundle: ProviderBundle,
                   prompts: PromptLibrary) -> Dict[str, int]:
    profile = load_profile()
    tree = load_domain_tree()
    wanted = cfg.raw["corpus"]["domains"] or tree.domain_names()
    per_domain = int(cfg.raw["corpus"]["documents_per_domain"])
    gen = cfg.generation
    generated = 0
    rejected = 0
    existing = latest_documents(store)
    for domain in wanted:
        subs = tree.subdomains(domain)
        for i in range(per_domain):
            doc_id = f"{_slug(domain)}-{i + 1:02d}"
            if doc_id in existing:
                continue  # resumed run: keep what is already on disk
            rng = random.Random(f"{cfg.seed}:{domain}:{i}")
            subdomain = subs[i % len(subs)]
            meta = generate_metadata(
                bundle.chat, prompts, profile, tree, domain, subdomain, rng,
                date_window=tuple(gen["date_window"]),
            )
            doc, report = generate_document(
                bundle.chat, bundle.logprobs, prompts, meta, profile,
                domain, subdomain, doc_id,
                ppl_cap=float(gen["ppl_cap"]),
                max_attempts=int(gen["max_attempts"]),
                paragraph_min=int(gen["paragraph_min"]),
            )
            rejected += report.attempts - 1
            store.append(doc)
            generated += 1
    return {"generated": generated, "rejected": rejected}


def stage_inject(cfg: RunConfig, store: RecordStore, bundle: ProviderBundle,
                 prompts: PromptLibrary) -> Dict[str, int]:
    profile = load_profile()
    few_shot = load_fixtures().few_shot_examples
    docs = latest_documents(store)
    by_domain: Dict[str, List[Document]] = {}
    for doc_id in sorted(docs):
        by_domain.setdefault(docs[doc_id].domain, []).append(docs[doc_id])
    policy = cfg.injection_policy(sorted(by_domain))
    plans = schedule_corpus(by_domain, policy)
    done = {rec.id for rec in store.load_kind(ContradictionRecord)}
    injected = 0
    for n, plan in enumerate(plans, start=1):
        record_id = f"inj-{n:03d}"
        if record_id in done:
            continue
        host, record = execute_plan(
            plan, docs, bundle.chat, bundle.logprobs, prompts, profile,
            few_shot, cfg.delta_gate, record_id,
            max_attempts=int(cfg.generation["max_attempts"]),
        )
        store.append(host)
        store.append(record)
        docs[host.id] = host
        injected += 1
    return {"planned": len(plans), "injected": injected}


def stage_mine(cfg: RunConfig, store: RecordStore, bundle: ProviderBundle) -> Dict[str, int]:
    docs = latest_documents(store)
    corpus = [docs[k] for k in sorted(docs)]
    injected = store.load_kind(ContradictionRecord)
    nli = bundle.nli_factory(injected)
    mcfg = cfg.mining_config
    mined: List[CandidatePair] = []
    for mode in (Mode.SELF, Mode.PAIRWISE):
        mined.extend(
            mine(corpus, mode, mcfg, bundle.embedder, nli, bundle.judge,
                 pairing_policy=cfg.pairing_policy)
        )
    existing = {p.key for p in store.load_kind(CandidatePair)}
    new = [p for p in mined if p.key not in existing]
    store.append_all(new)
    forwarded = sum(1 for p in mined if p.forwarded)
    judged = sum(1 for p in mined if p.llm_label is not None)
    return {"mined": len(mined), "forwarded": forwarded, "judged": judged}


def stage_unify(cfg: RunConfig, store: RecordStore) -> Dict[str, int]:
    docs = latest_documents(store)
    mined = store.load_kind(CandidatePair)
    injected = store.load_kind(ContradictionRecord)
    gold = build_gold_union([mined], injected, docs=list(docs.values()))
    existing = {g.key for g in store.load_kind(GoldItem)}
    new = [g for g in gold if g.key not in existing]
    store.append_all(new)
    return {"gold_items": len(gold)}


def _injected_chunk_sets(injected: Sequence[ContradictionRecord]):
    return {
        frozenset(
            (normalize_text(r.target_statement), normalize_text(r.contradiction_statement))
        )
        for r in injected
    }


def stage_annotate(cfg: RunConfig, store: RecordStore) -> Dict[str, int]:
    """Simulated annotation pass for mock runs.

    Every configured annotator labels every gold item: 1 when the chunk pair
    matches an injected contradiction (in either order), else 0. Live runs
    collect these labels through the HTTP service instead.
    """
    if not cfg.mock_providers:
        return {"labels": 0}
    gold = store.load_kind(GoldItem)
    injected = store.load_kind(ContradictionRecord)
    known = _injected_chunk_sets(injected)
    service = AnnotationService(
        gold, store=store, annotators=cfg.annotators,
        adjudication_threshold=float(cfg.raw["annotation"]["adjudication_threshold"]),
        clock=lambda: FIXED_CLOCK,
    )
    labels = 0
    for annotator in cfg.annotators:
        done = service.labeled_keys(annotator)
        for item in gold:
            if item.key in done:
                continue
            pair = frozenset(
                (normalize_text(item.doc1_chunk), normalize_text(item.doc2_chunk))
            )
            service.submit_label(annotator, item.key, 1 if pair in known else 0)
            labels += 1
    return {"labels": labels}


def stage_evaluate(cfg: RunConfig, store: RecordStore) -> Tuple[Dict[str, int], List[dict]]:
    gold_items = store.load_kind(GoldItem)
    mined = store.load_kind(CandidatePair)
    injected = store.load_kind(ContradictionRecord)
    service = AnnotationService(gold_items, store=store, annotators=cfg.annotators)
    gold = service.export_gold()
    reports = evaluate_detectors(mined, gold, injected)
    return {"reports": len(reports)}, [report_to_dict(r) for r in reports]


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


def run_pipeline(
    cfg: RunConfig,
    store_path: str,
    stages: Optional[Sequence[str]] = None,
) -> RunManifest:
    """Run the requested stages in canonical order against one store.

    Stages are idempotent over an existing store, so a run interrupted after
    any stage can be resumed by running the remaining stages (or all of
    them) against the same store path.
    """
    chosen = list(stages) if stages else list(STAGES)
    unknown = [s for s in chosen if s not in STAGES]
    if unknown:
        raise PipelineError(f"unknown stages: {unknown}")
    chosen.sort(key=STAGES.index)
    store = RecordStore(store_path)
    prompts = PromptLibrary(cfg.generation.get("prompt_overrides") or None)
    bundle = build_providers(cfg, prompts)
    manifest = RunManifest(
        config=cfg.raw,
        providers=bundle.identifiers,
        seed=cfg.seed,
        deterministic=cfg.mock_providers,
    )
    for name in chosen:
        started = time.perf_counter()
        if name == "generate":
            counts = stage_generate(cfg, store, bundle, prompts)
        elif name == "inject":
            counts = stage_inject(cfg, store, bundle, prompts)
        elif name == "mine":
            counts = stage_mine(cfg, store, bundle)
        elif name == "unify":
            counts = stage_unify(cfg, store)
        elif name == "annotate":
            counts = stage_annotate(cfg, store)
        else:
            counts, reports = stage_evaluate(cfg, store)
            manifest.results["evaluation"] = reports
        # deterministic runs zero the wall clock so manifests are comparable
        seconds = 0.0 if cfg.mock_providers else time.perf_counter() - started
        manifest.stages.append(StageReport(name=name, counts=counts, seconds=seconds))
    return manifest


def write_manifest(manifest: RunManifest, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
