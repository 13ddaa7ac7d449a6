"""contraforge: synthetic contradiction corpora with hybrid mining,
human-in-the-loop annotation, and detector evaluation."""

from .corpus import (
    AnnotationRecord,
    CandidatePair,
    ContradictionRecord,
    ContradictionType,
    Document,
    DocumentMetadata,
    DomainTree,
    GoldItem,
    Mode,
    OrganizationProfile,
    RecordStore,
    normalize_text,
    pair_key,
)
from .mining import MiningConfig, hybrid_score, mine
from .generation import fluency_gate, perplexity
from .injection import DeltaGate, InjectionPolicy, delta_rel, validate_injection
from .agreement import agreement_report, cohen_kappa, kripp_alpha, percent_agreement
from .annotation import AnnotationService, build_gold_union
from .evaluation import evaluate_detectors, render_table
from .config import RunConfig, load_config
from .pipeline import RunManifest, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "AnnotationRecord",
    "AnnotationService",
    "CandidatePair",
    "ContradictionRecord",
    "ContradictionType",
    "DeltaGate",
    "Document",
    "DocumentMetadata",
    "DomainTree",
    "GoldItem",
    "InjectionPolicy",
    "MiningConfig",
    "Mode",
    "OrganizationProfile",
    "RecordStore",
    "RunConfig",
    "RunManifest",
    "agreement_report",
    "build_gold_union",
    "cohen_kappa",
    "delta_rel",
    "evaluate_detectors",
    "fluency_gate",
    "hybrid_score",
    "kripp_alpha",
    "load_config",
    "mine",
    "normalize_text",
    "pair_key",
    "percent_agreement",
    "perplexity",
    "render_table",
    "run_pipeline",
    "validate_injection",
]
