"""A complete deterministic run, start to finish.

This script builds a small corpus across two legal domains, plants
contradictions per a per-domain policy, mines them back out with the hybrid
detector, simulates annotation, and prints the detector scorecard. Run it
twice against the same seed and the stores are byte-identical.
"""

import json
import tempfile
from pathlib import Path

from contraforge import load_config, run_pipeline
from contraforge.corpus import ContradictionRecord, RecordStore
from contraforge.pipeline import latest_documents

workdir = Path(tempfile.mkdtemp(prefix="contraforge-demo-"))
store_path = workdir / "run.jsonl"

# Everything about a run lives in one config. Domains come from the shipped
# domain tree; each domain gets an injection policy: self_each_doc plants a
# self-contradiction in every document, interleave_pairs plants one pairwise
# contradiction per document pair, none leaves the domain clean.
cfg = load_config(overrides={
    "seed": 7,
    "corpus": {
        "documents_per_domain": 2,
        "domains": ["Contract Law", "Dispute Resolution and Litigation"],
    },
    "injection": {
        "policy": {
            "Contract Law": "interleave_pairs",
            "Dispute Resolution and Litigation": "self_each_doc",
        },
    },
})

manifest = run_pipeline(cfg, str(store_path))

print("stage counts")
for stage in manifest.stages:
    print(f"  {stage.name:<9} {stage.counts}")

# The store now holds every artifact of the run: document revisions,
# injection records, mined candidate pairs, the gold set, and labels.
store = RecordStore(store_path)
docs = latest_documents(store)
print(f"\ncorpus: {len(docs)} documents")
for doc_id in sorted(docs):
    print(f"  {doc_id}: {docs[doc_id].metadata.title!r} (ppl {docs[doc_id].ppl_base:.1f})")

print("\ninjected contradictions")
for rec in store.load_kind(ContradictionRecord):
    print(f"  {rec.id} [{rec.mode.value}/{rec.ctype.value}]")
    print(f"    target: {rec.target_statement[:70]}")
    print(f"    contra: {rec.contradiction_statement[:70]}")

print("\ndetector scorecard")
for report in manifest.results["evaluation"]:
    r = report["rounded"]
    print(f"  {report['detector']:<7} {report['mode']:<9} "
          f"A={r['accuracy']} P={r['precision']} R={r['recall']} F1={r['f1']}")

# The manifest is the audit trail: config, providers, counts, results.
manifest_path = workdir / "manifest.json"
manifest_path.write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True))
print(f"\nstore:    {store_path}")
print(f"manifest: {manifest_path}")
