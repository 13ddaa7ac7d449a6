"""The human-in-the-loop half: gold union, labeling, adjudication, IAA.

This script builds a gold candidate set from the shipped fixture corpus,
plays two annotators through the queue with one planted disagreement, shows
how the disagreement lands in the adjudication queue, and lets the SME
settle it. Everything here is also reachable over HTTP via
`forge annotate serve`; the service wraps the same AnnotationService.
"""

from contraforge.annotation import AnnotationService
from contraforge.fixtures import load_fixtures

fx = load_fixtures()
items = fx.gold[:8]  # a slice of the labeled mini gold set, relabeled fresh
items = [type(g)(key=g.key, mode=g.mode, doc1_chunk=g.doc1_chunk,
                 doc2_chunk=g.doc2_chunk, sources=set(g.sources),
                 extras=dict(g.extras)) for g in items]

service = AnnotationService(items, annotators=["alex", "sam"])

# Ground truth for the demo: the fixture's original labels.
truth = {g.key: g.human_label for g in fx.gold[:8]}

# Both annotators drain their queues. Sam misreads one item, producing a
# disagreement on exactly one key.
flipped = sorted(truth)[3]
for annotator in ("alex", "sam"):
    while (item := service.next_item(annotator)) is not None:
        label = truth[item.key]
        if annotator == "sam" and item.key == flipped:
            label = 1 - label
        service.submit_label(annotator, item.key, label)

report = service.iaa()
print("inter-annotator agreement")
print(f"  items: {report.n_items}, annotators: {report.n_annotators}")
print(f"  percent agreement: {report.percent_agreement:.3f}")
print(f"  cohen kappa:       {report.cohen_kappa:.3f}")
print(f"  krippendorff alpha: {report.kripp_alpha:.3f}")

# Unanimous items consolidate on their own; the disagreement does not.
queue = service.adjudication_queue()
print(f"\nadjudication queue: {len(queue)} item(s)")
for item in queue:
    labels = service.item_labels(item.key)
    print(f"  {item.key[:16]}... labels={labels}")
    print(f"    chunk 1: {item.doc1_chunk[:60]}")
    print(f"    chunk 2: {item.doc2_chunk[:60]}")

# The SME's decision is terminal: it sets human_label, marks the item
# adjudicated, and empties the queue.
service.submit_adjudication("sme-1", flipped, truth[flipped])
settled = service.consolidated(flipped)
print(f"\nafter adjudication: label={settled.human_label}, "
      f"adjudicated={settled.adjudicated}, queue={len(service.adjudication_queue())}")

gold = service.export_gold()
positives = sum(1 for g in gold if g.human_label == 1)
print(f"\nexported gold set: {len(gold)} items, {positives} confirmed contradictions")
