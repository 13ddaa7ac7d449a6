"""Inter-annotator agreement statistics: percent agreement, Cohen's kappa,
and Krippendorff's alpha (nominal, tolerating missing labels)."""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Hashable, List, Optional

# labels: annotator -> item -> label
Labels = Dict[str, Dict[str, Hashable]]


class UndefinedAgreement(ValueError):
    """The requested statistic has no defined value for these labels."""


@dataclass(frozen=True)
class AgreementReport:
    percent_agreement: Optional[float]
    cohen_kappa: Optional[float]
    kripp_alpha: Optional[float]
    n_items: int
    n_annotators: int
    reasons: Dict[str, str] = field(default_factory=dict)


def _items_with_min_labels(labels: Labels, minimum: int = 2) -> List[str]:
    counts: Dict[str, int] = {}
    for per_item in labels.values():
        for item in per_item:
            counts[item] = counts.get(item, 0) + 1
    return sorted(i for i, c in counts.items() if c >= minimum)


def percent_agreement(labels: Labels) -> float:
    """Fraction of agreeing annotator pairs over all co-labeled items.

    With two annotators this is exactly: identically labeled co-labeled
    items / co-labeled items.
    """
    annotators = sorted(labels)
    agree = total = 0
    for item in _items_with_min_labels(labels):
        present = [labels[a][item] for a in annotators if item in labels[a]]
        for x, y in combinations(present, 2):
            total += 1
            if x == y:
                agree += 1
    if total == 0:
        raise UndefinedAgreement("no co-labeled items")
    return agree / total


def cohen_kappa(labels: Labels) -> float:
    """Chance-corrected agreement for exactly two annotators.

    Expected agreement comes from each annotator's marginal label
    frequencies; undefined when expected agreement is 1 (constant labels).
    """
    if len(labels) != 2:
        raise UndefinedAgreement("Cohen's kappa requires exactly 2 annotators")
    a, b = sorted(labels)
    items = [i for i in labels[a] if i in labels[b]]
    if not items:
        raise UndefinedAgreement("no co-labeled items")
    n = len(items)
    p_o = sum(1 for i in items if labels[a][i] == labels[b][i]) / n
    categories = {labels[a][i] for i in items} | {labels[b][i] for i in items}
    p_e = 0.0
    for c in categories:
        pa = sum(1 for i in items if labels[a][i] == c) / n
        pb = sum(1 for i in items if labels[b][i] == c) / n
        p_e += pa * pb
    if p_e == 1.0:
        raise UndefinedAgreement("expected agreement is 1 (constant labels)")
    return (p_o - p_e) / (1.0 - p_e)


def kripp_alpha(labels: Labels) -> float:
    """Krippendorff's alpha for nominal data, missing labels allowed.

    Built from the coincidence matrix over items with at least two labels;
    undefined when expected disagreement is zero.
    """
    items = _items_with_min_labels(labels)
    if not items:
        raise UndefinedAgreement("no items with two or more labels")
    coincidence: Dict[Hashable, Dict[Hashable, float]] = {}
    for item in items:
        values = [per[item] for per in labels.values() if item in per]
        m = len(values)
        for i, c in enumerate(values):
            for j, k in enumerate(values):
                if i == j:
                    continue
                coincidence.setdefault(c, {}).setdefault(k, 0.0)
                coincidence[c][k] += 1.0 / (m - 1)
    categories = sorted(coincidence, key=repr)
    n = sum(sum(row.values()) for row in coincidence.values())
    n_c = {c: sum(coincidence[c].values()) for c in categories}
    d_o = sum(
        coincidence[c].get(k, 0.0)
        for c in categories
        for k in coincidence[c]
        if c != k
    )
    d_e = sum(
        n_c[c] * n_c[k] for c in categories for k in categories if c != k
    ) / (n - 1)
    if d_e == 0:
        raise UndefinedAgreement("expected disagreement is zero (constant labels)")
    return 1.0 - d_o / d_e


def agreement_report(labels: Labels) -> AgreementReport:
    """All three statistics at once; undefined ones come back absent with a
    reason instead of a fabricated value."""
    reasons: Dict[str, str] = {}
    values: Dict[str, Optional[float]] = {}
    for name, fn in (
        ("percent_agreement", percent_agreement),
        ("cohen_kappa", cohen_kappa),
        ("kripp_alpha", kripp_alpha),
    ):
        try:
            values[name] = fn(labels)
        except UndefinedAgreement as exc:
            values[name] = None
            reasons[name] = str(exc)
    return AgreementReport(
        percent_agreement=values["percent_agreement"],
        cohen_kappa=values["cohen_kappa"],
        kripp_alpha=values["kripp_alpha"],
        n_items=len(_items_with_min_labels(labels)),
        n_annotators=len(labels),
        reasons=reasons,
    )
