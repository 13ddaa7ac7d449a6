"""Scoring detector outputs against the human-labeled gold set."""

from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_UP
from typing import Dict, List, Optional, Sequence

from .corpus import CandidatePair, ContradictionRecord, ContradictionType, GoldItem, Mode, pair_key

DETECTORS = ("nli", "llm", "hybrid")


class EvaluationError(Exception):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class EvalReport:
    detector: str
    mode: Mode
    matrix: ConfusionMatrix
    accuracy: Optional[float]
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]
    per_type: Dict[str, Optional[float]] = field(default_factory=dict)


def confusion(predictions: Dict[str, int], gold: Dict[str, int]) -> ConfusionMatrix:
    """Counts over the gold keys; a key the detector never surfaced counts
    as a predicted negative."""
    tp = fp = fn = tn = 0
    for key, truth in gold.items():
        pred = predictions.get(key, 0)
        if pred == 1 and truth == 1:
            tp += 1
        elif pred == 1 and truth == 0:
            fp += 1
        elif pred == 0 and truth == 1:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def metrics(m: ConfusionMatrix):
    """(accuracy, precision, recall, f1); any 0/0 is None, never 0 or 1."""
    if m.total == 0:
        raise EvaluationError("metrics of an empty confusion matrix are undefined")
    accuracy = (m.tp + m.tn) / m.total
    precision = m.tp / (m.tp + m.fp) if (m.tp + m.fp) > 0 else None
    recall = m.tp / (m.tp + m.fn) if (m.tp + m.fn) > 0 else None
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return accuracy, precision, recall, f1


def detector_prediction(pair: CandidatePair, detector: str) -> int:
    if detector == "nli":
        return 1 if pair.nli_label == "contradiction" else 0
    if detector == "llm":
        return pair.llm_label if pair.llm_label is not None else 0
    if detector == "hybrid":
        return pair.hybrid_label if pair.hybrid_label is not None else 0
    raise ValueError(f"unknown detector {detector!r}")


def evaluate_detectors(
    mined: Sequence[CandidatePair],
    gold: Sequence[GoldItem],
    injected: Sequence[ContradictionRecord] = (),
    detectors: Sequence[str] = DETECTORS,
) -> List[EvalReport]:
    """One report per detector per mode present in the gold set.

    Per-type recall is computed only over gold items that trace back to an
    injected contradiction with a known type.
    """
    unlabeled = [g.key for g in gold if g.human_label is None]
    if unlabeled:
        raise EvaluationError(f"gold items without human labels: {unlabeled}")
    type_by_key: Dict[str, ContradictionType] = {}
    for rec in injected:
        if rec.ctype is not None:
            key = pair_key(rec.target_statement, rec.contradiction_statement, rec.mode)
            type_by_key[key] = rec.ctype
    reports: List[EvalReport] = []
    modes = sorted({g.mode for g in gold}, key=lambda m: m.value)
    for mode in modes:
        gold_mode = [g for g in gold if g.mode == mode]
        truth = {g.key: g.human_label for g in gold_mode}
        for detector in detectors:
            preds = {
                p.key: detector_prediction(p, detector)
                for p in mined
                if p.mode == mode
            }
            matrix = confusion(preds, truth)
            accuracy, precision, recall, f1 = metrics(matrix)
            per_type: Dict[str, Optional[float]] = {}
            for ctype in ContradictionType:
                keys = [
                    g.key
                    for g in gold_mode
                    if "injected" in g.sources
                    and type_by_key.get(g.key) == ctype
                    and g.human_label == 1
                ]
                if not keys:
                    continue
                recovered = sum(1 for k in keys if preds.get(k, 0) == 1)
                per_type[ctype.value] = recovered / len(keys)
            reports.append(
                EvalReport(
                    detector=detector, mode=mode, matrix=matrix,
                    accuracy=accuracy, precision=precision,
                    recall=recall, f1=f1, per_type=per_type,
                )
            )
    return reports


def round3(value: Optional[float]) -> Optional[float]:
    """Report rounding: 3 decimals, half-up; raw values stay in the record."""
    if value is None:
        return None
    return float(Decimal(repr(value)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def report_to_dict(report: EvalReport) -> dict:
    return {
        "detector": report.detector,
        "mode": report.mode.value,
        "matrix": {
            "tp": report.matrix.tp, "fp": report.matrix.fp,
            "fn": report.matrix.fn, "tn": report.matrix.tn,
        },
        "accuracy": report.accuracy,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "rounded": {
            "accuracy": round3(report.accuracy),
            "precision": round3(report.precision),
            "recall": round3(report.recall),
            "f1": round3(report.f1),
        },
        "per_type": report.per_type,
    }


def _fmt(value: Optional[float]) -> str:
    return "  n/a" if value is None else f"{round3(value):5.3f}"


def render_table(reports: Sequence[EvalReport]) -> str:
    """Aligned plain-text table: one row per detector, grouped by mode."""
    lines = [f"{'Model':<10} {'Mode':<10} {'A':>6} {'P':>6} {'R':>6} {'F1':>6}"]
    lines.append("-" * len(lines[0]))
    for report in reports:
        lines.append(
            f"{report.detector:<10} {report.mode.value:<10} "
            f"{_fmt(report.accuracy):>6} {_fmt(report.precision):>6} "
            f"{_fmt(report.recall):>6} {_fmt(report.f1):>6}"
        )
    return "\n".join(lines)
