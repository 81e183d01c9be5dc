"""Detection metrics and the tabular reports."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ReportError


@dataclass(frozen=True)
class DetectionMetrics:
    true_positives: int
    false_positives: int
    false_negatives: int
    true_negatives: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "DetectionMetrics":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        denom = precision + recall
        f1 = 2.0 * precision * recall / denom if denom else 0.0
        return cls(tp, fp, fn, tn, precision, recall, f1)

    @property
    def total(self) -> int:
        return (
            self.true_positives
            + self.false_positives
            + self.false_negatives
            + self.true_negatives
        )


def scores_for(scorer, masked_texts) -> list[float]:
    """Scores from either a score_texts-style object or a plain callable."""
    if hasattr(scorer, "score_texts"):
        return list(scorer.score_texts(masked_texts))
    return [float(s) for s in scorer(masked_texts)]


def evaluate_detection(scorer, instances, threshold: float = 0.5) -> DetectionMetrics:
    """Positive-class precision/recall/F1 at the given decision threshold."""
    if not instances:
        raise ValueError("evaluate_detection requires at least one instance")
    scores = scores_for(scorer, [inst.masked_text for inst in instances])
    tp = fp = fn = tn = 0
    for inst, score in zip(instances, scores):
        predicted = score >= threshold
        if inst.label == 1:
            if predicted:
                tp += 1
            else:
                fn += 1
        else:
            if predicted:
                fp += 1
            else:
                tn += 1
    return DetectionMetrics.from_counts(tp, fp, fn, tn)


def format_detection_report(rows) -> str:
    """Tab-separated detection table: one row per (evaluation set, metrics)."""
    lines = ["Evaluation set\tPrec.\tRec.\tF1"]
    for name, metrics in rows:
        lines.append(
            f"{name}\t{metrics.precision:.2f}\t{metrics.recall:.2f}\t{metrics.f1:.2f}"
        )
    return "\n".join(lines) + "\n"


def report_ablation(
    f1_by_train_by_test: dict,
    instance_counts: dict,
    train_sets: list[str],
    test_sets: list[str],
) -> str:
    """Tab-separated ablation table: test sets as rows, train configs as columns.

    Every (train, test) cell and every test-set instance count must be
    present; a missing cell raises ReportError.
    """
    header = ["Test dataset", "Num. pairwise instances"] + [
        f"F1 ({name})" for name in train_sets
    ]
    lines = ["\t".join(header)]
    for test_name in test_sets:
        if test_name not in instance_counts:
            raise ReportError(f"missing instance count for test set {test_name!r}")
        row = [test_name, str(instance_counts[test_name])]
        for train_name in train_sets:
            try:
                metrics = f1_by_train_by_test[train_name][test_name]
            except KeyError:
                raise ReportError(
                    f"missing cell for train={train_name!r}, test={test_name!r}"
                ) from None
            f1 = metrics.f1 if isinstance(metrics, DetectionMetrics) else float(metrics)
            row.append(f"{f1:.2f}")
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"
