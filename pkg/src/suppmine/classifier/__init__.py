"""Interaction detection: labeled data, baseline scorer, wire clients, metrics."""

from .baseline import BaselineConfig, BaselineModel, train_baseline
from .external import HttpScorer, SubprocessScorer
from .instances import LabeledInstance, collapse_label, load_labeled_instances
from .metrics import DetectionMetrics, evaluate_detection

__all__ = [
    "BaselineConfig",
    "BaselineModel",
    "train_baseline",
    "HttpScorer",
    "SubprocessScorer",
    "LabeledInstance",
    "collapse_label",
    "load_labeled_instances",
    "DetectionMetrics",
    "evaluate_detection",
]
