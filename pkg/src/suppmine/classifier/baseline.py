"""Built-in detection baseline: logistic regression over hashed features.

Deliberately small: it makes the pipeline self-contained and fast to train on
a desktop. Heavier models plug in through the external scorer protocol
instead of replacing this module.

Training is deterministic given the seed, and invariant to the order the
instances are passed in: rows are canonicalized by instance_id before the
seeded per-epoch shuffles.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .. import _kernels
from ..errors import TrainingError
from .features import N_FEATURES, build_csr
from .metrics import DetectionMetrics


@dataclass(frozen=True)
class BaselineConfig:
    seed: int = 13
    learning_rate: float = 0.2
    max_epochs: int = 30
    patience: int = 5
    threshold: float = 0.5


class BaselineModel:
    """Frozen weights + bias; scoring is pure and thread-safe."""

    def __init__(self, weights, bias, config: BaselineConfig, dev_f1=None, epochs_run=0):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.config = config
        self.dev_f1 = dev_f1
        self.epochs_run = epochs_run

    def score_texts(self, masked_texts) -> np.ndarray:
        indptr, indices, values = build_csr(masked_texts)
        bias = np.array([self.bias], dtype=np.float64)
        return _kernels.predict_proba(indptr, indices, values, self.weights, bias)

    def score(self, masked_text: str) -> float:
        return float(self.score_texts([masked_text])[0])

    def save(self, path) -> None:
        nz = np.nonzero(self.weights)[0]
        np.savez_compressed(
            path,
            nz_index=nz.astype(np.int64),
            nz_value=self.weights[nz],
            n_features=np.int64(N_FEATURES),
            bias=np.float64(self.bias),
            dev_f1=np.float64(-1.0 if self.dev_f1 is None else self.dev_f1),
            epochs_run=np.int64(self.epochs_run),
            config=np.array(
                [
                    self.config.seed,
                    self.config.learning_rate,
                    self.config.max_epochs,
                    self.config.patience,
                    self.config.threshold,
                ],
                dtype=np.float64,
            ),
        )

    @classmethod
    def load(cls, path) -> "BaselineModel":
        data = np.load(path)
        weights = np.zeros(int(data["n_features"]), dtype=np.float64)
        weights[data["nz_index"]] = data["nz_value"]
        cfg_arr = data["config"]
        config = BaselineConfig(
            seed=int(cfg_arr[0]),
            learning_rate=float(cfg_arr[1]),
            max_epochs=int(cfg_arr[2]),
            patience=int(cfg_arr[3]),
            threshold=float(cfg_arr[4]),
        )
        dev_f1 = float(data["dev_f1"])
        return cls(
            weights,
            float(data["bias"]),
            config,
            dev_f1=None if dev_f1 < 0 else dev_f1,
            epochs_run=int(data["epochs_run"]),
        )


def _dev_f1(scores, labels, threshold) -> float:
    predicted = scores >= threshold
    tp = int(np.sum(predicted & (labels == 1)))
    fp = int(np.sum(predicted & (labels == 0)))
    fn = int(np.sum(~predicted & (labels == 1)))
    return DetectionMetrics.from_counts(tp, fp, fn, 0).f1


def train_baseline(train, dev, config: BaselineConfig | None = None) -> BaselineModel:
    """Train the baseline with early stopping on dev F1.

    Raises TrainingError on empty or single-class training data. With an
    empty dev set all max_epochs run and the final weights are kept.
    """
    config = config or BaselineConfig()
    if not train:
        raise TrainingError("training set is empty")
    labels_present = {inst.label for inst in train}
    if labels_present != {0, 1}:
        raise TrainingError(f"training data must contain both classes, got {labels_present}")

    ordered = sorted(train, key=lambda inst: inst.instance_id)
    indptr, indices, values = build_csr([inst.masked_text for inst in ordered])
    labels = np.asarray([float(inst.label) for inst in ordered], dtype=np.float64)

    dev_arrays = None
    if dev:
        dev_arrays = (
            build_csr([inst.masked_text for inst in dev]),
            np.asarray([inst.label for inst in dev], dtype=np.int64),
        )

    weights = np.zeros(N_FEATURES, dtype=np.float64)
    bias = np.zeros(1, dtype=np.float64)
    best: tuple[float, np.ndarray, float, int] | None = None
    stale = 0
    epochs_run = 0
    n = len(ordered)
    for epoch in range(config.max_epochs):
        rng = np.random.RandomState((config.seed * 1_000_003 + epoch) % (2**32))
        order = rng.permutation(n).astype(np.int64)
        _kernels.sgd_epoch(indptr, indices, values, labels, order, weights, bias, config.learning_rate)
        epochs_run = epoch + 1
        if dev_arrays is None:
            continue
        (dev_indptr, dev_indices, dev_values), dev_labels = dev_arrays
        scores = _kernels.predict_proba(dev_indptr, dev_indices, dev_values, weights, bias)
        f1 = _dev_f1(scores, dev_labels, config.threshold)
        if best is None or f1 > best[0]:
            best = (f1, weights.copy(), float(bias[0]), epochs_run)
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break

    if best is not None:
        dev_f1, weights, bias_val, epochs_at_best = best
        return BaselineModel(weights, bias_val, config, dev_f1=dev_f1, epochs_run=epochs_at_best)
    return BaselineModel(weights, float(bias[0]), config, dev_f1=None, epochs_run=epochs_run)


def with_threshold(config: BaselineConfig, threshold: float) -> BaselineConfig:
    return replace(config, threshold=threshold)
