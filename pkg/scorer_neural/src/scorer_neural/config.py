"""Training/serving configuration, persisted as config.json in the model dir."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path


@dataclass
class ScorerConfig:
    # Large pretrained encoder to fine-tune; requires hub access and ideally
    # an accelerator. "fresh-tiny" trains a small random-init encoder with a
    # word-level tokenizer built from the training data, fully offline — for
    # smoke tests and desk-scale runs, not for accuracy.
    pretrained_model: str = "roberta-large"
    learning_rate: float = 1e-5
    epochs: int = 4
    batch_size: int = 16
    seed: int = 13
    max_seq_length: int = 256

    def validate(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")

    @property
    def is_fresh_tiny(self) -> bool:
        return self.pretrained_model == "fresh-tiny"

    def save(self, model_dir) -> None:
        path = Path(model_dir) / "config.json"
        path.write_text(
            json.dumps(dataclasses.asdict(self), indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, model_dir) -> "ScorerConfig":
        path = Path(model_dir) / "config.json"
        return cls(**json.loads(path.read_text(encoding="utf-8")))
