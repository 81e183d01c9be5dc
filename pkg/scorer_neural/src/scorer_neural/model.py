"""Fine-tuning and inference for the transformer detector.

Saved layout: ``<model_dir>/config.json`` (ScorerConfig) plus
``<model_dir>/encoder/`` with the HF model and tokenizer. The classifier head
consumes the leading framing token's representation; ``[Arg1]``/``[Arg2]``
are registered as added vocabulary tokens so argument masks stay atomic.
"""

from __future__ import annotations

import random
import warnings
from pathlib import Path

import torch
from tokenizers import Tokenizer, models, pre_tokenizers, trainers
from tokenizers.processors import TemplateProcessing
from transformers import (
    AutoModelForSequenceClassification,
    AutoTokenizer,
    BertConfig,
    BertForSequenceClassification,
    PreTrainedTokenizerFast,
)

from .config import ScorerConfig
from .data import Instance

ARG_TOKENS = ["[Arg1]", "[Arg2]"]
_SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]"]


def _set_seeds(seed: int) -> None:
    random.seed(seed)
    torch.manual_seed(seed)


def _fresh_tokenizer(texts) -> PreTrainedTokenizerFast:
    tok = Tokenizer(models.WordLevel(unk_token="[UNK]"))
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.WordLevelTrainer(special_tokens=_SPECIALS + ARG_TOKENS)
    tok.train_from_iterator(texts, trainer)
    tok.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        special_tokens=[
            ("[CLS]", tok.token_to_id("[CLS]")),
            ("[SEP]", tok.token_to_id("[SEP]")),
        ],
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=tok,
        pad_token="[PAD]",
        unk_token="[UNK]",
        cls_token="[CLS]",
        sep_token="[SEP]",
    )


def _build(config: ScorerConfig, train_texts):
    if config.is_fresh_tiny:
        tokenizer = _fresh_tokenizer(train_texts)
        tokenizer.add_tokens(ARG_TOKENS)
        encoder_config = BertConfig(
            vocab_size=len(tokenizer),
            hidden_size=64,
            num_hidden_layers=2,
            num_attention_heads=2,
            intermediate_size=128,
            max_position_embeddings=max(64, config.max_seq_length),
            num_labels=2,
        )
        model = BertForSequenceClassification(encoder_config)
    else:
        tokenizer = AutoTokenizer.from_pretrained(config.pretrained_model)
        tokenizer.add_tokens(ARG_TOKENS)
        model = AutoModelForSequenceClassification.from_pretrained(
            config.pretrained_model, num_labels=2
        )
        model.resize_token_embeddings(len(tokenizer))
    return tokenizer, model


def _encode(tokenizer, texts, max_length):
    return tokenizer(
        list(texts),
        padding=True,
        truncation=True,
        max_length=max_length,
        return_tensors="pt",
    )


def _f1(predictions, labels) -> float:
    tp = int(((predictions == 1) & (labels == 1)).sum())
    fp = int(((predictions == 1) & (labels == 0)).sum())
    fn = int(((predictions == 0) & (labels == 1)).sum())
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def fine_tune(train: list[Instance], dev: list[Instance], config: ScorerConfig, out_dir) -> Path:
    """Train the detector and save weights + config under out_dir."""
    config.validate()
    if not train:
        raise ValueError("training set is empty")
    device = "cuda" if torch.cuda.is_available() else "cpu"
    if device == "cpu":
        warnings.warn("no accelerator found; training on CPU will be slow", stacklevel=2)

    _set_seeds(config.seed)
    ordered = sorted(train, key=lambda i: i.instance_id)
    texts = [i.masked_text for i in ordered]
    labels = torch.tensor([i.label for i in ordered], dtype=torch.long)

    tokenizer, model = _build(config, texts)
    model.to(device)
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)

    n = len(ordered)
    for epoch in range(config.epochs):
        generator = torch.Generator().manual_seed(config.seed * 1_000_003 + epoch)
        order = torch.randperm(n, generator=generator)
        model.train()
        total_loss = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            batch = _encode(tokenizer, [texts[i] for i in idx.tolist()], config.max_seq_length)
            batch = {k: v.to(device) for k, v in batch.items()}
            out = model(**batch, labels=labels[idx].to(device))
            out.loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            total_loss += float(out.loss) * len(idx)
        message = f"epoch {epoch + 1}/{config.epochs} loss {total_loss / n:.4f}"
        if dev:
            scorer = NeuralScorer(tokenizer, model, config, device)
            scores = torch.tensor(scorer.score_texts([i.masked_text for i in dev]))
            dev_labels = torch.tensor([i.label for i in dev])
            message += f" dev F1 {_f1((scores >= 0.5).long(), dev_labels):.3f}"
        print(message, flush=True)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir / "encoder")
    tokenizer.save_pretrained(out_dir / "encoder")
    config.save(out_dir)
    return out_dir


class NeuralScorer:
    """Frozen model scoring masked texts; output is P(label=1)."""

    def __init__(self, tokenizer, model, config: ScorerConfig, device: str = "cpu"):
        self.tokenizer = tokenizer
        self.model = model.to(device).eval()
        self.config = config
        self.device = device

    @classmethod
    def load(cls, model_dir, device: str | None = None) -> "NeuralScorer":
        config = ScorerConfig.load(model_dir)
        encoder_dir = str(Path(model_dir) / "encoder")
        tokenizer = AutoTokenizer.from_pretrained(encoder_dir)
        model = AutoModelForSequenceClassification.from_pretrained(encoder_dir)
        if device is None:
            device = "cuda" if torch.cuda.is_available() else "cpu"
        return cls(tokenizer, model, config, device)

    def score_texts(self, texts) -> list[float]:
        texts = list(texts)
        scores: list[float] = []
        with torch.no_grad():
            for start in range(0, len(texts), self.config.batch_size):
                batch = _encode(
                    self.tokenizer,
                    texts[start : start + self.config.batch_size],
                    self.config.max_seq_length,
                )
                batch = {k: v.to(self.device) for k, v in batch.items()}
                logits = self.model(**batch).logits
                scores.extend(torch.softmax(logits, dim=1)[:, 1].tolist())
        return scores
