"""Normalized labeled instances and the binary label collapse.

Normalized instance files are ndjson with keys ``instance_id``,
``masked_text``, ``label`` (0|1), ``source``, ``split``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import ParseError, ValidationError
from ..pipeline import ARG1, ARG2

SPLITS = ("train", "dev", "test")

# Negative encodings observed across dataset distributions. Everything else
# (mechanism, advise, effect, int, ...) names some interaction type, hence 1.
NEGATIVE_TYPES = {"", "none", "false", "no", "0", "negative", "null"}


def collapse_label(interaction_type: str | None) -> int:
    """Collapse a multi-class interaction type to the binary detection label."""
    if interaction_type is None:
        return 0
    return 0 if interaction_type.strip().lower() in NEGATIVE_TYPES else 1


def validate_masked_text(masked_text: str) -> None:
    if masked_text.count(ARG1) != 1 or masked_text.count(ARG2) != 1:
        raise ValidationError(
            f"masked_text must contain exactly one {ARG1} and one {ARG2}: "
            f"{masked_text!r}"
        )


@dataclass(frozen=True)
class LabeledInstance:
    instance_id: str
    masked_text: str
    label: int
    source: str
    split: str

    def __post_init__(self):
        validate_masked_text(self.masked_text)
        if self.label not in (0, 1):
            raise ValidationError(f"label must be 0 or 1, got {self.label!r}")
        if self.split not in SPLITS:
            raise ValidationError(f"split must be one of {SPLITS}, got {self.split!r}")


def load_labeled_instances(path) -> list[LabeledInstance]:
    instances = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line_no) from exc
            try:
                instances.append(
                    LabeledInstance(
                        instance_id=str(obj["instance_id"]),
                        masked_text=obj["masked_text"],
                        label=obj["label"],
                        source=obj.get("source", ""),
                        split=obj.get("split", "train"),
                    )
                )
            except KeyError as exc:
                raise ParseError(f"missing key {exc}", line_no) from exc
            except ValidationError as exc:
                raise ValidationError(f"line {line_no}: {exc}") from exc
    return instances


def write_labeled_instances(instances, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(
                json.dumps(
                    {
                        "instance_id": inst.instance_id,
                        "masked_text": inst.masked_text,
                        "label": inst.label,
                        "source": inst.source,
                        "split": inst.split,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def split_counts(instances) -> dict[str, int]:
    counts = {s: 0 for s in SPLITS}
    for inst in instances:
        counts[inst.split] += 1
    return counts


def positive_rate(instances) -> float:
    if not instances:
        return 0.0
    return sum(inst.label for inst in instances) / len(instances)
