"""Reader for normalized labeled-instance files (ndjson).

Keys per line: instance_id, masked_text, label (0|1), source, split. This is
the engine's published file format; the package depends on the format only,
not on the engine's code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Instance:
    instance_id: str
    masked_text: str
    label: int
    source: str = ""
    split: str = "train"


def load_instances(path, split: str | None = None) -> list[Instance]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                inst = Instance(
                    instance_id=str(obj["instance_id"]),
                    masked_text=obj["masked_text"],
                    label=int(obj["label"]),
                    source=obj.get("source", ""),
                    split=obj.get("split", "train"),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad instance line: {exc}") from exc
            if inst.label not in (0, 1):
                raise ValueError(f"{path}:{line_no}: label must be 0 or 1")
            if split is None or inst.split == split:
                out.append(inst)
    return out
