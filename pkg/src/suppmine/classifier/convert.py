"""Converter from annotated interaction XML corpora to normalized instances.

Handles the shared XML schema of the two labeled drug-interaction corpora
(sentence elements carrying ``entity`` spans with inclusive ``charOffset``
ranges and labeled ``pair`` elements). Multi-class interaction types are
collapsed to binary detection labels; whatever negative encoding appears
("false", "none", 0, absent type) maps to 0.

Train/test splits are preserved from the source directory layout; a dev set
is carved out of train by seeded sampling so runs are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from math import comb
from pathlib import Path
from xml.etree import ElementTree

from ..errors import ParseError, ValidationError
from ..pipeline import mask_text
from .instances import LabeledInstance, collapse_label

# Sentences with more total pairwise entity combinations than this are
# excluded from the labeled data, mirroring the pipeline's candidate cap.
TRAINING_PAIR_CAP = 100

DEV_SEED = 13

_TRUE_VALUES = ("true", "1", "yes")
_FALSE_VALUES = ("false", "0", "no")


@dataclass
class ConversionStats:
    sentences: int = 0
    capped_sentences: int = 0
    skipped_pairs: int = 0
    files: int = 0
    by_source: dict = field(default_factory=dict)


def parse_char_offset(raw: str) -> tuple[int, int]:
    """First continuous segment of a charOffset attribute, end made exclusive."""
    first = raw.split(";")[0]
    start_s, _, end_s = first.partition("-")
    start, end = int(start_s), int(end_s)
    return start, end + 1


def pair_label(ddi_attr: str | None, type_attr: str | None) -> int:
    if ddi_attr is not None:
        flag = ddi_attr.strip().lower()
        if flag in _TRUE_VALUES:
            return 1
        if flag in _FALSE_VALUES:
            return 0
    return collapse_label(type_attr)


def infer_source(path, dataset: str) -> str:
    if dataset == "ddi2013":
        lowered = str(path).lower()
        if "drugbank" in lowered:
            return "ddi2013-drugbank"
        if "medline" in lowered:
            return "ddi2013-medline"
        return "ddi2013"
    return dataset


def _xml_files(paths) -> list[Path]:
    files: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.rglob("*.xml")))
        else:
            files.append(p)
    return sorted(files)


def _sentence_instances(sent, source: str, split: str, stats: ConversionStats):
    text = sent.get("text") or ""
    entities = {}
    for ent in sent.findall("entity"):
        offset = ent.get("charOffset")
        if offset is None:
            continue
        try:
            entities[ent.get("id")] = parse_char_offset(offset)
        except ValueError:
            stats.skipped_pairs += 1
            continue
    if comb(len(entities), 2) > TRAINING_PAIR_CAP:
        stats.capped_sentences += 1
        return
    for pair in sent.findall("pair"):
        span1 = entities.get(pair.get("e1"))
        span2 = entities.get(pair.get("e2"))
        if span1 is None or span2 is None:
            stats.skipped_pairs += 1
            continue
        try:
            masked = mask_text(text, span1, span2)
        except ValueError:
            stats.skipped_pairs += 1
            continue
        yield LabeledInstance(
            instance_id=pair.get("id") or f"{sent.get('id')}.{len(entities)}",
            masked_text=masked,
            label=pair_label(pair.get("ddi"), pair.get("type")),
            source=source,
            split=split,
        )


def convert_files(paths, dataset: str, split: str, stats: ConversionStats) -> list[LabeledInstance]:
    instances = []
    for path in _xml_files(paths):
        source = infer_source(path, dataset)
        try:
            root = ElementTree.parse(path).getroot()
        except ElementTree.ParseError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        stats.files += 1
        sentences = root.iter("sentence") if root.tag != "sentence" else [root]
        for sent in sentences:
            stats.sentences += 1
            for inst in _sentence_instances(sent, source, split, stats):
                instances.append(inst)
                stats.by_source[source] = stats.by_source.get(source, 0) + 1
    return instances


def carve_dev(instances, dev_size: int, seed: int = DEV_SEED) -> list[LabeledInstance]:
    """Reassign a seeded sample of train instances to the dev split."""
    train_ids = sorted(i.instance_id for i in instances if i.split == "train")
    if dev_size > len(train_ids):
        raise ValidationError(
            f"dev size {dev_size} exceeds train size {len(train_ids)}"
        )
    rng = random.Random(seed)
    dev_ids = set(rng.sample(train_ids, dev_size))
    return [
        replace(inst, split="dev")
        if inst.split == "train" and inst.instance_id in dev_ids
        else inst
        for inst in instances
    ]


def convert_dataset(
    train_paths,
    test_paths,
    dataset: str,
    dev_size: int = 0,
    seed: int = DEV_SEED,
) -> tuple[list[LabeledInstance], ConversionStats]:
    """Convert one dataset's train/test trees into normalized instances."""
    stats = ConversionStats()
    instances = convert_files(train_paths, dataset, "train", stats)
    instances += convert_files(test_paths, dataset, "test", stats)
    if dev_size:
        instances = carve_dev(instances, dev_size, seed)
    return instances, stats
