"""Corpus loading: newline-delimited JSON paper records and study flags.

Corpus files carry one JSON object per line with keys ``paper_id`` (required),
``title``, ``abstract``, ``authors``, ``venue``, ``year``, ``mesh``,
``pub_types``. Unknown keys are ignored; absent optional keys default to empty
values. Large corpora always contain dirt, so streaming skips and counts bad
lines instead of aborting.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError

YEAR_MIN = 1800
YEAR_MAX = 2100

# MeSH descriptors / publication types used to derive study flags. The corpus
# vocabulary follows standard Medline conventions.
_RETRACTED_PUB_TYPE = "Retracted Publication"
_TRIAL_PREFIX = "Clinical Trial"
_RCT = "Randomized Controlled Trial"
_CASE_REPORTS = "Case Reports"
_MESH_HUMANS = "Humans"
_MESH_ANIMALS = "Animals"


@dataclass(frozen=True)
class StudyFlags:
    retracted: bool = False
    clinical_trial: bool = False
    case_report: bool = False
    human: bool = False
    animal: bool = False

    def as_dict(self) -> dict:
        return {
            "retracted": self.retracted,
            "clinical_trial": self.clinical_trial,
            "case_report": self.case_report,
            "human": self.human,
            "animal": self.animal,
        }


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    title: str = ""
    abstract: str = ""
    authors: tuple[str, ...] = ()
    venue: str = ""
    year: int | None = None
    mesh: tuple[str, ...] = ()
    pub_types: tuple[str, ...] = ()

    def study_flags(self) -> StudyFlags:
        return derive_study_flags(self.mesh, self.pub_types)


def derive_study_flags(mesh, pub_types) -> StudyFlags:
    """Map MeSH descriptors and publication types to study flags.

    Pure function; unknown descriptors are ignored. A paper tagged with both
    "Humans" and "Animals" counts as human only, so the ranking preference for
    human studies stays meaningful.
    """
    pub_types = list(pub_types)
    mesh = list(mesh)
    human = _MESH_HUMANS in mesh
    return StudyFlags(
        retracted=_RETRACTED_PUB_TYPE in pub_types,
        clinical_trial=any(p.startswith(_TRIAL_PREFIX) or p == _RCT for p in pub_types),
        case_report=_CASE_REPORTS in pub_types,
        human=human,
        animal=_MESH_ANIMALS in mesh and not human,
    )


def _string_list(obj, key, line_no):
    val = obj.get(key, [])
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise ParseError(f"field {key!r} must be an array of strings", line_no)
    return tuple(val)


def parse_paper_record(line: str, line_no: int | None = None) -> PaperRecord:
    """Parse one corpus line into a validated PaperRecord."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", line_no) from exc
    if not isinstance(obj, dict):
        raise ParseError("record is not a JSON object", line_no)

    paper_id = obj.get("paper_id")
    if not isinstance(paper_id, str) or not paper_id:
        raise ValidationError(f"line {line_no}: missing or empty paper_id")

    year = obj.get("year")
    if year is not None:
        if not isinstance(year, int) or isinstance(year, bool):
            raise ParseError("field 'year' must be an integer", line_no)
        if not YEAR_MIN <= year <= YEAR_MAX:
            raise ValidationError(
                f"line {line_no}: year {year} outside [{YEAR_MIN}, {YEAR_MAX}]"
            )

    title = obj.get("title", "")
    abstract = obj.get("abstract", "")
    venue = obj.get("venue", "")
    for key, val in (("title", title), ("abstract", abstract), ("venue", venue)):
        if not isinstance(val, str):
            raise ParseError(f"field {key!r} must be a string", line_no)

    return PaperRecord(
        paper_id=paper_id,
        title=title,
        abstract=abstract,
        authors=_string_list(obj, "authors", line_no),
        venue=venue,
        year=year,
        mesh=_string_list(obj, "mesh", line_no),
        pub_types=_string_list(obj, "pub_types", line_no),
    )


@dataclass
class SkipLog:
    """Thread-safe counter for records skipped during a corpus load."""

    count: int = 0
    reasons: list[str] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add(self, reason: str) -> None:
        with self._lock:
            self.count += 1
            self.reasons.append(reason)


class CorpusStream:
    """Iterate PaperRecords from an ndjson file, skipping bad lines.

    Duplicate paper_ids are rejected (first occurrence wins) and counted as
    skips. The ``skipped`` log is valid once iteration finishes.
    """

    def __init__(self, path):
        self.path = path
        self.skipped = SkipLog()
        self._seen: set[str] = set()

    def __iter__(self):
        with open(self.path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = parse_paper_record(line, line_no)
                except (ParseError, ValidationError) as exc:
                    self.skipped.add(str(exc))
                    continue
                if record.paper_id in self._seen:
                    self.skipped.add(
                        f"line {line_no}: duplicate paper_id {record.paper_id!r}"
                    )
                    continue
                self._seen.add(record.paper_id)
                yield record


def stream_corpus(path) -> CorpusStream:
    """Open a corpus file for streaming. Unreadable paths raise OSError."""
    with open(path, encoding="utf-8"):
        pass
    return CorpusStream(path)


def load_corpus_index(path) -> tuple[dict[str, PaperRecord], SkipLog]:
    """Load a whole corpus into a paper_id-keyed dict (for metadata joins)."""
    stream = stream_corpus(path)
    index = {rec.paper_id: rec for rec in stream}
    return index, stream.skipped
