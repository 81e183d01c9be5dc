"""Evidence admission, aggregation into interaction records, and snapshots.

The store is built once from an admission stream and then frozen; builds are
permutation-invariant so admissions can be produced concurrently and merged
in any order. Snapshots are plain-text directories (ndjson + manifest with
SHA-256 checksums) so published data stays greppable and diffable.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple

from .catalog import SUPPLEMENT, AgentEntity, Catalog
from .corpus import PaperRecord, StudyFlags
from .errors import SnapshotError

SNAPSHOT_VERSION = 1

REJECT_BELOW_THRESHOLD = "below-threshold"
REJECT_BLOCKLISTED = "blocklisted"
REJECT_SELF_PAIR = "self-pair"
REJECT_NO_SUPPLEMENT = "no-supplement"


class Rejection(NamedTuple):
    reason: str


@dataclass(frozen=True)
class PaperMeta:
    title: str = ""
    authors: tuple[str, ...] = ()
    venue: str = ""
    year: int | None = None
    flags: StudyFlags = StudyFlags()

    @classmethod
    def from_record(cls, record: PaperRecord) -> "PaperMeta":
        return cls(
            title=record.title,
            authors=record.authors,
            venue=record.venue,
            year=record.year,
            flags=record.study_flags(),
        )


@dataclass(frozen=True)
class EvidenceSpan:
    start: int
    end: int
    surface: str
    cui: str


@dataclass(frozen=True)
class EvidenceSentence:
    paper_id: str
    sentence_index: int
    text: str
    arg1: EvidenceSpan
    arg2: EvidenceSpan
    cui_a: str
    cui_b: str
    score: float
    paper: PaperMeta = PaperMeta()


class SpanBlocklist:
    """(surface, cui) pairs suppressed as known NER/linking mistakes.

    File format: ``surface<TAB>cui`` per line, ``#`` comments allowed.
    Surface matching is case-insensitive.
    """

    def __init__(self, pairs=()):
        self._pairs = {(surface.strip().lower(), cui) for surface, cui in pairs}

    def __len__(self):
        return len(self._pairs)

    def __contains__(self, pair) -> bool:
        surface, cui = pair
        return (surface.strip().lower(), cui) in self._pairs

    @classmethod
    def load(cls, path) -> "SpanBlocklist":
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                surface, _, cui = line.partition("\t")
                if not cui:
                    raise SnapshotError(f"bad blocklist line (need surface<TAB>cui): {line!r}")
                pairs.append((surface, cui.strip()))
        return cls(pairs)


def interaction_key(cui_x: str, cui_y: str, catalog: Catalog | None = None) -> str:
    """Canonical unordered-pair id: smaller CUI, hyphen, larger CUI."""
    if catalog is not None:
        cui_x = catalog.canonical_cui(cui_x)
        cui_y = catalog.canonical_cui(cui_y)
    if cui_x == cui_y:
        raise ValueError(f"pair collapses to a single canonical cui {cui_x!r}")
    a, b = sorted((cui_x, cui_y))
    return f"{a}-{b}"


def admit_evidence(
    candidate: dict,
    score: float,
    tau: float,
    blocklist: SpanBlocklist,
    catalog: Catalog,
) -> EvidenceSentence | Rejection:
    """Gate one scored candidate into the evidence stream.

    ``candidate`` is a dict in the candidate-dump format. Checks run in
    order: threshold, blocklist, self-pair, supplement membership.
    """
    if score < tau:
        return Rejection(REJECT_BELOW_THRESHOLD)
    text = candidate["text"]
    spans = []
    for key in ("arg1", "arg2"):
        arg = candidate[key]
        spans.append(
            EvidenceSpan(
                start=arg["start"],
                end=arg["end"],
                surface=text[arg["start"] : arg["end"]],
                cui=arg["cui"],
            )
        )
    for span in spans:
        if (span.surface, span.cui) in blocklist:
            return Rejection(REJECT_BLOCKLISTED)
    canon = [catalog.canonical_cui(span.cui) for span in spans]
    if canon[0] == canon[1]:
        return Rejection(REJECT_SELF_PAIR)
    if all(catalog.classify_agent(c) != SUPPLEMENT for c in canon):
        return Rejection(REJECT_NO_SUPPLEMENT)
    cui_a, cui_b = sorted(canon)
    return EvidenceSentence(
        paper_id=candidate["paper_id"],
        sentence_index=candidate["sentence_index"],
        text=text,
        arg1=spans[0],
        arg2=spans[1],
        cui_a=cui_a,
        cui_b=cui_b,
        score=float(score),
    )


def _rank_key(ev: EvidenceSentence):
    flags = ev.paper.flags
    return (
        flags.retracted,
        0 if flags.clinical_trial else 1,
        0 if flags.human else 1,
        0 if ev.paper.year is not None else 1,
        -(ev.paper.year or 0),
        ev.paper_id,
        ev.sentence_index,
    )


def rank_evidence(evidence) -> list[EvidenceSentence]:
    """Order evidence by study quality then recency.

    Non-retracted before retracted, clinical trials first, human studies
    first, newer years first (absent years last), then paper_id and
    sentence_index as deterministic tie-breaks. The key is a strict total
    order within one interaction record, so ranking is permutation-invariant.
    """
    return sorted(evidence, key=_rank_key)


@dataclass(frozen=True)
class InteractionRecord:
    interaction_id: str
    cui_a: str
    cui_b: str
    evidence: tuple[EvidenceSentence, ...]

    @property
    def evidence_count(self) -> int:
        return len(self.evidence)


class Store:
    """Frozen aggregation of interaction records plus the catalog they cite."""

    def __init__(self, records: dict[str, InteractionRecord], catalog: Catalog,
                 tau: float, manifest: dict | None = None):
        self.records = dict(sorted(records.items()))
        self.catalog = catalog
        self.tau = tau
        self.manifest = manifest or {}
        self._by_agent: dict[str, list[tuple[str, str, int]]] = {}
        for rec in self.records.values():
            for cui, partner in ((rec.cui_a, rec.cui_b), (rec.cui_b, rec.cui_a)):
                self._by_agent.setdefault(cui, []).append(
                    (partner, rec.interaction_id, rec.evidence_count)
                )
        for entries in self._by_agent.values():
            entries.sort(key=lambda e: (-e[2], e[0]))

    def __len__(self):
        return len(self.records)

    @property
    def evidence_total(self) -> int:
        return sum(rec.evidence_count for rec in self.records.values())

    def interactions_for(self, canonical_cui: str) -> list[tuple[str, str, int]]:
        """(partner_cui, interaction_id, evidence_count), most evidence first."""
        return list(self._by_agent.get(canonical_cui, []))

    def interactions_count(self, canonical_cui: str) -> int:
        return len(self._by_agent.get(canonical_cui, []))


def build_store(
    admitted,
    papers: dict[str, PaperRecord],
    catalog: Catalog,
    tau: float,
) -> Store:
    """Aggregate admitted evidence into one record per interaction.

    Duplicate (paper_id, sentence_index, interaction pair) admissions
    deduplicate to one evidence item; paper metadata is attached here.
    """
    by_pair: dict[str, dict[tuple, EvidenceSentence]] = {}
    for ev in admitted:
        key = interaction_key(ev.cui_a, ev.cui_b)
        record = papers.get(ev.paper_id)
        meta = PaperMeta.from_record(record) if record else PaperMeta()
        ev = replace(ev, paper=meta)
        by_pair.setdefault(key, {})[(ev.paper_id, ev.sentence_index)] = ev
    records = {
        key: InteractionRecord(
            interaction_id=key,
            cui_a=key.split("-")[0],
            cui_b=key.split("-")[1],
            evidence=tuple(rank_evidence(group.values())),
        )
        for key, group in by_pair.items()
    }
    return Store(records, catalog, tau)


def find_blocklisted(store: Store, blocklist: SpanBlocklist) -> list[tuple[str, str, str]]:
    """Blocklisted (interaction_id, surface, cui) spans present in a store; expect []."""
    bad = []
    for rec in store.records.values():
        for ev in rec.evidence:
            for span in (ev.arg1, ev.arg2):
                if (span.surface, span.cui) in blocklist:
                    bad.append((rec.interaction_id, span.surface, span.cui))
    return bad


# --- intermediate evidence files (classify -> build) ---------------------


def evidence_to_wire(ev: EvidenceSentence) -> dict:
    """Evidence row without paper metadata (attached later by build)."""
    return {
        "paper_id": ev.paper_id,
        "sentence_index": ev.sentence_index,
        "text": ev.text,
        "score": ev.score,
        "cui_a": ev.cui_a,
        "cui_b": ev.cui_b,
        "arg1": ev.arg1.__dict__.copy(),
        "arg2": ev.arg2.__dict__.copy(),
    }


def evidence_from_wire(obj: dict) -> EvidenceSentence:
    return EvidenceSentence(
        paper_id=obj["paper_id"],
        sentence_index=obj["sentence_index"],
        text=obj["text"],
        arg1=EvidenceSpan(**obj["arg1"]),
        arg2=EvidenceSpan(**obj["arg2"]),
        cui_a=obj["cui_a"],
        cui_b=obj["cui_b"],
        score=obj["score"],
    )


def write_evidence_file(evidence, fh) -> int:
    n = 0
    for ev in evidence:
        fh.write(json.dumps(evidence_to_wire(ev), ensure_ascii=False) + "\n")
        n += 1
    return n


def read_evidence_file(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield evidence_from_wire(json.loads(line))


# --- snapshot serialization ---------------------------------------------


def _evidence_to_dict(ev: EvidenceSentence) -> dict:
    return {
        "paper_id": ev.paper_id,
        "sentence_index": ev.sentence_index,
        "text": ev.text,
        "score": ev.score,
        "arg1": ev.arg1.__dict__.copy(),
        "arg2": ev.arg2.__dict__.copy(),
        "paper": {
            "title": ev.paper.title,
            "authors": list(ev.paper.authors),
            "venue": ev.paper.venue,
            "year": ev.paper.year,
            **ev.paper.flags.as_dict(),
        },
    }


def _evidence_from_dict(obj: dict, cui_a: str, cui_b: str) -> EvidenceSentence:
    paper = obj["paper"]
    return EvidenceSentence(
        paper_id=obj["paper_id"],
        sentence_index=obj["sentence_index"],
        text=obj["text"],
        arg1=EvidenceSpan(**obj["arg1"]),
        arg2=EvidenceSpan(**obj["arg2"]),
        cui_a=cui_a,
        cui_b=cui_b,
        score=obj["score"],
        paper=PaperMeta(
            title=paper["title"],
            authors=tuple(paper["authors"]),
            venue=paper["venue"],
            year=paper["year"],
            flags=StudyFlags(
                retracted=paper["retracted"],
                clinical_trial=paper["clinical_trial"],
                case_report=paper["case_report"],
                human=paper["human"],
                animal=paper["animal"],
            ),
        ),
    )


def record_to_dict(rec: InteractionRecord) -> dict:
    return {
        "interaction_id": rec.interaction_id,
        "cui_a": rec.cui_a,
        "cui_b": rec.cui_b,
        "evidence_count": rec.evidence_count,
        "evidence": [_evidence_to_dict(ev) for ev in rec.evidence],
    }


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def export_snapshot(store: Store, path) -> dict:
    """Write the snapshot directory; returns the manifest."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)

    agents_path = out / "agents.jsonl"
    with open(agents_path, "w", encoding="utf-8") as fh:
        for cui in sorted(store.catalog.entities):
            ent = store.catalog.entities[cui]
            fh.write(
                json.dumps(
                    {
                        "cui": ent.cui,
                        "name": ent.name,
                        "kind": ent.kind,
                        "synonyms": list(ent.synonyms),
                        "trade_names": list(ent.trade_names),
                        "definition": ent.definition,
                        "canonical": store.catalog.canonical_cui(ent.cui),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )

    interactions_path = out / "interactions.jsonl"
    with open(interactions_path, "w", encoding="utf-8") as fh:
        for rec in store.records.values():
            fh.write(json.dumps(record_to_dict(rec), ensure_ascii=False) + "\n")

    manifest = {
        "format_version": SNAPSHOT_VERSION,
        "built_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "tau": store.tau,
        "counts": {
            "agents": len(store.catalog),
            "interactions": len(store.records),
            "evidence": store.evidence_total,
        },
        "checksums": {
            "agents.jsonl": _sha256(agents_path),
            "interactions.jsonl": _sha256(interactions_path),
        },
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest


def load_snapshot(path) -> Store:
    """Load and verify a snapshot directory."""
    root = Path(path)
    try:
        with open(root / "manifest.json", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError as exc:
        raise SnapshotError(f"no manifest.json under {root}") from exc
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"manifest.json is not valid JSON: {exc}") from exc

    version = manifest.get("format_version")
    if version != SNAPSHOT_VERSION:
        raise SnapshotError(
            f"unsupported snapshot version {version!r} (supported: {SNAPSHOT_VERSION})"
        )
    for name, expected in manifest.get("checksums", {}).items():
        actual = _sha256(root / name)
        if actual != expected:
            raise SnapshotError(f"checksum mismatch for {name}: {actual} != {expected}")

    entities: dict[str, AgentEntity] = {}
    canonical: dict[str, str] = {}
    with open(root / "agents.jsonl", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            entities[obj["cui"]] = AgentEntity(
                cui=obj["cui"],
                name=obj["name"],
                synonyms=tuple(obj["synonyms"]),
                trade_names=tuple(obj["trade_names"]),
                kind=obj["kind"],
                definition=obj.get("definition"),
            )
            if obj["canonical"] != obj["cui"]:
                canonical[obj["cui"]] = obj["canonical"]
    for target in set(canonical.values()):
        canonical[target] = target

    records: dict[str, InteractionRecord] = {}
    with open(root / "interactions.jsonl", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            records[obj["interaction_id"]] = InteractionRecord(
                interaction_id=obj["interaction_id"],
                cui_a=obj["cui_a"],
                cui_b=obj["cui_b"],
                evidence=tuple(
                    _evidence_from_dict(ev, obj["cui_a"], obj["cui_b"])
                    for ev in obj["evidence"]
                ),
            )
    return Store(records, Catalog(entities, canonical), manifest.get("tau", 0.5), manifest)
