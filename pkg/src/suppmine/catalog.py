"""Curated supplement/drug catalog: classification, clusters, name matching.

The catalog is loaded once from two files and then immutable:

* agents file — ndjson, one entity per line: ``cui``, ``name``, ``synonyms``
  (array), ``trade_names`` (array, optional), ``kind`` ("supplement"|"drug"),
  ``definition`` (optional).
* clusters file — two-column TSV ``member_cui<TAB>canonical_cui`` merging
  redundant entity variants under one canonical CUI.

A CUI listed under both kinds is categorized exclusively as a supplement; the
two rows are merged. Identical-kind duplicates are rejected.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import NamedTuple

from .automaton import PatternAutomaton, fold_text
from .errors import CatalogLookupError, ParseError, ValidationError

CUI_RE = re.compile(r"^C[0-9]+$")
SUPPLEMENT = "supplement"
DRUG = "drug"

# Minimum normalized-Levenshtein similarity for a fuzzy name hit.
FUZZY_THRESHOLD = 0.8


@dataclass(frozen=True)
class AgentEntity:
    cui: str
    name: str
    synonyms: tuple[str, ...] = ()
    trade_names: tuple[str, ...] = ()
    kind: str = SUPPLEMENT
    definition: str | None = None


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance (insert/delete/substitute, all cost 1)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _normalize_name(s: str) -> str:
    return " ".join(fold_text(s).split())


def name_similarity(a: str, b: str) -> float:
    """Normalized Levenshtein similarity on lowercase, whitespace-collapsed strings."""
    na, nb = _normalize_name(a), _normalize_name(b)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(na, nb) / longest


class FuzzyMatch(NamedTuple):
    candidate: str
    score: float
    matched: bool


def fuzzy_match_name(query: str, candidates) -> FuzzyMatch:
    """Best candidate by name_similarity; ties break lexicographically.

    ``matched`` is False when even the best score falls below FUZZY_THRESHOLD.
    """
    candidates = sorted(candidates)
    if not candidates:
        raise ValueError("fuzzy_match_name requires at least one candidate")
    best = None
    best_score = -1.0
    for cand in candidates:
        score = name_similarity(query, cand)
        if score > best_score:
            best, best_score = cand, score
    return FuzzyMatch(best, best_score, best_score >= FUZZY_THRESHOLD)


class QueryMatch(NamedTuple):
    entity: AgentEntity
    match_kind: str  # name | synonym | trade_name
    score: float


# Lower value wins when one query string hits several surface roles.
_MATCH_KIND_RANK = {"name": 0, "synonym": 1, "trade_name": 2}


class MentionDictionary:
    """Surface-form index over catalog names, synonyms, and trade names.

    Matching is case-insensitive and token-boundary aligned; single-character
    and purely numeric surfaces are excluded. One surface may map to several
    CUIs; the tie-break (supplement first, then smallest CUI) is baked into
    the per-pattern CUI ordering.
    """

    def __init__(self, surface_cuis: dict[str, list[str]]):
        self.surface_cuis = surface_cuis
        self._surfaces = sorted(surface_cuis)
        self._automaton = PatternAutomaton(self._surfaces) if self._surfaces else None

    def __len__(self):
        return len(self._surfaces)

    def __contains__(self, surface: str) -> bool:
        return _normalize_name(surface) in self.surface_cuis

    def lookup(self, surface: str) -> list[str]:
        return self.surface_cuis.get(_normalize_name(surface), [])

    @staticmethod
    def _is_boundary(text: str, pos: int) -> bool:
        if pos == 0 or pos == len(text):
            return True
        return text[pos - 1].isalnum() != text[pos].isalnum()

    def match_spans(self, text: str) -> list[tuple[int, int, str]]:
        """Non-overlapping leftmost-longest matches as (start, end, cui)."""
        if self._automaton is None:
            return []
        raw = self._automaton.scan(text)
        aligned = [
            (s, e, pid)
            for s, e, pid in raw
            if self._is_boundary(text, s) and self._is_boundary(text, e)
        ]
        aligned.sort(key=lambda m: (m[0], -(m[1] - m[0])))
        picked = []
        last_end = 0
        for s, e, pid in aligned:
            if s >= last_end:
                cui = self.surface_cuis[self._surfaces[pid]][0]
                picked.append((s, e, cui))
                last_end = e
        return picked


class Catalog:
    """Immutable view over the loaded entities and cluster map."""

    def __init__(self, entities: dict[str, AgentEntity], canonical: dict[str, str]):
        self.entities = entities
        self._canonical = canonical
        self._surface_index: dict[str, dict[str, str]] | None = None

    def __len__(self):
        return len(self.entities)

    def __contains__(self, cui: str) -> bool:
        return cui in self.entities

    def get(self, cui: str) -> AgentEntity | None:
        return self.entities.get(cui)

    def classify_agent(self, cui: str) -> str | None:
        ent = self.entities.get(cui)
        return ent.kind if ent else None

    def canonical_cui(self, cui: str) -> str:
        if cui not in self.entities:
            raise CatalogLookupError(f"unknown cui {cui!r}")
        return self._canonical.get(cui, cui)

    def cluster_members(self, canonical: str) -> list[str]:
        return sorted(m for m, c in self._canonical.items() if c == canonical)

    def _surfaces(self) -> dict[str, dict[str, str]]:
        # normalized surface -> {cui: match_kind}
        if self._surface_index is None:
            index: dict[str, dict[str, str]] = {}
            for ent in self.entities.values():
                for kind, names in (
                    ("name", [ent.name]),
                    ("synonym", ent.synonyms),
                    ("trade_name", ent.trade_names),
                ):
                    for raw in names:
                        surf = _normalize_name(raw)
                        if not surf:
                            continue
                        slot = index.setdefault(surf, {})
                        prev = slot.get(ent.cui)
                        if prev is None or _MATCH_KIND_RANK[kind] < _MATCH_KIND_RANK[prev]:
                            slot[ent.cui] = kind
            self._surface_index = index
        return self._surface_index

    def resolve_query_name(self, name: str) -> list[QueryMatch]:
        """Entities matching a user query: exact hits first, then fuzzy.

        Total over arbitrary input; an empty query yields an empty list.
        Trade-name hits resolve to the owning ingredient entity.
        """
        q = _normalize_name(name)
        if not q:
            return []
        surfaces = self._surfaces()
        results: dict[str, QueryMatch] = {}
        for cui, kind in surfaces.get(q, {}).items():
            results[cui] = QueryMatch(self.entities[cui], kind, 1.0)
        for surf, owners in surfaces.items():
            score = name_similarity(q, surf)
            if score < FUZZY_THRESHOLD:
                continue
            for cui, kind in owners.items():
                prev = results.get(cui)
                if prev is None or score > prev.score or (
                    score == prev.score
                    and _MATCH_KIND_RANK[kind] < _MATCH_KIND_RANK[prev.match_kind]
                ):
                    results[cui] = QueryMatch(self.entities[cui], kind, score)
        return sorted(
            results.values(),
            key=lambda m: (-m.score, _MATCH_KIND_RANK[m.match_kind], m.entity.name.lower(), m.entity.cui),
        )


def _merge_entities(a: AgentEntity, b: AgentEntity) -> AgentEntity:
    # Supplement precedence: the supplement row names the merged entity.
    supp, drug = (a, b) if a.kind == SUPPLEMENT else (b, a)
    synonyms = list(supp.synonyms)
    for extra in [drug.name, *drug.synonyms]:
        if extra != supp.name and extra not in synonyms:
            synonyms.append(extra)
    trade_names = list(supp.trade_names)
    for tn in drug.trade_names:
        if tn not in trade_names:
            trade_names.append(tn)
    return AgentEntity(
        cui=supp.cui,
        name=supp.name,
        synonyms=tuple(synonyms),
        trade_names=tuple(trade_names),
        kind=SUPPLEMENT,
        definition=supp.definition or drug.definition,
    )


def _parse_agent_line(line: str, line_no: int) -> AgentEntity:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", line_no) from exc
    cui = obj.get("cui")
    if not isinstance(cui, str) or not CUI_RE.match(cui):
        raise ValidationError(f"line {line_no}: bad cui {cui!r}")
    kind = obj.get("kind")
    if kind not in (SUPPLEMENT, DRUG):
        raise ValidationError(f"line {line_no}: bad kind {kind!r} for {cui}")
    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise ValidationError(f"line {line_no}: missing name for {cui}")
    definition = obj.get("definition")
    if definition is not None and not isinstance(definition, str):
        raise ValidationError(f"line {line_no}: bad definition for {cui}")
    return AgentEntity(
        cui=cui,
        name=name,
        synonyms=tuple(obj.get("synonyms", [])),
        trade_names=tuple(obj.get("trade_names", [])),
        kind=kind,
        definition=definition,
    )


def _load_clusters(path, entities) -> dict[str, str]:
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected member<TAB>canonical", line_no)
            member, canonical = parts[0].strip(), parts[1].strip()
            for cui in (member, canonical):
                if cui not in entities:
                    raise ValidationError(
                        f"line {line_no}: cluster cui {cui!r} absent from agents file"
                    )
            if member in raw and raw[member] != canonical:
                raise ValidationError(
                    f"line {line_no}: member {member!r} mapped to two canonicals"
                )
            raw[member] = canonical

    # Resolve chains transitively; reject cycles.
    resolved: dict[str, str] = {}
    for start in raw:
        seen = [start]
        cur = start
        while cur in raw and raw[cur] != cur:
            cur = raw[cur]
            if cur in seen:
                raise ValidationError(f"cycle in cluster map involving {cur!r}")
            seen.append(cur)
        for node in seen:
            resolved[node] = cur
        resolved[cur] = cur
    return resolved


def load_catalog(agents_path, clusters_path=None) -> Catalog:
    """Load and validate the catalog; see module docstring for file formats."""
    entities: dict[str, AgentEntity] = {}
    with open(agents_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            ent = _parse_agent_line(line, line_no)
            prev = entities.get(ent.cui)
            if prev is None:
                entities[ent.cui] = ent
            elif prev.kind != ent.kind:
                entities[ent.cui] = _merge_entities(prev, ent)
            else:
                raise ValidationError(
                    f"line {line_no}: duplicate cui {ent.cui!r} with kind {ent.kind!r}"
                )
    canonical = _load_clusters(clusters_path, entities) if clusters_path else {}
    return Catalog(entities, canonical)


def build_mention_dictionary(catalog: Catalog) -> MentionDictionary:
    """Index every usable surface form of the catalog for mention detection."""
    surface_cuis: dict[str, set[str]] = {}
    for ent in catalog.entities.values():
        for raw in (ent.name, *ent.synonyms, *ent.trade_names):
            surf = _normalize_name(raw)
            if len(surf) < 2 or surf.isdigit():
                continue
            surface_cuis.setdefault(surf, set()).add(ent.cui)

    def preference(cui: str):
        return (0 if catalog.classify_agent(cui) == SUPPLEMENT else 1, cui)

    ordered = {
        surf: sorted(cuis, key=preference) for surf, cuis in surface_cuis.items()
    }
    return MentionDictionary(ordered)
