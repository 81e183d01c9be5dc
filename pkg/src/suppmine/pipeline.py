"""Abstract text to candidate evidence: sentences, mentions, masked pairs.

Everything here is pure and deterministic, so documents can be processed
concurrently in any order; the mention dictionary is shared read-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from .catalog import SUPPLEMENT, Catalog, MentionDictionary

ARG1 = "[Arg1]"
ARG2 = "[Arg2]"

# Sentences whose total pairwise mention combinations exceed this are skipped
# outright: they are nearly always enumerations, and they blow up cost.
PAIR_CAP = 100

_TERMINATORS = ".!?"

# Preceding-token exceptions: a "." after these never ends a sentence.
ABBREVIATIONS = {
    "e.g.", "i.e.", "vs.", "etc.", "cf.", "ca.", "approx.", "resp.",
    "dr.", "prof.", "mr.", "mrs.", "ms.", "st.",
    "fig.", "figs.", "eq.", "ref.", "refs.", "no.", "al.", "spp.", "inc.",
}


@dataclass(frozen=True)
class Sentence:
    paper_id: str
    sentence_index: int
    text: str
    char_offset: int


@dataclass(frozen=True)
class Mention:
    start: int
    end: int
    surface: str
    cui: str
    kind: str


@dataclass(frozen=True)
class CandidatePair:
    sentence: Sentence
    arg1: Mention
    arg2: Mention
    masked_text: str


def _preceding_token(text: str, dot_pos: int) -> str:
    start = dot_pos
    while start > 0 and (text[start - 1].isalnum() or text[start - 1] == "."):
        start -= 1
    return text[start : dot_pos + 1]


def _split_points(text: str) -> list[int]:
    """Indices one past each sentence terminator that ends a sentence."""
    points = []
    i = 0
    n = len(text)
    while i < n:
        if text[i] not in _TERMINATORS:
            i += 1
            continue
        run_end = i
        while run_end + 1 < n and text[run_end + 1] in _TERMINATORS:
            run_end += 1
        j = run_end + 1
        ws = j
        while ws < n and text[ws].isspace():
            ws += 1
        if ws > j and ws < n and (text[ws].isupper() or text[ws].isdigit()):
            is_abbrev = (
                run_end == i
                and text[i] == "."
                and _preceding_token(text, i).lower() in ABBREVIATIONS
            )
            if not is_abbrev:
                points.append(j)
        i = run_end + 1
    return points


def segment_sentences(abstract: str, paper_id: str) -> list[Sentence]:
    """Rule-based sentence segmentation preserving exact character offsets.

    Splits on ``.``/``!``/``?`` followed by whitespace and an uppercase letter
    or digit, with an abbreviation exception list; decimal points never split
    because no whitespace follows them. Concatenating the sentences with the
    inter-sentence gaps reproduces the abstract exactly.
    """
    sentences = []
    bounds = _split_points(abstract) + [len(abstract)]
    start = 0
    for end in bounds:
        chunk = abstract[start:end]
        lead = len(chunk) - len(chunk.lstrip())
        text = chunk.strip()
        if text:
            sentences.append(
                Sentence(
                    paper_id=paper_id,
                    sentence_index=len(sentences),
                    text=text,
                    char_offset=start + lead,
                )
            )
        start = end
    return sentences


def detect_mentions(
    sentence: Sentence, dictionary: MentionDictionary, catalog: Catalog
) -> list[Mention]:
    """Dictionary mentions in a sentence: leftmost-longest, boundary-aligned."""
    mentions = []
    for start, end, cui in dictionary.match_spans(sentence.text):
        kind = catalog.classify_agent(cui)
        if kind is None:
            continue
        mentions.append(
            Mention(
                start=start,
                end=end,
                surface=sentence.text[start:end],
                cui=cui,
                kind=kind,
            )
        )
    return mentions


def mask_text(text: str, span1: tuple[int, int], span2: tuple[int, int]) -> str:
    """Replace two character spans of ``text`` with [Arg1]/[Arg2] by position.

    The earlier span becomes [Arg1]. All other characters are preserved
    byte-for-byte; scorer backends add their own framing tokens.
    """
    first, second = sorted([span1, span2])
    if not (0 <= first[0] < first[1] <= len(text)) or not (
        0 <= second[0] < second[1] <= len(text)
    ):
        raise ValueError(f"span out of range for text of length {len(text)}")
    if first[1] > second[0]:
        raise ValueError(f"overlapping mention spans {first} and {second}")
    return (
        text[: first[0]]
        + ARG1
        + text[first[1] : second[0]]
        + ARG2
        + text[second[1] :]
    )


def mask_pair(sentence: Sentence, m1: Mention, m2: Mention) -> str:
    """mask_text over two mentions of a sentence."""
    return mask_text(sentence.text, (m1.start, m1.end), (m2.start, m2.end))


def unmask_pair(masked_text: str, surface1: str, surface2: str) -> str:
    """Inverse of mask_pair given the two original surfaces (in text order)."""
    return masked_text.replace(ARG1, surface1, 1).replace(ARG2, surface2, 1)


def generate_candidate_pairs(
    sentence: Sentence, mentions: list[Mention], catalog: Catalog
) -> list[CandidatePair]:
    """All unordered mention pairs eligible as interaction candidates.

    A pair qualifies when at least one member is a supplement and the two
    CUIs remain distinct after canonicalization. Sentences with more than
    PAIR_CAP total pairwise combinations are skipped entirely.
    """
    n = len(mentions)
    if n < 2 or comb(n, 2) > PAIR_CAP:
        return []
    ordered = sorted(mentions, key=lambda m: m.start)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            m1, m2 = ordered[i], ordered[j]
            if m1.kind != SUPPLEMENT and m2.kind != SUPPLEMENT:
                continue
            if catalog.canonical_cui(m1.cui) == catalog.canonical_cui(m2.cui):
                continue
            pairs.append(
                CandidatePair(
                    sentence=sentence,
                    arg1=m1,
                    arg2=m2,
                    masked_text=mask_pair(sentence, m1, m2),
                )
            )
    return pairs


def extract_candidates(records, dictionary: MentionDictionary, catalog: Catalog):
    """Run the full pipeline over an iterable of PaperRecords."""
    for record in records:
        if not record.abstract:
            continue
        for sentence in segment_sentences(record.abstract, record.paper_id):
            mentions = detect_mentions(sentence, dictionary, catalog)
            if len(mentions) < 2:
                continue
            yield from generate_candidate_pairs(sentence, mentions, catalog)


def candidate_to_dict(pair: CandidatePair) -> dict:
    return {
        "paper_id": pair.sentence.paper_id,
        "sentence_index": pair.sentence.sentence_index,
        "text": pair.sentence.text,
        "arg1": {"start": pair.arg1.start, "end": pair.arg1.end, "cui": pair.arg1.cui},
        "arg2": {"start": pair.arg2.start, "end": pair.arg2.end, "cui": pair.arg2.cui},
        "masked_text": pair.masked_text,
    }


def write_candidates(pairs, fh) -> int:
    """Dump candidate pairs as ndjson; returns the number written."""
    n = 0
    for pair in pairs:
        fh.write(json.dumps(candidate_to_dict(pair), ensure_ascii=False) + "\n")
        n += 1
    return n


def read_candidates(path):
    """Yield candidate dicts from an ndjson dump."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield json.loads(line)
