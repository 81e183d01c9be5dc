import itertools
import json
import random

import pytest

from suppmine.corpus import StudyFlags, load_corpus_index
from suppmine.errors import SnapshotError
from suppmine.store import (
    EvidenceSentence,
    EvidenceSpan,
    PaperMeta,
    Rejection,
    SpanBlocklist,
    admit_evidence,
    build_store,
    export_snapshot,
    find_blocklisted,
    interaction_key,
    load_snapshot,
    rank_evidence,
    _rank_key,
)

from datagen import e2e_corpus_records


def _candidate(cui1="C0330205", cui2="C0043031", text="ginkgo affects warfarin."):
    return {
        "paper_id": "p1",
        "sentence_index": 0,
        "text": text,
        "arg1": {"start": 0, "end": 6, "cui": cui1},
        "arg2": {"start": 15, "end": 23, "cui": cui2},
        "masked_text": "[Arg1] affects [Arg2].",
    }


def _evidence(paper_id="p1", sentence_index=0, cui_a="C0043031", cui_b="C0330205",
              year=2010, retracted=False, trial=False, human=False, score=0.9):
    return EvidenceSentence(
        paper_id=paper_id,
        sentence_index=sentence_index,
        text="ginkgo affects warfarin.",
        arg1=EvidenceSpan(0, 6, "ginkgo", "C0330205"),
        arg2=EvidenceSpan(15, 23, "warfarin", "C0043031"),
        cui_a=cui_a,
        cui_b=cui_b,
        score=score,
        paper=PaperMeta(
            title="T", authors=("A",), venue="V", year=year,
            flags=StudyFlags(retracted=retracted, clinical_trial=trial, human=human),
        ),
    )


class TestInteractionKey:
    def test_orders_lexicographically(self, catalog):
        assert interaction_key("C0330205", "C0043031") == "C0043031-C0330205"

    def test_symmetric(self, catalog):
        assert interaction_key("C0043031", "C0330205") == interaction_key(
            "C0330205", "C0043031"
        )

    def test_canonicalizes_with_catalog(self, catalog):
        assert interaction_key("C0006726", "C0019134", catalog) == "C0019134-C3540037"

    def test_same_canonical_rejected(self, catalog):
        with pytest.raises(ValueError):
            interaction_key("C0006726", "C0596235", catalog)


class TestAdmitEvidence:
    def test_admits_good_candidate(self, catalog):
        result = admit_evidence(_candidate(), 0.9, 0.5, SpanBlocklist(), catalog)
        assert isinstance(result, EvidenceSentence)
        assert (result.cui_a, result.cui_b) == ("C0043031", "C0330205")
        assert result.arg1.surface == "ginkgo"

    def test_below_threshold(self, catalog):
        result = admit_evidence(_candidate(), 0.49, 0.5, SpanBlocklist(), catalog)
        assert result == Rejection("below-threshold")

    def test_threshold_boundary_inclusive(self, catalog):
        result = admit_evidence(_candidate(), 0.5, 0.5, SpanBlocklist(), catalog)
        assert isinstance(result, EvidenceSentence)

    def test_blocklisted_span(self, catalog):
        blocklist = SpanBlocklist([("retina", "C0040845")])
        cand = _candidate(cui1="C0040845", cui2="C0043031", text="retina affects warfarin.")
        cand["arg1"]["end"] = 6
        result = admit_evidence(cand, 0.9, 0.5, blocklist, catalog)
        assert result == Rejection("blocklisted")

    def test_blocklist_is_surface_specific(self, catalog):
        # Same cui through a clean surface is not blocked.
        blocklist = SpanBlocklist([("retina", "C0040845")])
        cand = _candidate(cui1="C0040845", cui2="C0043031", text="retinol affects warfarin.")
        cand["arg1"]["end"] = 7
        result = admit_evidence(cand, 0.9, 0.5, blocklist, catalog)
        assert isinstance(result, EvidenceSentence)

    def test_self_pair_after_canonicalization(self, catalog):
        cand = _candidate(cui1="C0006675", cui2="C0006726")
        result = admit_evidence(cand, 0.9, 0.5, SpanBlocklist(), catalog)
        assert result == Rejection("self-pair")

    def test_no_supplement_pair(self, catalog):
        cand = _candidate(cui1="C0043031", cui2="C0019134")
        result = admit_evidence(cand, 0.9, 0.5, SpanBlocklist(), catalog)
        assert result == Rejection("no-supplement")


class TestBlocklistFile:
    def test_load_and_case_insensitivity(self, tmp_path):
        path = tmp_path / "blocklist.tsv"
        path.write_text("# comment\nRetina\tC0040845\n", encoding="utf-8")
        bl = SpanBlocklist.load(path)
        assert ("retina", "C0040845") in bl
        assert ("RETINA", "C0040845") in bl
        assert ("retina", "C0000001") not in bl

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "blocklist.tsv"
        path.write_text("no-tab-here\n", encoding="utf-8")
        with pytest.raises(SnapshotError):
            SpanBlocklist.load(path)


class TestRankEvidence:
    def test_retraction_dominates(self):
        retracted_trial = _evidence(paper_id="a", year=2020, retracted=True, trial=True)
        old_case_report = _evidence(paper_id="b", year=1999)
        ranked = rank_evidence([retracted_trial, old_case_report])
        assert [e.paper_id for e in ranked] == ["b", "a"]

    def test_recency_between_equal_flags(self):
        older = _evidence(paper_id="a", year=2012, trial=True, human=True)
        newer = _evidence(paper_id="b", year=2018, trial=True, human=True)
        ranked = rank_evidence([older, newer])
        assert [e.paper_id for e in ranked] == ["b", "a"]

    def test_paper_id_tie_break(self):
        e1 = _evidence(paper_id="p1", year=2010)
        e2 = _evidence(paper_id="p2", year=2010)
        assert [e.paper_id for e in rank_evidence([e2, e1])] == ["p1", "p2"]

    def test_absent_year_ranks_last(self):
        dated = _evidence(paper_id="a", year=1980)
        undated = _evidence(paper_id="b", year=None)
        assert [e.paper_id for e in rank_evidence([undated, dated])] == ["a", "b"]

    def test_trial_beats_nontrial(self):
        trial = _evidence(paper_id="a", year=2000, trial=True)
        plain = _evidence(paper_id="b", year=2020)
        assert [e.paper_id for e in rank_evidence([plain, trial])] == ["a", "b"]

    def test_permutation_invariance(self):
        rng = random.Random(8)
        items = [
            _evidence(
                paper_id=f"p{i}",
                sentence_index=rng.randint(0, 3),
                year=rng.choice([None, 1999, 2010, 2020]),
                retracted=rng.random() < 0.3,
                trial=rng.random() < 0.5,
                human=rng.random() < 0.5,
            )
            for i in range(12)
        ]
        baseline = rank_evidence(items)
        for _ in range(50):
            shuffled = list(items)
            rng.shuffle(shuffled)
            assert rank_evidence(shuffled) == baseline

    def test_strict_total_order_properties(self):
        rng = random.Random(9)
        items = [
            _evidence(
                paper_id=f"p{i}", sentence_index=i % 4,
                year=rng.choice([None, 2001, 2015]),
                retracted=rng.random() < 0.5, trial=rng.random() < 0.5,
            )
            for i in range(30)
        ]
        keys = [_rank_key(e) for e in items]
        for ka, kb in itertools.permutations(keys, 2):
            assert (ka < kb) != (kb < ka) or ka == kb  # antisymmetry
        for ka, kb, kc in itertools.islice(itertools.permutations(keys, 3), 5000):
            if ka < kb and kb < kc:
                assert ka < kc  # transitivity


class TestBuildStore:
    def test_aggregates_and_sorts_partners(self, catalog):
        evs = [
            _evidence(paper_id=f"p{i}") for i in range(3)
        ] + [
            _evidence(paper_id="p9", cui_a="C0028128", cui_b="C0330205"),
        ]
        store = build_store(evs, {}, catalog, 0.5)
        assert len(store) == 2
        assert store.records["C0043031-C0330205"].evidence_count == 3
        partners = store.interactions_for("C0330205")
        assert [p[0] for p in partners] == ["C0043031", "C0028128"]

    def test_duplicate_evidence_deduplicated(self, catalog):
        evs = [_evidence(), _evidence()]
        store = build_store(evs, {}, catalog, 0.5)
        assert store.records["C0043031-C0330205"].evidence_count == 1

    def test_same_sentence_different_pairs_kept(self, catalog):
        e1 = _evidence()
        e2 = _evidence(cui_a="C0028128", cui_b="C0330205")
        store = build_store([e1, e2], {}, catalog, 0.5)
        assert store.evidence_total == 2

    def test_empty_stream(self, catalog):
        store = build_store([], {}, catalog, 0.5)
        assert len(store) == 0
        assert store.evidence_total == 0

    def test_metadata_attached_from_corpus(self, catalog, tmp_path, e2e_paths):
        papers, _ = load_corpus_index(e2e_paths["corpus"])
        ev = _evidence(paper_id="p01")
        store = build_store([ev], papers, catalog, 0.5)
        rec = store.records["C0043031-C0330205"]
        assert rec.evidence[0].paper.year == 2018
        assert rec.evidence[0].paper.flags.clinical_trial

    def test_merge_order_independent(self, catalog):
        rng = random.Random(4)
        evs = [
            _evidence(paper_id=f"p{i}", year=rng.choice([None, 2000, 2015]))
            for i in range(10)
        ] + [_evidence(paper_id="p3")]  # duplicate
        base = build_store(evs, {}, catalog, 0.5)
        for _ in range(10):
            shuffled = list(evs)
            rng.shuffle(shuffled)
            other = build_store(shuffled, {}, catalog, 0.5)
            assert other.records == base.records

    def test_evidence_count_sums(self, catalog):
        evs = [_evidence(paper_id=f"p{i}") for i in range(5)] + [
            _evidence(paper_id="p0", cui_a="C0028128", cui_b="C0330205")
        ]
        store = build_store(evs, {}, catalog, 0.5)
        assert store.evidence_total == sum(
            r.evidence_count for r in store.records.values()
        )


class TestSnapshot:
    @pytest.fixture()
    def built_store(self, catalog):
        evs = [
            _evidence(paper_id=f"p{i}", year=2000 + i) for i in range(3)
        ] + [_evidence(paper_id="px", cui_a="C0028128", cui_b="C0330205")]
        return build_store(evs, {}, catalog, 0.5)

    def test_roundtrip_equality(self, built_store, tmp_path):
        manifest = export_snapshot(built_store, tmp_path / "snap")
        loaded = load_snapshot(tmp_path / "snap")
        assert loaded.records == built_store.records
        assert loaded.catalog.entities == built_store.catalog.entities
        assert loaded.tau == built_store.tau
        assert manifest["counts"]["evidence"] == built_store.evidence_total
        for cui in built_store.catalog.entities:
            assert loaded.catalog.canonical_cui(cui) == built_store.catalog.canonical_cui(cui)

    def test_corrupted_checksum_rejected(self, built_store, tmp_path):
        export_snapshot(built_store, tmp_path / "snap")
        target = tmp_path / "snap" / "interactions.jsonl"
        target.write_text(target.read_text(encoding="utf-8") + "\n", encoding="utf-8")
        with pytest.raises(SnapshotError, match="checksum"):
            load_snapshot(tmp_path / "snap")

    def test_version_mismatch_rejected(self, built_store, tmp_path):
        export_snapshot(built_store, tmp_path / "snap")
        manifest_path = tmp_path / "snap" / "manifest.json"
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        manifest["format_version"] = 0
        manifest_path.write_text(json.dumps(manifest), encoding="utf-8")
        with pytest.raises(SnapshotError, match="unsupported snapshot version"):
            load_snapshot(tmp_path / "snap")

    def test_missing_manifest_rejected(self, tmp_path):
        (tmp_path / "empty").mkdir()
        with pytest.raises(SnapshotError):
            load_snapshot(tmp_path / "empty")

    def test_no_blocklisted_spans_in_store(self, built_store):
        blocklist = SpanBlocklist([("retina", "C0040845")])
        assert find_blocklisted(built_store, blocklist) == []
