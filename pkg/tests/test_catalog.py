import functools
import json
import random

import pytest

from suppmine.catalog import (
    FUZZY_THRESHOLD,
    build_mention_dictionary,
    fuzzy_match_name,
    levenshtein,
    load_catalog,
    name_similarity,
)
from suppmine.errors import CatalogLookupError, ValidationError


def _write_catalog(tmp_path, agents, clusters=()):
    agents_path = tmp_path / "agents.jsonl"
    with open(agents_path, "w", encoding="utf-8") as fh:
        for a in agents:
            fh.write(json.dumps(a) + "\n")
    clusters_path = None
    if clusters:
        clusters_path = tmp_path / "clusters.tsv"
        clusters_path.write_text(
            "".join(f"{m}\t{c}\n" for m, c in clusters), encoding="utf-8"
        )
    return agents_path, clusters_path


# Independent oracle: naive recursive edit distance.
def _edit_distance_oracle(a, b):
    @functools.lru_cache(maxsize=None)
    def go(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            go(i - 1, j) + 1,
            go(i, j - 1) + 1,
            go(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return go(len(a), len(b))


class TestLevenshtein:
    def test_against_oracle_on_random_strings(self):
        rng = random.Random(42)
        alphabet = "abcdef"
        for _ in range(200):
            a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 9)))
            b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 9)))
            assert levenshtein(a, b) == _edit_distance_oracle(a, b)

    def test_known_cases(self):
        assert levenshtein("warfrin", "warfarin") == 1
        assert levenshtein("", "abc") == 3
        assert levenshtein("same", "same") == 0


class TestFuzzyMatch:
    def test_exact_match_scores_one(self):
        match = fuzzy_match_name("ginkgo", {"ginkgo", "garlic"})
        assert match.candidate == "ginkgo"
        assert match.score == 1.0
        assert match.matched

    def test_close_match(self):
        # oracle: distance("ginko","ginkgo")=1, max len 6 -> 1 - 1/6 ~ 0.833
        match = fuzzy_match_name("ginko", {"ginkgo", "garlic"})
        assert match.candidate == "ginkgo"
        assert match.score == pytest.approx(1 - 1 / 6)
        assert match.matched

    def test_no_match_below_threshold(self):
        match = fuzzy_match_name("zzz", {"ginkgo", "garlic"})
        assert match.score < FUZZY_THRESHOLD
        assert not match.matched

    def test_empty_candidates_is_an_error(self):
        with pytest.raises(ValueError):
            fuzzy_match_name("x", [])

    def test_tie_breaks_lexicographically(self):
        match = fuzzy_match_name("ab", {"ax", "ay"})
        assert match.candidate == "ax"

    def test_case_and_whitespace_insensitive(self):
        assert name_similarity("Vitamin  D", "vitamin d") == 1.0


class TestLoadCatalog:
    def test_loads_and_classifies(self, catalog):
        assert catalog.classify_agent("C0330205") == "supplement"
        assert catalog.classify_agent("C0043031") == "drug"
        assert catalog.classify_agent("C0030705") is None  # not in the catalog

    def test_supplement_precedence_on_dual_listing(self, tmp_path):
        agents = [
            {"cui": "C0000001", "name": "Chromium", "kind": "drug",
             "synonyms": ["chromium picolinate"], "trade_names": ["Chromax"]},
            {"cui": "C0000001", "name": "Chromium", "kind": "supplement"},
        ]
        agents_path, _ = _write_catalog(tmp_path, agents)
        catalog = load_catalog(agents_path)
        assert catalog.classify_agent("C0000001") == "supplement"
        merged = catalog.get("C0000001")
        assert "chromium picolinate" in merged.synonyms
        assert "Chromax" in merged.trade_names

    def test_same_kind_duplicate_rejected(self, tmp_path):
        agents = [
            {"cui": "C0000001", "name": "A", "kind": "drug"},
            {"cui": "C0000001", "name": "A2", "kind": "drug"},
        ]
        agents_path, _ = _write_catalog(tmp_path, agents)
        with pytest.raises(ValidationError):
            load_catalog(agents_path)

    def test_bad_cui_rejected(self, tmp_path):
        agents_path, _ = _write_catalog(
            tmp_path, [{"cui": "X123", "name": "A", "kind": "drug"}]
        )
        with pytest.raises(ValidationError):
            load_catalog(agents_path)

    def test_cluster_cui_absent_from_agents_rejected(self, tmp_path):
        agents = [{"cui": "C0000001", "name": "A", "kind": "drug"}]
        agents_path, clusters_path = _write_catalog(
            tmp_path, agents, clusters=[("C0000001", "C0000009")]
        )
        with pytest.raises(ValidationError):
            load_catalog(agents_path, clusters_path)

    def test_cluster_cycle_rejected(self, tmp_path):
        agents = [
            {"cui": "C0000001", "name": "A", "kind": "drug"},
            {"cui": "C0000002", "name": "B", "kind": "drug"},
        ]
        agents_path, clusters_path = _write_catalog(
            tmp_path, agents,
            clusters=[("C0000001", "C0000002"), ("C0000002", "C0000001")],
        )
        with pytest.raises(ValidationError):
            load_catalog(agents_path, clusters_path)

    def test_cluster_chain_resolved_transitively(self, tmp_path):
        agents = [
            {"cui": f"C000000{i}", "name": f"N{i}", "kind": "supplement"}
            for i in range(1, 4)
        ]
        agents_path, clusters_path = _write_catalog(
            tmp_path, agents,
            clusters=[("C0000001", "C0000002"), ("C0000002", "C0000003")],
        )
        catalog = load_catalog(agents_path, clusters_path)
        assert catalog.canonical_cui("C0000001") == "C0000003"
        assert catalog.canonical_cui("C0000002") == "C0000003"


class TestCanonicalCui:
    def test_calcium_cluster(self, catalog):
        assert catalog.canonical_cui("C0596235") == "C3540037"
        assert catalog.canonical_cui("C0006726") == "C3540037"

    def test_unclustered_identity(self, catalog):
        assert catalog.canonical_cui("C0043031") == "C0043031"

    def test_unknown_cui_raises(self, catalog):
        with pytest.raises(CatalogLookupError):
            catalog.canonical_cui("C9999999")

    def test_idempotent_over_whole_catalog(self, catalog):
        for cui in catalog.entities:
            canon = catalog.canonical_cui(cui)
            assert catalog.canonical_cui(canon) == canon


class TestResolveQueryName:
    def test_trade_name_resolves_to_ingredient(self, catalog):
        matches = catalog.resolve_query_name("Prozac")
        assert matches[0].entity.cui == "C0016365"
        assert matches[0].match_kind == "trade_name"

    def test_exact_name_match(self, catalog):
        matches = catalog.resolve_query_name("warfarin")
        assert matches[0].entity.cui == "C0043031"
        assert matches[0].match_kind == "name"
        assert matches[0].score == 1.0

    def test_fuzzy_match_within_threshold(self, catalog):
        matches = catalog.resolve_query_name("warfrin")
        assert matches[0].entity.cui == "C0043031"

    def test_total_on_arbitrary_inputs(self, catalog):
        for q in ["", "   ", "zzzz-no-such", "!!!", "a" * 300, "été"]:
            catalog.resolve_query_name(q)  # must not raise

    def test_empty_query_empty_result(self, catalog):
        assert catalog.resolve_query_name("") == []


class TestMentionDictionary:
    def test_case_folding_lookup(self, dictionary):
        assert dictionary.lookup("Warfarin") == ["C0043031"]

    def test_trade_name_maps_to_ingredient_cui(self, dictionary):
        assert dictionary.lookup("Sarafem") == ["C0016365"]

    def test_single_character_and_numeric_excluded(self, catalog, tmp_path):
        agents = [
            {"cui": "C0000001", "name": "Zinc", "kind": "supplement",
             "synonyms": ["z", "30", "zn"]},
        ]
        agents_path, _ = _write_catalog(tmp_path, agents)
        d = build_mention_dictionary(load_catalog(agents_path))
        assert "z" not in d
        assert "30" not in d
        assert "zn" in d

    def test_every_surface_resolves_to_classified_cui(self, dictionary, catalog):
        for surface, cuis in dictionary.surface_cuis.items():
            for cui in cuis:
                assert catalog.classify_agent(cui) is not None, surface

    def test_colliding_synonym_keeps_both_and_prefers_supplement(self, tmp_path):
        agents = [
            {"cui": "C0000002", "name": "DrugX", "kind": "drug", "synonyms": ["shared"]},
            {"cui": "C0000005", "name": "SuppY", "kind": "supplement", "synonyms": ["shared"]},
        ]
        agents_path, _ = _write_catalog(tmp_path, agents)
        d = build_mention_dictionary(load_catalog(agents_path))
        assert d.lookup("shared") == ["C0000005", "C0000002"]

    def test_collision_among_same_kind_prefers_smaller_cui(self, tmp_path):
        agents = [
            {"cui": "C0000007", "name": "B", "kind": "drug", "synonyms": ["shared"]},
            {"cui": "C0000003", "name": "A", "kind": "drug", "synonyms": ["shared"]},
        ]
        agents_path, _ = _write_catalog(tmp_path, agents)
        d = build_mention_dictionary(load_catalog(agents_path))
        assert d.lookup("shared") == ["C0000003", "C0000007"]
