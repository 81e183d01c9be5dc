#!/usr/bin/env python3
"""Record API responses from the fixture corpus for the frontend contract tests.

Rebuilds the demo store through the library pipeline, then captures the JSON
bodies the HTTP service returns. Outputs land in frontend/tests/fixtures/.
Rerun whenever the API shape or the fixture corpus changes.
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

from datagen import write_e2e_fixtures  # noqa: E402

from suppmine.catalog import build_mention_dictionary, load_catalog  # noqa: E402
from suppmine.classifier.baseline import BaselineConfig, train_baseline  # noqa: E402
from suppmine.classifier.instances import load_labeled_instances  # noqa: E402
from suppmine.corpus import load_corpus_index, stream_corpus  # noqa: E402
from suppmine.pipeline import candidate_to_dict, extract_candidates  # noqa: E402
from suppmine.service import create_app  # noqa: E402
from suppmine.store import Rejection, SpanBlocklist, admit_evidence, build_store  # noqa: E402

CAPTURES = [
    ("search_ginkgo.json", "/api/agent/search", {"q": "ginkgo"}),
    ("search_prozac.json", "/api/agent/search", {"q": "Prozac"}),
    ("search_calcium.json", "/api/agent/search", {"q": "calcium"}),
    ("search_none.json", "/api/agent/search", {"q": "zzzz-no-such"}),
    ("agent_ginkgo.json", "/api/agent/C0330205", {}),
    ("agent_calcium_member.json", "/api/agent/C0596235", {}),
    ("interaction_ginkgo_warfarin_page1.json",
     "/api/interaction/C0043031-C0330205", {"page": 1, "per_page": 2}),
    ("interaction_ginkgo_warfarin_page2.json",
     "/api/interaction/C0043031-C0330205", {"page": 2, "per_page": 2}),
    ("interaction_garlic_warfarin.json",
     "/api/interaction/C0017102-C0043031", {}),
    ("meta.json", "/api/meta", {}),
]


def main():
    out_dir = REPO / "frontend" / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        paths = write_e2e_fixtures(tmp)
        instances = load_labeled_instances(paths["instances"])
        model = train_baseline(
            [i for i in instances if i.split == "train"],
            [i for i in instances if i.split == "dev"],
            BaselineConfig(max_epochs=15),
        )
        catalog = load_catalog(paths["agents"], paths["clusters"])
        dictionary = build_mention_dictionary(catalog)
        blocklist = SpanBlocklist.load(paths["blocklist"])
        candidates = [
            candidate_to_dict(p)
            for p in extract_candidates(stream_corpus(paths["corpus"]), dictionary, catalog)
        ]
        scores = model.score_texts([c["masked_text"] for c in candidates])
        admitted = []
        for cand, score in zip(candidates, scores):
            result = admit_evidence(cand, float(score), 0.5, blocklist, catalog)
            if not isinstance(result, Rejection):
                admitted.append(result)
        papers, _ = load_corpus_index(paths["corpus"])
        store = build_store(admitted, papers, catalog, 0.5)

    client = TestClient(create_app(store))
    for name, path, params in CAPTURES:
        resp = client.get(path, params=params)
        assert resp.status_code == 200, (path, resp.status_code)
        (out_dir / name).write_text(
            json.dumps(resp.json(), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        print(f"recorded {name}")


if __name__ == "__main__":
    main()
