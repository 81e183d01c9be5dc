import pytest

from suppmine.catalog import build_mention_dictionary, load_catalog
from suppmine.classifier.baseline import BaselineConfig, BaselineModel, train_baseline
from suppmine.classifier.instances import load_labeled_instances
from suppmine.corpus import load_corpus_index, stream_corpus
from suppmine.pipeline import candidate_to_dict, extract_candidates
from suppmine.store import Rejection, SpanBlocklist, admit_evidence, build_store

from datagen import write_e2e_fixtures


@pytest.fixture(scope="session")
def e2e_paths(tmp_path_factory):
    """Fixture corpus, catalog, blocklist, config, and a trained model."""
    root = tmp_path_factory.mktemp("e2e")
    paths = write_e2e_fixtures(root)
    instances = load_labeled_instances(paths["instances"])
    model = train_baseline(
        [i for i in instances if i.split == "train"],
        [i for i in instances if i.split == "dev"],
        BaselineConfig(max_epochs=15),
    )
    model.save(paths["model"])
    return paths


@pytest.fixture(scope="session")
def catalog(e2e_paths):
    return load_catalog(e2e_paths["agents"], e2e_paths["clusters"])


@pytest.fixture(scope="session")
def dictionary(catalog):
    return build_mention_dictionary(catalog)


@pytest.fixture(scope="session")
def e2e_store(e2e_paths, catalog, dictionary):
    """Store built from the fixture corpus through the library-level flow."""
    model = BaselineModel.load(e2e_paths["model"])
    blocklist = SpanBlocklist.load(e2e_paths["blocklist"])
    stream = stream_corpus(e2e_paths["corpus"])
    candidates = [
        candidate_to_dict(p) for p in extract_candidates(stream, dictionary, catalog)
    ]
    scores = model.score_texts([c["masked_text"] for c in candidates])
    admitted = []
    for cand, score in zip(candidates, scores):
        result = admit_evidence(cand, float(score), 0.5, blocklist, catalog)
        if not isinstance(result, Rejection):
            admitted.append(result)
    papers, _ = load_corpus_index(e2e_paths["corpus"])
    return build_store(admitted, papers, catalog, 0.5)


@pytest.fixture(scope="session")
def api_client(e2e_store):
    from fastapi.testclient import TestClient

    from suppmine.service import create_app

    return TestClient(create_app(e2e_store))
