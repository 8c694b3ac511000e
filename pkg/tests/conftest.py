import warnings
from pathlib import Path

import numpy as np
import pytest

from ovation import lasso
from ovation.corpus import build_examples, load_corpus_dir, segment_into_chunks
from ovation.features import extract_example, registry_for_bundle
from ovation.pipeline import Config, load_resources

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def config():
    return Config()


@pytest.fixture(scope="session")
def bundle(config):
    bundle, _ = load_resources(config)
    return bundle


@pytest.fixture(scope="session")
def registry(bundle):
    return registry_for_bundle(bundle)


@pytest.fixture(scope="session")
def dict_lines(config):
    return Path(config.phonetic_dict).read_text(encoding="utf-8").splitlines()


@pytest.fixture(scope="session")
def corpus_dir():
    return FIXTURES / "corpus20"


@pytest.fixture(scope="session")
def corpus_chunks(corpus_dir):
    transcripts = load_corpus_dir(corpus_dir)
    return [c for t in transcripts for c in segment_into_chunks(t)]


@pytest.fixture(scope="session")
def corpus_matrix(corpus_chunks, bundle, registry):
    examples = build_examples(corpus_chunks, 1, 42)
    rows = [extract_example(e, bundle, registry).values for e in examples]
    y = [1 if e.label == "pos" else 0 for e in examples]
    return lasso.DesignMatrix(np.array(rows), np.array(y), registry.names)


@pytest.fixture(scope="session")
def trained_model(corpus_matrix, registry):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lam = lasso.cv_select_lambda(corpus_matrix, k=10, seed=42)
    return lasso.fit(
        corpus_matrix, lam, seed=42, registry_fingerprint=registry.fingerprint()
    )
