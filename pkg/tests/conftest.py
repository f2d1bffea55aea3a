import pytest

from quantalib import corpus
from quantalib.quantaloid import ssi


@pytest.fixture(scope="session")
def corpus_quantaloids():
    return corpus.corpus_quantaloids()


@pytest.fixture(scope="session")
def ssi_corpus(corpus_quantaloids):
    return {name: ssi(q) for name, q in corpus_quantaloids.items()}


@pytest.fixture(scope="session")
def symmetric_categories():
    return corpus.corpus_symmetric_categories()
