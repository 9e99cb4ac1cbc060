import pytest

from clustertopics.corpus import TRAIN, Document, load_stopwords


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


def make_docs(token_lists, split=TRAIN, prefix="d"):
    return [
        Document(id=f"{prefix}{i}", tokens=tuple(toks), split=split)
        for i, toks in enumerate(token_lists)
    ]
