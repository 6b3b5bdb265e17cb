import pytest

from graphck import corpus


@pytest.fixture(scope="session")
def graphs():
    return corpus.load_all()
