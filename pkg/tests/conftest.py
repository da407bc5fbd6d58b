import pytest

from hermlie.generator import catalog


@pytest.fixture(scope="session")
def catalog_entries():
    return dict(catalog())
