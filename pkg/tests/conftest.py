import pytest

from fnalg import config
from fnalg.catalog import lookup


@pytest.fixture(autouse=True)
def _fresh_settings():
    with config.overridden():
        yield


@pytest.fixture
def fn():
    """Catalog object by key."""
    return lambda key: lookup(key).object
