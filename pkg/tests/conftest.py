from pathlib import Path

import pytest

from ccdalg.catalog import Catalog, load_catalog
from ccdalg.fields import Field, prime_field, rationals

ROOT = Path(__file__).parents[1]
CATALOG_PATH = ROOT / "data" / "catalog.json"


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return load_catalog(CATALOG_PATH)


@pytest.fixture
def qq() -> Field:
    return rationals()


@pytest.fixture
def gf2() -> Field:
    return prime_field(2)


@pytest.fixture
def gf7() -> Field:
    return prime_field(7)
